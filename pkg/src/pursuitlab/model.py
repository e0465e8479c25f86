"""Seeded generation of benchmark instances.

A trial draws a Gaussian sensing matrix with unit-normalized columns, a
sparse signal with uniform nonzero values on [-1, 1], and Gaussian noise
scaled to hit a requested SNR exactly.  Everything is driven by
:class:`pursuitlab.rng.Rng`, so instances are reproducible bit for bit and
independent child streams can be handed to parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import constants
from .errors import DimensionMismatch, InvalidDims, ZeroSignal
from .linalg import as_matrix, as_vector, vec_norm2
from .rng import Rng

__all__ = [
    "SensingMatrix",
    "SparseSignal",
    "Measurement",
    "gen_gaussian_matrix",
    "gen_sensing_matrix",
    "gen_sparse_signal",
    "gen_measurement",
]


@dataclass(frozen=True)
class SensingMatrix:
    """m x n measurement operator with unit-norm columns, m <= n."""

    mat: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        mat = as_matrix(self.mat)
        if mat.shape != (self.m, self.n):
            raise DimensionMismatch(f"matrix shape {mat.shape} does not match ({self.m}, {self.n})")
        if self.m > self.n:
            raise InvalidDims(f"m={self.m} exceeds ambient dimension n={self.n}")
        norms = np.sqrt((mat * mat).sum(axis=0))
        if np.abs(norms - 1.0).max() > constants.UNIT_COLUMN_ATOL:
            raise InvalidDims("columns must have unit Euclidean norm")
        object.__setattr__(self, "mat", mat)


@dataclass(frozen=True)
class SparseSignal:
    """Ground-truth vector with exactly k nonzero entries on ``support``."""

    x: np.ndarray
    support: tuple[int, ...]
    k: int

    def __post_init__(self):
        x = as_vector(self.x)
        support = tuple(int(i) for i in self.support)
        nz = tuple(np.flatnonzero(x))
        if support != nz:
            raise InvalidDims("support must list exactly the nonzero indices, ascending")
        if len(support) != self.k:
            raise InvalidDims(f"|support|={len(support)} does not match k={self.k}")
        mags = np.abs(x[list(support)])
        if len(support) and (mags.min() <= 0.0 or mags.max() > 1.0):
            raise InvalidDims("nonzero magnitudes must lie in (0, 1]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "support", support)


@dataclass(frozen=True)
class Measurement:
    """Samples y = A x + v with the noise actually added and its energy."""

    y: np.ndarray
    v: np.ndarray
    epsilon: float
    snr_db: float | None = field(default=None)

    def __post_init__(self):
        y = as_vector(self.y)
        v = np.asarray(self.v, dtype=np.float64)
        if v.shape != y.shape:
            raise DimensionMismatch("noise vector must match y in length")
        if not np.isfinite(v).all():
            raise InvalidDims("noise entries must be finite")
        if self.epsilon != float(np.sqrt(v @ v)):
            raise InvalidDims("epsilon must equal ||v||_2 as constructed")
        if (self.snr_db is None) != (self.epsilon == 0.0):
            raise InvalidDims("epsilon must be zero exactly for noise-free measurements")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "v", v)

    @property
    def noise_free(self) -> bool:
        return self.snr_db is None


def gen_gaussian_matrix(rng: Rng, m: int, n: int) -> np.ndarray:
    """Raw m x n matrix of i.i.d. standard Gaussian entries (row-major draw order).

    This is the unnormalized ensemble used for restricted-isometry studies,
    where the conventional scaling is 1/sqrt(m); column-normalized sensing
    matrices come from :func:`gen_sensing_matrix`.
    """
    if not (1 <= m and 1 <= n):
        raise InvalidDims(f"matrix dims must be positive, got {m}x{n}")
    return rng.normal(m * n).reshape(m, n)


def gen_sensing_matrix(rng: Rng, m: int, n: int) -> SensingMatrix:
    """Gaussian m x n matrix with every column scaled to unit norm."""
    if not (1 <= m <= n):
        raise InvalidDims(f"need 1 <= m <= n, got m={m}, n={n}")
    g = gen_gaussian_matrix(rng, m, n)
    norms = np.sqrt((g * g).sum(axis=0))
    while (norms == 0.0).any():  # probability ~0; keeps the invariant unconditional
        bad = np.flatnonzero(norms == 0.0)
        g[:, bad] = rng.normal(m * bad.size).reshape(m, bad.size)
        norms = np.sqrt((g * g).sum(axis=0))
    g /= norms
    return SensingMatrix(mat=g, m=m, n=n)


def gen_sparse_signal(rng: Rng, n: int, k: int) -> SparseSignal:
    """k-sparse signal: uniform random support, values uniform on [-1, 1].

    The support is a uniform k-subset (Fisher-Yates prefix of a permutation);
    values pair with the sorted support in draw order.  Exact zero draws are
    redrawn so ``||x||_0 == k`` holds by construction.
    """
    if not (1 <= k <= n):
        raise InvalidDims(f"need 1 <= k <= n, got k={k}, n={n}")
    perm = list(range(n))
    for i in range(k):
        j = i + rng.below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    support = sorted(perm[:k])
    vals = rng.uniform_symmetric(k)
    while (vals == 0.0).any():
        zero = np.flatnonzero(vals == 0.0)
        vals[zero] = rng.uniform_symmetric(zero.size)
    x = np.zeros(n, dtype=np.float64)
    x[support] = vals
    return SparseSignal(x=x, support=tuple(support), k=k)


def gen_measurement(rng: Rng, a: SensingMatrix, x: SparseSignal, snr_db: float | None) -> Measurement:
    """Measure y = A x + v with ||v||_2 chosen to attain ``snr_db`` exactly.

    The noise is drawn i.i.d. standard Gaussian and rescaled so that
    10 log10(||Ax||^2 / ||v||^2) equals ``snr_db``; ``None`` means noise-free
    (v = 0, epsilon = 0).
    """
    if x.x.shape[0] != a.n:
        raise DimensionMismatch(f"signal length {x.x.shape[0]} does not match ambient dim {a.n}")
    ax = a.mat @ x.x
    if snr_db is None:
        return Measurement(y=ax, v=np.zeros(a.m), epsilon=0.0, snr_db=None)
    if not np.isfinite(snr_db):
        raise InvalidDims("snr_db must be finite (or None for noise-free)")
    nax = vec_norm2(ax)
    if nax == 0.0:
        raise ZeroSignal("||Ax||_2 = 0: SNR is undefined")
    v = rng.normal(a.m)
    nv = float(np.sqrt(v @ v))
    while nv == 0.0:  # probability ~0
        v = rng.normal(a.m)
        nv = float(np.sqrt(v @ v))
    v *= nax * 10.0 ** (-snr_db / 20.0) / nv
    return Measurement(y=ax + v, v=v, epsilon=float(np.sqrt(v @ v)), snr_db=float(snr_db))
