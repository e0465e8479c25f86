"""Reconstruction metrics, the exact RIC verifier, and regularization bound checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import constants, linalg
from .errors import DimensionMismatch, InvalidOmega, TooLarge, UndefinedSnr, ZeroSpread
from .model import SparseSignal
from .pursuit import RecoveryResult, STALLED
from .rng import Rng

__all__ = [
    "TrialMetrics",
    "nrmse",
    "snr_db",
    "support_metrics",
    "trial_metrics",
    "ric_exact",
    "BoundCheck",
    "LandweberBound",
    "check_tikhonov_bound",
    "check_landweber_bound",
    "landweber_limit_gap",
    "tikhonov_bound_ensemble",
    "landweber_bound_ensemble",
]


@dataclass(frozen=True)
class TrialMetrics:
    """Per-trial outcome of one recovery run against the ground truth.

    ``support_size`` counts the declared support; ``effective_support_size``
    counts estimate entries above ``EFFECTIVE_SUPPORT_ATOL`` in magnitude.
    ``support_recovered`` means supp(x) is contained in the declared support.
    """

    nrmse: float
    support_size: int
    effective_support_size: int
    support_recovered: bool
    exact_support: bool
    residual_final: float
    iterations: int
    termination: str

    @property
    def stalled(self) -> bool:
        return self.termination == STALLED


def nrmse(x, x_hat) -> float:
    """(1/sqrt(N)) ||x - x_hat||_2 / (max(x) - min(x)).

    The spread is taken over all N entries of the true signal, zeros
    included.  Raises :class:`ZeroSpread` when the signal is constant.
    """
    x, x_hat = linalg.as_vector(x), linalg.as_vector(x_hat)
    if x.shape != x_hat.shape:
        raise DimensionMismatch("signals must have equal length")
    delta = float(x.max() - x.min())
    if delta == 0.0:
        raise ZeroSpread("true signal has zero spread")
    d = x - x_hat
    return float(np.sqrt(d @ d) / (np.sqrt(x.shape[0]) * delta))


def snr_db(ax, v) -> float:
    """10 log10(||Ax||^2 / ||v||^2)."""
    ax, v = linalg.as_vector(ax), linalg.as_vector(v)
    pa = float(ax @ ax)
    pv = float(v @ v)
    if pa == 0.0 or pv == 0.0:
        raise UndefinedSnr("SNR undefined when either energy is zero")
    return float(10.0 * np.log10(pa / pv))


def support_metrics(x: SparseSignal, result: RecoveryResult) -> tuple[int, bool, bool]:
    """(support size, supp(x) contained in S, supp(x) equals S)."""
    truth = set(x.support)
    got = set(result.support)
    return len(got), truth.issubset(got), truth == got


def trial_metrics(x: SparseSignal, result: RecoveryResult) -> TrialMetrics:
    """Bundle all per-trial metrics for one recovery result."""
    size, recovered, exact = support_metrics(x, result)
    return TrialMetrics(
        nrmse=nrmse(x.x, result.x_hat),
        support_size=size,
        effective_support_size=int((np.abs(result.x_hat) > constants.EFFECTIVE_SUPPORT_ATOL).sum()),
        support_recovered=recovered,
        exact_support=exact,
        residual_final=result.residual_history[-1],
        iterations=result.iterations,
        termination=result.termination,
    )


def _colex_subsets(n: int, k: int):
    """All k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in _colex_subsets(top, k - 1):
            yield rest + (top,)


def ric_exact(a, k: int) -> float:
    """Exact restricted isometry constant of order k, by enumeration.

    delta_k is the largest deviation of any k-column Gram spectrum from 1:
    max over k-subsets S of max(1 - lambda_min(A_S.T A_S),
    lambda_max(A_S.T A_S) - 1).  Enumeration is refused above
    ``RIC_MAX_SUBSETS`` subsets; subsets are visited in colexicographic
    order so partial progress is deterministic.
    """
    a = linalg.as_matrix(a)
    m, n = a.shape
    if not (1 <= k <= m):
        raise DimensionMismatch(f"need 1 <= k <= m, got k={k}, m={m}")
    if k > n:
        raise DimensionMismatch(f"k={k} exceeds column count {n}")
    if math.comb(n, k) > constants.RIC_MAX_SUBSETS:
        raise TooLarge(f"C({n},{k}) = {math.comb(n, k)} subsets exceeds the enumeration budget")
    delta = 0.0
    for subset in _colex_subsets(n, k):
        lo, hi = linalg.gram_eig_extremes(a[:, subset])
        delta = max(delta, 1.0 - lo, hi - 1.0)
    return delta


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


class LandweberBound(NamedTuple):
    ell: int
    lhs: float
    rhs: float
    holds: bool


def check_tikhonov_bound(a_s, y_clean, y_noisy, alpha: float) -> BoundCheck:
    """Verify ||x(alpha, clean) - x(alpha, noisy)||_2 <= ||dy||_2 / sqrt(alpha).

    Both estimates come from :func:`pursuitlab.linalg.solve_tikhonov` on a
    fixed column set; the bound says noise amplification is capped by the
    regularization strength.
    """
    a_s = linalg.as_matrix(a_s)
    y_clean, y_noisy = linalg.as_vector(y_clean), linalg.as_vector(y_noisy)
    x0 = linalg.solve_tikhonov(a_s, y_clean, alpha)
    xe = linalg.solve_tikhonov(a_s, y_noisy, alpha)
    d = x0 - xe
    lhs = float(np.sqrt(d @ d))
    dy = y_noisy - y_clean
    rhs = float(np.sqrt(dy @ dy) / np.sqrt(alpha))
    return BoundCheck(lhs, rhs, lhs <= rhs + constants.BOUND_SLACK)


def _validate_omega(a_s: np.ndarray, omega: float) -> None:
    _, hi = linalg.gram_eig_extremes(a_s)
    if not (0.0 < omega <= (1.0 + constants.OMEGA_SLACK) / hi):
        raise InvalidOmega(f"need 0 < omega <= {1.0 / hi:g}, got {omega:g}")


def check_landweber_bound(a_s, y_clean, y_noisy, omega: float, ell_max: int) -> list[LandweberBound]:
    """Track ||x(ell, clean) - x(ell, noisy)||_2 against sqrt(ell) ||dy||_2.

    Runs the two Landweber sequences from zero side by side and reports the
    semi-convergence bound for every ell from 0 to ell_max.
    """
    a_s = linalg.as_matrix(a_s)
    y_clean, y_noisy = linalg.as_vector(y_clean), linalg.as_vector(y_noisy)
    _validate_omega(a_s, omega)
    dy = y_noisy - y_clean
    eps = float(np.sqrt(dy @ dy))
    x0 = np.zeros(a_s.shape[1])
    xe = np.zeros(a_s.shape[1])
    rows = [LandweberBound(0, 0.0, 0.0, True)]
    for ell in range(1, ell_max + 1):
        x0 = x0 + omega * (a_s.T @ (y_clean - a_s @ x0))
        xe = xe + omega * (a_s.T @ (y_noisy - a_s @ xe))
        d = x0 - xe
        lhs = float(np.sqrt(d @ d))
        rhs = float(np.sqrt(ell) * eps)
        rows.append(LandweberBound(ell, lhs, rhs, lhs <= rhs + constants.BOUND_SLACK))
    return rows


def landweber_limit_gap(a_s, y, omega: float, ell: int) -> float:
    """Distance of the ell-th Landweber iterate (from zero) to the least-squares solution."""
    a_s = linalg.as_matrix(a_s)
    y = linalg.as_vector(y)
    _validate_omega(a_s, omega)
    target = linalg.least_squares(a_s, y)
    x = np.zeros(a_s.shape[1])
    for _ in range(ell):
        x = x + omega * (a_s.T @ (y - a_s @ x))
    d = x - target
    return float(np.sqrt(d @ d))


def _bound_instance(rng: Rng, m: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Random full-rank m x s matrix (near-unit columns) and a clean rhs in its range."""
    a_s = rng.normal(m * s).reshape(m, s) / np.sqrt(m)
    x = rng.normal(s)
    return a_s, a_s @ x


def tikhonov_bound_ensemble(seed: int, count: int = 100,
                            alphas=(0.01, 0.1, 1.0, 10.0)) -> list[BoundCheck]:
    """Seeded instance sweep for the Tikhonov noise-amplification bound."""
    results = []
    for i in range(count):
        rng = Rng(seed).child(0x71, i)
        m = 8 + int(rng.below(17))
        s = 2 + int(rng.below(min(7, m - 1)))
        a_s, y_clean = _bound_instance(rng, m, s)
        noise = rng.normal(m) * (0.001 + rng.uniform(1)[0])
        alpha = alphas[i % len(alphas)]
        results.append(check_tikhonov_bound(a_s, y_clean, y_clean + noise, alpha))
    return results


def landweber_bound_ensemble(seed: int, count: int = 100, ell_max: int = 100) -> list[list[LandweberBound]]:
    """Seeded instance sweep for the Landweber semi-convergence bound.

    Uses omega = ||A_S||_F^-2, which always satisfies the spectral constraint.
    """
    results = []
    for i in range(count):
        rng = Rng(seed).child(0x72, i)
        m = 8 + int(rng.below(17))
        s = 2 + int(rng.below(min(7, m - 1)))
        a_s, y_clean = _bound_instance(rng, m, s)
        noise = rng.normal(m) * (0.001 + rng.uniform(1)[0])
        omega = 1.0 / float((a_s * a_s).sum())
        results.append(check_landweber_bound(a_s, y_clean, y_clean + noise, omega, ell_max))
    return results
