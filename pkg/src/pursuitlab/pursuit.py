"""Greedy sparse recovery: OMP, T-OMP, L-OMP, SGP, and CoSaMP.

The four support-augmenting algorithms share one outer loop: pick the column
most correlated with the residual (ties to the lowest index, already-selected
columns excluded), append it to the support, update the signal estimate, and
recompute the residual; iteration ends when ||r||_2 drops to the threshold or
the iteration cap is hit.  They differ only in the estimation step:

  OMP    exact least squares on the active columns
  T-OMP  ridge-regularized solve (A_S.T A_S + alpha I)^-1 A_S.T y
  L-OMP  ``lam`` Landweber sweeps, warm-started from the previous estimate
  SGP    one LMS pass over the m measurement rows, warm-started likewise

CoSaMP instead re-proposes 2k candidate columns per iteration, solves least
squares on the union with the current support, and prunes to the k largest
coefficients.

A zero residual threshold is replaced internally by a small multiple of
||y||_2 so the stopping rule is attainable in floating point.  Runs that
cannot proceed (rank-deficient active set, vanishing correlations, diverging
inner iteration) end with termination ``"stalled"`` and the last valid
estimate rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import constants, linalg
from .errors import DimensionMismatch, InvalidDims, InvalidOmega, RankDeficient, ValidationError
from .model import SensingMatrix


def _is_positive_real(v) -> bool:
    return isinstance(v, (int, float, np.integer, np.floating)) and np.isfinite(v) and v > 0.0

__all__ = [
    "RESIDUAL_MET",
    "MAX_ITERATIONS",
    "STALLED",
    "StoppingRule",
    "AlgorithmSpec",
    "RecoveryResult",
    "recover_omp",
    "recover_tomp",
    "recover_lomp",
    "recover_sgp",
    "recover_cosamp",
    "recover",
    "observation_vector",
    "auto_sgp_step",
]

RESIDUAL_MET = "residual_met"
MAX_ITERATIONS = "max_iterations"
STALLED = "stalled"

_VARIANTS = ("omp", "tomp", "lomp", "sgp", "cosamp")


@dataclass(frozen=True)
class StoppingRule:
    """Terminate when ||r||_2 <= residual_threshold or after max_iterations."""

    residual_threshold: float
    max_iterations: int

    def __post_init__(self):
        if not (self.residual_threshold >= 0.0 and np.isfinite(self.residual_threshold)):
            raise ValidationError("residual_threshold must be a finite nonnegative real")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValidationError("max_iterations must be a positive integer")


@dataclass(frozen=True)
class AlgorithmSpec:
    """Which algorithm to run, with exactly its own parameters set.

    omega (L-OMP) may be a positive float, "auto" (1/||A||_F^2, fixed for the
    whole run), or "support" (refreshed every outer iteration from a Gershgorin
    bound on the active Gram matrix, so it always satisfies the spectral
    constraint).  mu (SGP) may be a positive float or "auto" = 2m/(3 k_max).
    """

    variant: str
    alpha: float | None = None
    lam: int | None = None
    omega: float | str | None = None
    k_max: int | None = None
    mu: float | str | None = None
    k: int | None = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}")
        allowed = {
            "omp": (),
            "tomp": ("alpha",),
            "lomp": ("lam", "omega"),
            "sgp": ("k_max", "mu"),
            "cosamp": ("k",),
        }[self.variant]
        for name in ("alpha", "lam", "omega", "k_max", "mu", "k"):
            value = getattr(self, name)
            if value is not None and name not in allowed:
                raise ValidationError(f"{self.variant} does not take parameter {name!r}")
        if self.variant == "tomp":
            if self.alpha is None or not (self.alpha > 0.0 and np.isfinite(self.alpha)):
                raise ValidationError("tomp requires alpha > 0")
        if self.variant == "lomp":
            if self.lam is None or int(self.lam) != self.lam or self.lam < 1:
                raise ValidationError("lomp requires a positive integer lam")
            if self.omega is not None and self.omega not in ("auto", "support") and not _is_positive_real(self.omega):
                raise ValidationError("omega must be positive, 'auto', or 'support'")
        if self.variant == "sgp":
            if self.k_max is None or int(self.k_max) != self.k_max or self.k_max < 1:
                raise ValidationError("sgp requires a positive integer k_max")
            if self.mu is not None and self.mu != "auto" and not _is_positive_real(self.mu):
                raise ValidationError("mu must be positive or 'auto'")
        if self.variant == "cosamp":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValidationError("cosamp requires a positive integer k")


@dataclass(frozen=True)
class RecoveryResult:
    """Estimate, its support, per-iteration residual norms, and how the run ended.

    ``residual_history[0]`` is ||y||_2; one entry follows per completed outer
    iteration, so ``len(residual_history) == iterations + 1``.
    """

    x_hat: np.ndarray
    support: tuple[int, ...]
    residual_history: tuple[float, ...]
    iterations: int
    termination: str

    def __post_init__(self):
        if len(self.residual_history) != self.iterations + 1:
            raise ValidationError("residual_history must hold iterations + 1 entries")


def _coerce_operator(a) -> np.ndarray:
    if isinstance(a, SensingMatrix):
        return a.mat
    return linalg.as_matrix(a)


def observation_vector(a, r) -> np.ndarray:
    """Correlations A.T r of the residual with every column."""
    return linalg.matvec_transpose(_coerce_operator(a), r)


def _effective_threshold(rule: StoppingRule, ynorm: float) -> float:
    if rule.residual_threshold > 0.0:
        return rule.residual_threshold
    return constants.NOISE_FREE_STOP_RTOL * ynorm


def _result(n, selected, xs, hist, termination) -> RecoveryResult:
    x_hat = np.zeros(n, dtype=np.float64)
    if selected:
        x_hat[np.asarray(selected)] = xs
    return RecoveryResult(
        x_hat=x_hat,
        support=tuple(sorted(selected)),
        residual_history=tuple(hist),
        iterations=len(hist) - 1,
        termination=termination,
    )


def _run_augmenting(amat: np.ndarray, y: np.ndarray, stop: StoppingRule, update) -> RecoveryResult:
    m, n = amat.shape
    y = linalg.as_vector(y)
    if y.shape[0] != m:
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {m}")
    ynorm = float(np.sqrt(y @ y))
    thr = _effective_threshold(stop, ynorm)
    hist = [ynorm]
    selected: list[int] = []
    mask = np.zeros(n, dtype=bool)
    xs = np.zeros(0, dtype=np.float64)
    if ynorm <= thr:
        return _result(n, selected, xs, hist, RESIDUAL_MET)

    stall_tol = constants.STALL_CORRELATION_RTOL * ynorm
    r = y.copy()
    while True:
        c = np.abs(amat.T @ r)
        c[mask] = -1.0  # selected columns never re-enter the support
        s = int(np.argmax(c))
        if c[s] <= stall_tol:
            return _result(n, selected, xs, hist, STALLED)
        selected.append(s)
        mask[s] = True
        asub = amat[:, selected]
        try:
            xs_new = update(asub, y, xs)
        except RankDeficient:
            selected.pop()
            mask[s] = False
            return _result(n, selected, xs, hist, STALLED)
        if not np.isfinite(xs_new).all():
            selected.pop()
            mask[s] = False
            return _result(n, selected, xs, hist, STALLED)
        xs = xs_new
        r = y - asub @ xs
        hist.append(float(np.sqrt(r @ r)))
        if hist[-1] <= thr:
            return _result(n, selected, xs, hist, RESIDUAL_MET)
        if len(hist) - 1 >= stop.max_iterations:
            return _result(n, selected, xs, hist, MAX_ITERATIONS)


def recover_omp(a, y, stop: StoppingRule) -> RecoveryResult:
    """Orthogonal matching pursuit: exact least-squares projection per iteration."""
    amat = _coerce_operator(a)

    def update(asub, yy, _prev):
        return linalg.least_squares(asub, yy)

    return _run_augmenting(amat, y, stop, update)


def recover_tomp(a, y, stop: StoppingRule, alpha: float) -> RecoveryResult:
    """OMP with the projection replaced by a ridge-regularized solve.

    Each iterate equals (A_S.T A_S + alpha I)^-1 A_S.T y for the current
    support.  Because the support grows one column at a time, the inverse of
    the regularized Gram matrix is maintained by rank-one (Schur complement)
    updates instead of refactorizing; the result matches the direct solve to
    roundoff since the regularized system is well conditioned by alpha.
    """
    amat = _coerce_operator(a)
    if not (isinstance(alpha, (int, float, np.integer, np.floating)) and alpha > 0.0 and np.isfinite(alpha)):
        raise ValidationError("alpha must be a positive finite real")
    alpha = float(alpha)
    state: dict = {"h": None}

    def update(asub, yy, _prev):
        t = asub.shape[1]
        if t == 1:
            h = np.array([[1.0 / (float(asub[:, 0] @ asub[:, 0]) + alpha)]])
        else:
            anew = asub[:, -1]
            g = asub[:, :-1].T @ anew
            u = state["h"] @ g
            s = float(anew @ anew) + alpha - float(g @ u)
            if s <= 0.0 or not np.isfinite(s):  # cannot happen for alpha > 0; rebuild defensively
                gram = asub.T @ asub
                gram[np.diag_indices_from(gram)] += alpha
                h = linalg._spd_inverse(gram)
            else:
                h = np.empty((t, t))
                h[: t - 1, : t - 1] = state["h"] + np.outer(u, u / s)
                h[: t - 1, t - 1] = -u / s
                h[t - 1, : t - 1] = h[: t - 1, t - 1]
                h[t - 1, t - 1] = 1.0 / s
        state["h"] = h
        return h @ (asub.T @ yy)

    return _run_augmenting(amat, y, stop, update)


def _landweber_sweeps(asub, y, z0, omega, lam) -> np.ndarray:
    """lam gradient sweeps z += omega A.T (y - A z), starting from z0.

    Uses the hoisted normal-equation form (Gram matrix and A.T y computed
    once), which is algebraically the same iteration.
    """
    g = asub.T @ asub
    aty = asub.T @ y
    z = z0.copy()
    for _ in range(lam):
        z += omega * (aty - g @ z)
    return z


def recover_lomp(a, y, stop: StoppingRule, lam: int, omega: float | str = "auto") -> RecoveryResult:
    """OMP with the projection replaced by ``lam`` Landweber sweeps.

    Sweeps warm-start from the previous outer iterate (zero on the newly
    added coordinate).  The step size must satisfy
    0 < omega <= ||A_S||_op^-2; "auto" uses the easily computed full-matrix
    bound 1/||A||_F^2, "support" refreshes a per-iteration Gershgorin bound
    1/max_i sum_j |G_ij| of the active Gram matrix G (tighter, still safe),
    and an explicit float is checked against the active spectral bound each
    iteration.
    """
    amat = _coerce_operator(a)
    if int(lam) != lam or lam < 1:
        raise ValidationError("lam must be a positive integer")
    lam = int(lam)
    if omega == "auto":
        full = float((amat * amat).sum())
        omega_fixed = 1.0 / full

        def update(asub, yy, prev):
            z0 = np.zeros(asub.shape[1])
            z0[: prev.shape[0]] = prev
            return _landweber_sweeps(asub, yy, z0, omega_fixed, lam)

    elif omega == "support":

        def update(asub, yy, prev):
            g = asub.T @ asub
            ub = float(np.abs(g).sum(axis=1).max())  # Gershgorin: >= lambda_max(G)
            aty = asub.T @ yy
            z = np.zeros(asub.shape[1])
            z[: prev.shape[0]] = prev
            w = 1.0 / ub
            for _ in range(lam):
                z += w * (aty - g @ z)
            return z

    else:
        if not _is_positive_real(omega):
            raise ValidationError("omega must be positive, 'auto', or 'support'")
        omega_user = float(omega)

        def update(asub, yy, prev):
            _, hi = linalg.gram_eig_extremes(asub)
            if omega_user > (1.0 + constants.OMEGA_SLACK) / hi:
                raise InvalidOmega(
                    f"omega={omega_user:g} exceeds ||A_S||_op^-2 = {1.0 / hi:g} for |S|={asub.shape[1]}"
                )
            z0 = np.zeros(asub.shape[1])
            z0[: prev.shape[0]] = prev
            return _landweber_sweeps(asub, yy, z0, omega_user, lam)

    return _run_augmenting(amat, y, stop, update)


def auto_sgp_step(m: int, k_max: int) -> float:
    """Default LMS step size 2m / (3 k_max)."""
    return 2.0 * m / (3.0 * k_max)


def _lms_pass(asub, y, z0, mu) -> np.ndarray:
    """One sequential least-mean-squares pass over all measurement rows."""
    z = z0.copy()
    buf = np.empty_like(z)
    dot = np.dot
    multiply = np.multiply
    for ell, d in enumerate(y.tolist()):
        row = asub[ell]
        multiply(row, mu * (d - dot(row, z)), out=buf)
        z += buf
    return z


def recover_sgp(a, y, stop: StoppingRule, k_max: int, mu: float | str = "auto") -> RecoveryResult:
    """OMP with the projection replaced by one LMS pass per outer iteration.

    The pass visits the m rows of the active matrix once, in order, updating
    the estimate after each row; it warm-starts from the previous outer
    iterate.  A diverging pass (non-finite estimate) stalls the run.
    """
    amat = _coerce_operator(a)
    if int(k_max) != k_max or k_max < 1:
        raise ValidationError("k_max must be a positive integer")
    if mu == "auto":
        step = auto_sgp_step(amat.shape[0], int(k_max))
    else:
        if not _is_positive_real(mu):
            raise ValidationError("mu must be positive or 'auto'")
        step = float(mu)

    def update(asub, yy, prev):
        z0 = np.zeros(asub.shape[1])
        z0[: prev.shape[0]] = prev
        return _lms_pass(asub, yy, z0, step)

    return _run_augmenting(amat, y, stop, update)


def recover_cosamp(a, y, stop: StoppingRule, k: int) -> RecoveryResult:
    """Compressive sampling matching pursuit with a-priori sparsity k.

    Each iteration takes the 2k columns best correlated with the residual,
    merges them with the current support, solves least squares on the merged
    set, and keeps the k largest coefficients.  The merge preserves prior
    information; when the merged set outgrows the row count the least-squares
    step is rank deficient and the run stalls with the last estimate.
    """
    amat = _coerce_operator(a)
    y = linalg.as_vector(y)
    m, n = amat.shape
    if y.shape[0] != m:
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {m}")
    if int(k) != k or int(k) < 1:
        raise ValidationError("k must be a positive integer")
    if 2 * k > m:
        raise InvalidDims(f"cosamp needs 2k <= m, got k={k}, m={m}")

    ynorm = float(np.sqrt(y @ y))
    thr = _effective_threshold(stop, ynorm)
    hist = [ynorm]
    x_hat = np.zeros(n, dtype=np.float64)
    term = None
    if ynorm <= thr:
        term = RESIDUAL_MET
    else:
        stall_tol = constants.STALL_CORRELATION_RTOL * ynorm
        r = y.copy()
        while True:
            u = np.abs(amat.T @ r)
            # stable sort: ties fall to the lowest index
            order = np.argsort(-u, kind="stable")
            if u[order[0]] <= stall_tol:
                term = STALLED
                break
            cand = np.union1d(order[: 2 * k], np.flatnonzero(x_hat))
            try:
                xi = linalg.least_squares(amat[:, cand], y)
            except RankDeficient:
                term = STALLED
                break
            keep_local = np.argsort(-np.abs(xi), kind="stable")[:k]
            keep = cand[keep_local]
            x_new = np.zeros(n, dtype=np.float64)
            x_new[keep] = xi[keep_local]
            r = y - amat[:, keep] @ xi[keep_local]
            hist.append(float(np.sqrt(r @ r)))
            if hist[-1] <= thr:
                x_hat = x_new
                term = RESIDUAL_MET
                break
            if len(hist) - 1 >= stop.max_iterations:
                x_hat = x_new
                term = MAX_ITERATIONS
                break
            if np.array_equal(x_new, x_hat):
                # exact fixed point: every further iteration would repeat the
                # same estimate and residual, so fill the history to the cap
                hist.extend(hist[-1:] * (stop.max_iterations - (len(hist) - 1)))
                term = MAX_ITERATIONS
                break
            x_hat = x_new

    support = tuple(int(i) for i in np.flatnonzero(x_hat))
    return RecoveryResult(
        x_hat=x_hat,
        support=support,
        residual_history=tuple(hist),
        iterations=len(hist) - 1,
        termination=term,
    )


def recover(a, y, stop: StoppingRule, spec: AlgorithmSpec) -> RecoveryResult:
    """Dispatch on an :class:`AlgorithmSpec`."""
    if spec.variant == "omp":
        return recover_omp(a, y, stop)
    if spec.variant == "tomp":
        return recover_tomp(a, y, stop, spec.alpha)
    if spec.variant == "lomp":
        return recover_lomp(a, y, stop, spec.lam, spec.omega if spec.omega is not None else "auto")
    if spec.variant == "sgp":
        return recover_sgp(a, y, stop, spec.k_max, spec.mu if spec.mu is not None else "auto")
    if spec.variant == "cosamp":
        return recover_cosamp(a, y, stop, spec.k)
    raise ValidationError(f"unknown variant {spec.variant!r}")
