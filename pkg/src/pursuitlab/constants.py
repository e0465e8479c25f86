"""Numerical tolerances, gathered in one place so tests can reference them by name."""

# Least squares: reject the factorization if any |R[j,j]| falls below this
# fraction of the largest |R[i,i]|.
QR_RANK_RTOL = 1e-10

# Cyclic Jacobi: stop once the off-diagonal Frobenius norm drops below this
# fraction of the initial Frobenius norm (or after JACOBI_MAX_SWEEPS sweeps).
JACOBI_OFF_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# gram_eig_extremes relative accuracy promised by the Jacobi configuration.
EIG_RTOL = 1e-9

# condition_number refuses matrices whose smallest Gram eigenvalue is below
# this fraction of the largest.
COND_SINGULAR_RTOL = 1e-14

# Landweber step sizes may exceed 1/lambda_max by this relative slack before
# they are rejected (covers the eigensolver's own accuracy).
OMEGA_SLACK = 1e-9

# Theorem bound checks allow this absolute slack on the inequality.
BOUND_SLACK = 1e-12

# Pursuit: a selection whose best correlation is below this fraction of
# ||y||_2 stalls the run instead of adding a meaningless atom.
STALL_CORRELATION_RTOL = 1e-14

# Pursuit: a residual threshold of exactly zero is replaced by this fraction
# of ||y||_2 so the stopping rule is attainable in floating point.
NOISE_FREE_STOP_RTOL = 1e-10

# Support entries of a recovered signal count as "effectively nonzero" above
# this magnitude when reporting the effective support size.
EFFECTIVE_SUPPORT_ATOL = 1e-8

# ric_exact refuses to enumerate more than this many subsets.
RIC_MAX_SUBSETS = 10**6

# Sensing matrix columns must be unit norm within this tolerance.
UNIT_COLUMN_ATOL = 1e-12
