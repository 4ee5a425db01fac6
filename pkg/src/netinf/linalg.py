"""Dense matrix kernels and Gaussian similarity utilities.

Everything here is a pure function of its arguments; no shared mutable
state, so all operations are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

SYMMETRY_TOL = 1e-10
PIVOT_TOL = 1e-12
BC_OVERSHOOT_TOL = 1e-12

_LYAPUNOV_STEP_TOL = 1e-14
_LYAPUNOV_MAX_ITERS = 10**6


class StabilityError(ValueError):
    """Raised when a matrix that must be stable has spectral radius >= 1."""


class NotPositiveDefiniteError(ValueError):
    """Raised when a factorization pivot shows the matrix is not PD."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a 2-d float array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def require_symmetric(m: np.ndarray, name: str = "matrix", tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Check symmetry to tolerance and return the symmetrized matrix."""
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > tol * scale:
        raise ValueError(f"{name} is not symmetric within tolerance {tol}")
    return (m + m.T) / 2.0


@dataclass(frozen=True)
class GaussianSpec:
    """A multivariate Gaussian given by its mean vector and covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = as_square_matrix(self.cov, "cov")
        if mean.ndim != 1 or mean.shape[0] != cov.shape[0]:
            raise ValueError(
                f"mean has dimension {mean.shape}, covariance order {cov.shape[0]}"
            )
        cov = require_symmetric(cov, "cov")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def spectral_radius(a) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    m = as_square_matrix(a)
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def solve_discrete_lyapunov(a, c: float) -> np.ndarray:
    """Solve Q = A* Q A + c I for the stationary covariance Q.

    Fixed-point iteration from Q0 = cI; converges geometrically at rate
    r(A)^2, which requires r(A) < 1.
    """
    m = as_square_matrix(a)
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    r = spectral_radius(m)
    if r >= 1.0:
        raise StabilityError(f"spectral radius {r:.6g} >= 1; iteration would diverge")
    n = m.shape[0]
    ci = c * np.eye(n)
    q = ci.copy()
    mt = m.T
    for _ in range(_LYAPUNOV_MAX_ITERS):
        q_next = mt @ q @ m + ci
        if np.max(np.abs(q_next - q)) < _LYAPUNOV_STEP_TOL:
            q = q_next
            break
        q = q_next
    else:
        raise StabilityError("Lyapunov iteration did not converge")
    return (q + q.T) / 2.0


def _chol_logdet(m: np.ndarray, name: str = "matrix") -> tuple[np.ndarray, float]:
    """Cholesky factor and log-determinant of a symmetric PD matrix."""
    sym = require_symmetric(as_square_matrix(m, name), name)
    try:
        lower = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"{name} is not positive definite") from exc
    diag = np.diag(lower)
    if np.min(diag) ** 2 <= PIVOT_TOL:
        raise NotPositiveDefiniteError(
            f"{name} has factorization pivot <= {PIVOT_TOL:g}"
        )
    return lower, 2.0 * float(np.sum(np.log(diag)))


def logdet_pd(m) -> float:
    """log det of a symmetric positive-definite matrix via Cholesky."""
    _, val = _chol_logdet(m)
    return val


def gaussian_bc(p: GaussianSpec, q: GaussianSpec) -> float:
    """Bhattacharyya coefficient of two Gaussians, computed in log space.

    Returns
        exp(-1/8 dm* M^-1 dm) * sqrt(sqrt(det S1 det S2) / det M)
    with M = (S1 + S2) / 2 and dm the mean difference, clamped to 1 when
    numerical overshoot is at most ``BC_OVERSHOOT_TOL``.
    """
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    mid = (p.cov + q.cov) / 2.0
    lower_mid, logdet_mid = _chol_logdet(mid, "mid covariance")
    _, logdet_p = _chol_logdet(p.cov, "first covariance")
    _, logdet_q = _chol_logdet(q.cov, "second covariance")
    dm = p.mean - q.mean
    y = scipy.linalg.solve_triangular(lower_mid, dm, lower=True)
    quad = float(y @ y)
    log_rho = -0.125 * quad + 0.25 * logdet_p + 0.25 * logdet_q - 0.5 * logdet_mid
    rho = float(np.exp(log_rho))
    if rho > 1.0:
        if rho > 1.0 + BC_OVERSHOOT_TOL:
            raise NotPositiveDefiniteError(
                f"Bhattacharyya coefficient {rho!r} exceeds 1 beyond tolerance"
            )
        rho = 1.0
    return rho
