"""Support recovery algorithms for the vector-autoregressive observations.

Two benchmarks: column-wise L1-regularized least squares solved by cyclic
coordinate descent, and greedy forward selection with a permutation
stopping test.  Both read rows Y(0)..Y(T-1) as regressors for rows
Y(1)..Y(T), column by column, and never look ahead of the provided
series.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning

_RANK_TOL = 1e-12


class RankDeficientWarning(UserWarning):
    """A candidate column was numerically dependent on the chosen set."""


@dataclass(frozen=True)
class DesignPair:
    """Lagged design matrices: rows Y(0)..Y(T-1) against rows Y(1)..Y(T)."""

    phi0: np.ndarray
    phi1: np.ndarray

    def __post_init__(self):
        phi0 = np.asarray(self.phi0, dtype=float)
        phi1 = np.asarray(self.phi1, dtype=float)
        if phi0.shape != phi1.shape or phi0.ndim != 2 or phi0.shape[0] < 1:
            raise ValueError("phi0 and phi1 must be equal-shape (T, n) matrices, T >= 1")
        if not (np.all(np.isfinite(phi0)) and np.all(np.isfinite(phi1))):
            raise ValueError("design matrices must be finite")
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "phi1", phi1)

    @classmethod
    def from_series(cls, observations) -> "DesignPair":
        series = np.asarray(observations, dtype=float)
        if series.ndim != 2 or series.shape[0] < 2:
            raise ValueError("observation series must be a (T+1, n) matrix with T >= 1")
        return cls(phi0=series[:-1], phi1=series[1:])


@dataclass(frozen=True)
class LassoConfig:
    """lam: L1 penalty; tol: max per-sweep coefficient change to stop;
    zero_threshold: magnitude below which a coefficient is reported zero."""

    lam: float
    tol: float = 1e-8
    max_iters: int = 1000
    zero_threshold: float = 1e-10

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class OcseConfig:
    """theta: permutation-test significance threshold; num_perms: permutation
    count; max_parents: cap on the parent-set size (None means no cap)."""

    theta: float = 0.05
    num_perms: int = 100
    max_parents: int | None = None

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must be in (0, 1), got {self.theta}")
        if self.num_perms < 20:
            raise ValueError(f"num_perms must be >= 20, got {self.num_perms}")


def soft_threshold(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _lasso_objective(y, phi0, coef, lam) -> float:
    resid = y - phi0 @ coef
    t = phi0.shape[0]
    return float(resid @ resid) / (2.0 * t) + lam * float(np.sum(np.abs(coef)))


def lasso_column(design: DesignPair, j: int, cfg: LassoConfig) -> np.ndarray:
    """Approximate minimizer of the penalized column regression.

    Cyclic coordinate descent with soft-thresholding on
    (1/2T) ||phi1_j - phi0 a||^2 + lam ||a||_1, stopping when the largest
    coefficient change in a sweep drops below cfg.tol.  If the sweep
    budget runs out first, a ConvergenceWarning is issued and the current
    iterate is returned.
    """
    phi0 = design.phi0
    y = design.phi1[:, j]
    t, n = phi0.shape
    col_norms2 = np.einsum("ij,ij->j", phi0, phi0)
    coef = np.zeros(n)
    resid = y.copy()
    lam_t = cfg.lam * t
    prev_obj = _lasso_objective(y, phi0, coef, cfg.lam)
    for _ in range(cfg.max_iters):
        max_delta = 0.0
        for i in range(n):
            if col_norms2[i] == 0.0:
                continue
            old = coef[i]
            z = phi0[:, i] @ resid + col_norms2[i] * old
            new = soft_threshold(z, lam_t) / col_norms2[i]
            if new != old:
                resid += phi0[:, i] * (old - new)
                coef[i] = new
                max_delta = max(max_delta, abs(new - old))
        if __debug__:
            obj = _lasso_objective(y, phi0, coef, cfg.lam)
            assert obj <= prev_obj + 1e-12 * max(1.0, abs(prev_obj)), (
                "coordinate descent objective increased"
            )
            prev_obj = obj
        if max_delta < cfg.tol:
            break
    else:
        warnings.warn(
            f"coordinate descent did not reach tol={cfg.tol:g} "
            f"within {cfg.max_iters} sweeps for column {j}",
            ConvergenceWarning,
        )
    return coef


def lasso_coefficients(observations, cfg: LassoConfig) -> np.ndarray:
    """Full (n, n) coefficient estimate; column j targets vertex j."""
    design = DesignPair.from_series(observations)
    n = design.phi0.shape[1]
    coefs = np.empty((n, n))
    for j in range(n):
        coefs[:, j] = lasso_column(design, j, cfg)
    return coefs


def lasso_support(observations, cfg: LassoConfig) -> np.ndarray:
    """0/1 support: entry (i, j) marks |coefficient| above the zero threshold."""
    coefs = lasso_coefficients(observations, cfg)
    return (np.abs(coefs) > cfg.zero_threshold).astype(np.int64)


def _improvements(cols_perp: np.ndarray, norms2: np.ndarray, resid: np.ndarray) -> np.ndarray:
    """Residual-sum-of-squares drop from adding each orthogonalized column."""
    proj = cols_perp @ resid
    with np.errstate(divide="ignore", invalid="ignore"):
        imp = np.where(norms2 > 0.0, proj * proj / norms2, 0.0)
    return imp


def ocse_parents(
    design: DesignPair, j: int, cfg: OcseConfig, rng: np.random.Generator
) -> list[int]:
    """Greedy forward parent selection with a permutation stopping test.

    Each step adds the candidate whose column reduces the residual sum of
    squares the most, provided its improvement strictly exceeds the
    empirical (1-theta)-quantile of improvements obtained by permuting
    that column's rows; the first failed test ends the search.  Ties are
    broken toward the lowest candidate index.
    """
    phi0 = design.phi0
    t, n = phi0.shape
    if t < 2:
        raise ValueError(f"need at least 2 rows, got {t}")
    y = design.phi1[:, j]
    max_parents = cfg.max_parents if cfg.max_parents is not None else n
    chosen: list[int] = []
    basis = np.zeros((t, 0))
    resid = y.astype(float).copy()
    scale2 = np.einsum("ij,ij->j", phi0, phi0)
    while len(chosen) < min(max_parents, n):
        if t < len(chosen) + 1:
            raise ValueError(
                f"cannot regress on {len(chosen) + 1} columns with only {t} rows"
            )
        candidates = [i for i in range(n) if i not in chosen]
        best_i = -1
        best_imp = -1.0
        best_perp = None
        best_norm2 = 0.0
        for i in candidates:
            col = phi0[:, i]
            perp = col - basis @ (basis.T @ col)
            norm2 = float(perp @ perp)
            if norm2 <= _RANK_TOL * max(1.0, scale2[i]):
                warnings.warn(
                    f"candidate {i} for target {j} is rank deficient against "
                    f"the chosen set; skipped",
                    RankDeficientWarning,
                )
                continue
            proj = float(perp @ resid)
            imp = proj * proj / norm2
            if imp > best_imp:
                best_imp = imp
                best_i = i
                best_perp = perp
                best_norm2 = norm2
        if best_i < 0:
            break
        col = phi0[:, best_i]
        perm_idx = rng.permuted(
            np.tile(np.arange(t), (cfg.num_perms, 1)), axis=1
        )
        perm_cols = col[perm_idx]
        perm_perp = perm_cols - (perm_cols @ basis) @ basis.T
        perm_norms2 = np.einsum("ij,ij->i", perm_perp, perm_perp)
        perm_imps = _improvements(perm_perp, perm_norms2, resid)
        threshold = float(np.quantile(perm_imps, 1.0 - cfg.theta))
        if not best_imp > threshold:
            break
        chosen.append(best_i)
        qcol = best_perp / np.sqrt(best_norm2)
        basis = np.column_stack([basis, qcol])
        resid = resid - (qcol @ resid) * qcol
    return sorted(chosen)


def ocse_support(observations, cfg: OcseConfig, rng: np.random.Generator) -> np.ndarray:
    """0/1 support from per-target greedy selection.

    Target columns are independent subproblems; each consumes its own
    stream spawned from ``rng`` in column order, so a fixed generator
    state reproduces the support bit for bit.
    """
    design = DesignPair.from_series(observations)
    n = design.phi0.shape[1]
    support = np.zeros((n, n), dtype=np.int64)
    streams = rng.spawn(n)
    for j in range(n):
        for i in ocse_parents(design, j, cfg, streams[j]):
            support[i, j] = 1
    return support


class LassoSupport(BaseEstimator):
    """Estimator wrapper around the L1 column regressions.

    After ``fit(Y)`` on a (T+1, n) observation series, ``coef_`` holds the
    (n, n) coefficient estimate and ``support_`` its thresholded 0/1
    pattern.
    """

    def __init__(self, lam=0.1, tol=1e-8, max_iters=1000, zero_threshold=1e-10):
        self.lam = lam
        self.tol = tol
        self.max_iters = max_iters
        self.zero_threshold = zero_threshold

    def _config(self) -> LassoConfig:
        return LassoConfig(
            lam=self.lam,
            tol=self.tol,
            max_iters=self.max_iters,
            zero_threshold=self.zero_threshold,
        )

    def fit(self, Y, y=None):
        cfg = self._config()
        self.coef_ = lasso_coefficients(Y, cfg)
        self.support_ = (np.abs(self.coef_) > cfg.zero_threshold).astype(np.int64)
        self.n_features_in_ = self.coef_.shape[0]
        return self


class OcseSupport(BaseEstimator):
    """Estimator wrapper around greedy selection with permutation stopping.

    ``fit(Y)`` sets ``parents_`` (per-target sorted index lists) and the
    (n, n) 0/1 ``support_``.
    """

    def __init__(self, theta=0.05, num_perms=100, max_parents=None, random_state=None):
        self.theta = theta
        self.num_perms = num_perms
        self.max_parents = max_parents
        self.random_state = random_state

    def fit(self, Y, y=None):
        cfg = OcseConfig(
            theta=self.theta, num_perms=self.num_perms, max_parents=self.max_parents
        )
        design = DesignPair.from_series(Y)
        n = design.phi0.shape[1]
        rng = np.random.default_rng(self.random_state)
        streams = rng.spawn(n)
        self.parents_ = [
            ocse_parents(design, j, cfg, streams[j]) for j in range(n)
        ]
        support = np.zeros((n, n), dtype=np.int64)
        for j, parents in enumerate(self.parents_):
            for i in parents:
                support[i, j] = 1
        self.support_ = support
        self.n_features_in_ = n
        return self
