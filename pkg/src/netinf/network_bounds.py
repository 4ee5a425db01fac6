"""Network-level converse bounds and the ROC upper-bound envelope.

The weighted-pair bound combines per-pair testing bounds through the
prior's edge weights; the Monte Carlo bound handles the signed-ER prior
by conditioning on everything except one support entry, which leaves a
single Gaussian-vs-Gaussian test per trial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bht import _sqrt_one_minus
from .linalg import GaussianSpec, gaussian_bc
from .model import ModelParams, observation_covariance, scale_to_radius
from .parallel import pmap

WEIGHT_SUM_TOL = 1e-12
ENVELOPE_SLACK = 1e-12


class DegeneratePriorError(ValueError):
    """Raised when a prior has no edges or no non-edges anywhere."""


class RocPoint(NamedTuple):
    """A (false positive ratio, true positive ratio) pair."""

    fpr: float
    tpr: float


@dataclass(frozen=True)
class EdgeWeights:
    """Prior-induced weights of each ordered pair among edges / non-edges."""

    w_minus: np.ndarray
    w_plus: np.ndarray

    def __post_init__(self):
        w_minus = np.asarray(self.w_minus, dtype=float)
        w_plus = np.asarray(self.w_plus, dtype=float)
        for name, w in (("w_minus", w_minus), ("w_plus", w_plus)):
            if w.shape != w_minus.shape or w.ndim != 2:
                raise ValueError("weight matrices must be 2-d and same shape")
            if np.any(w < 0) or abs(float(w.sum()) - 1.0) > WEIGHT_SUM_TOL:
                raise ValueError(f"{name} must be nonnegative and sum to 1")
        object.__setattr__(self, "w_minus", w_minus)
        object.__setattr__(self, "w_plus", w_plus)


@dataclass(frozen=True)
class BoundEstimate:
    """A Monte Carlo bound value with its standard error and trial count."""

    value: float
    stderr: float
    trials: int


def edge_weights(edge_probs) -> EdgeWeights:
    """Normalize per-pair edge probabilities into edge / non-edge weights."""
    probs = np.asarray(edge_probs, dtype=float)
    if probs.ndim != 2:
        raise ValueError("edge_probs must be a 2-d array")
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValueError("edge probabilities must lie in [0, 1]")
    denom_minus = float(probs.sum())
    denom_plus = float((1.0 - probs).sum())
    if denom_minus <= 0 or denom_plus <= 0:
        raise DegeneratePriorError(
            "prior must assign positive mass to at least one edge and one non-edge"
        )
    return EdgeWeights(w_minus=probs / denom_minus, w_plus=(1.0 - probs) / denom_plus)


def direct_network_bound(rhos, weights: EdgeWeights, pi: float) -> float:
    """Weighted-pair lower bound on pi*eps_minus + (1-pi)*eps_plus.

    Pairs whose smaller weight is zero contribute nothing regardless of
    their coefficient.
    """
    rho = np.asarray(rhos, dtype=float)
    if rho.shape != weights.w_minus.shape:
        raise ValueError("rhos shape must match the weight matrices")
    if np.any(rho < 0) or np.any(rho > 1):
        raise ValueError("rhos must lie in [0, 1]")
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi must be in [0, 1], got {pi}")
    min_w = np.minimum(weights.w_minus, weights.w_plus)
    factor = 4.0 * pi * (1.0 - pi)
    total = 0.0
    for w, r in zip(min_w.ravel(), rho.ravel()):
        if w > 0.0:
            total += w * (1.0 - _sqrt_one_minus(factor * r * r))
    return 0.5 * total


def pair_rho(a0, a1, params: ModelParams) -> float:
    """Coefficient between the observation laws under two fixed networks."""
    zero = np.zeros(params.n * (params.T + 1))
    g0 = GaussianSpec(mean=zero, cov=observation_covariance(a0, params))
    g1 = GaussianSpec(mean=zero, cov=observation_covariance(a1, params))
    return gaussian_bc(g0, g1)


def _trial_rho(params: ModelParams, rng: np.random.Generator) -> float:
    """One Monte Carlo draw of the conditional pair coefficient.

    Samples the full sign pattern and support, picks an ordered pair
    uniformly, and compares the two networks that differ only in that
    support entry.  Both conditioned matrices are rescaled independently:
    flipping one entry changes the scaling of every other entry.
    """
    n = params.n
    signs = rng.integers(0, 2, size=(n, n)) * 2 - 1
    support = (rng.random(size=(n, n)) < params.p).astype(np.int64)
    pair = int(rng.integers(0, n * n))
    i, j = divmod(pair, n)
    chi0 = support.copy()
    chi0[i, j] = 0
    chi1 = support.copy()
    chi1[i, j] = 1
    a0 = scale_to_radius((signs * chi0).astype(float), params.r0)
    a1 = scale_to_radius((signs * chi1).astype(float), params.r0)
    return pair_rho(a0, a1, params)


def prop4_rho_samples(
    params: ModelParams, trials: int, rng: np.random.Generator, threads: int = 1
) -> np.ndarray:
    """Per-trial conditional coefficients for the Monte Carlo network bound.

    Each trial runs on its own generator spawned from ``rng``, and results
    are merged in trial order, so the output is independent of the worker
    count.
    """
    if trials < 2:
        raise ValueError(f"trials must be >= 2, got {trials}")
    streams = rng.spawn(trials)
    rhos = pmap(lambda r: _trial_rho(params, r), streams, threads=threads)
    return np.asarray(rhos)


def prop4_bound_from_rhos(rhos, pi: float) -> BoundEstimate:
    """Aggregate sampled coefficients into the bound estimate at prior pi.

    The estimate is (1 - mean summand) / 2 with summand
    sqrt(1 - 4 pi (1-pi) rho^2); the estimate is affine in the summand
    mean, so its standard error is half the standard error of the mean.
    """
    rho = np.asarray(rhos, dtype=float)
    if rho.size < 2:
        raise ValueError("need at least 2 trials")
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi must be in [0, 1], got {pi}")
    factor = 4.0 * pi * (1.0 - pi)
    summands = np.array([_sqrt_one_minus(factor * r * r) for r in rho])
    mean = float(summands.mean())
    sem = float(summands.std(ddof=1)) / np.sqrt(summands.size)
    return BoundEstimate(value=0.5 * (1.0 - mean), stderr=sem / 2.0, trials=summands.size)


def prop4_bound(
    params: ModelParams,
    pi: float,
    trials: int,
    rng: np.random.Generator,
    threads: int = 1,
) -> BoundEstimate:
    """Monte Carlo lower bound on pi*eps_minus + (1-pi)*eps_plus under the ER prior."""
    rhos = prop4_rho_samples(params, trials, rng, threads=threads)
    return prop4_bound_from_rhos(rhos, pi)


def default_pi_grid(count: int = 21, lo: float = 0.025, hi: float = 0.975) -> np.ndarray:
    """Evenly spaced prior grid strictly inside (0, 1)."""
    if not 0.0 < lo < hi < 1.0:
        raise ValueError("grid must satisfy 0 < lo < hi < 1")
    return np.linspace(lo, hi, count)


def as_pi_grid(values) -> np.ndarray:
    grid = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("pi grid must be a nonempty 1-d array")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise ValueError("pi grid values must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("pi grid must be strictly increasing")
    return grid


def roc_upper_envelope(pi_grid, bounds, fpr_grid) -> list[RocPoint]:
    """Upper bound on achievable (FPR, TPR) pairs implied by bound values L(pi).

    Every estimator satisfies pi*(1 - TPR) + (1-pi)*FPR >= L(pi), hence
    TPR <= 1 - (L(pi) - (1-pi)*FPR)/pi for each pi; minimizing over the
    grid and clamping to [FPR, 1] gives the envelope.
    """
    grid = as_pi_grid(pi_grid)
    vals = np.asarray(bounds, dtype=float)
    if vals.shape != grid.shape:
        raise ValueError("one bound value required per grid point")
    limit = np.minimum(grid, 1.0 - grid)
    if np.any(vals < -ENVELOPE_SLACK) or np.any(vals > limit + ENVELOPE_SLACK):
        raise ValueError("bound values must lie in [0, min(pi, 1-pi)]")
    fprs = np.asarray(fpr_grid, dtype=float)
    if fprs.ndim != 1 or np.any(fprs < 0.0) or np.any(fprs > 1.0) or np.any(np.diff(fprs) < 0.0):
        raise ValueError("fpr grid must be sorted within [0, 1]")
    points = []
    for x in fprs:
        tpr = float(np.min(1.0 - (vals - (1.0 - grid) * x) / grid))
        points.append(RocPoint(fpr=float(x), tpr=min(1.0, max(float(x), tpr))))
    return points


def roc_upper_envelope_with_stderr(
    pi_grid, bounds, stderrs, fpr_grid
) -> tuple[list[RocPoint], np.ndarray]:
    """Envelope points plus the standard error induced at each one.

    The envelope value at FPR x is 1 - (L(pi*) - (1-pi*)x)/pi* at the
    minimizing grid point pi*, which is affine in L(pi*), so its standard
    error is stderr(L(pi*)) / pi*.  Points pinned by the [x, 1] clamp get
    standard error 0.
    """
    grid = as_pi_grid(pi_grid)
    vals = np.asarray(bounds, dtype=float)
    errs = np.asarray(stderrs, dtype=float)
    if vals.shape != grid.shape or errs.shape != grid.shape:
        raise ValueError("one bound and stderr value required per grid point")
    points = roc_upper_envelope(grid, vals, fpr_grid)
    out_errs = np.empty(len(points))
    for k, pt in enumerate(points):
        exprs = 1.0 - (vals - (1.0 - grid) * pt.fpr) / grid
        idx = int(np.argmin(exprs))
        clamped = not np.isclose(pt.tpr, float(exprs[idx]))
        out_errs[k] = 0.0 if clamped else float(errs[idx] / grid[idx])
    return points, out_errs
