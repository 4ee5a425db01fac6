"""Recovery performance metrics, ROC sweeps, AUC bounds, and incoherence.

Error ratios follow the ratio-of-expectations convention: counts are
aggregated over all problem instances before dividing, over all ordered
vertex pairs including self-pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bht import lb_direct
from .model import ModelParams, sample_dynamic_er, simulate_trajectory
from .network_bounds import RocPoint, roc_upper_envelope
from .parallel import pmap
from .recovery import LassoConfig, OcseConfig, lasso_support, ocse_support
from .seeding import child_seed_sequences


class DegenerateBatchError(ValueError):
    """Raised when a batch has no true edges or no true non-edges."""


@dataclass(frozen=True)
class ConfusionCounts:
    """Edge-level counts for one or more recovery instances."""

    missed_edges: int
    true_edges: int
    false_edges: int
    true_nonedges: int

    def __post_init__(self):
        if self.missed_edges > self.true_edges:
            raise ValueError("missed edges cannot exceed true edges")
        if self.false_edges > self.true_nonedges:
            raise ValueError("false edges cannot exceed true non-edges")

    @classmethod
    def from_support(cls, truth, estimate) -> "ConfusionCounts":
        t = np.asarray(truth) != 0
        e = np.asarray(estimate) != 0
        if t.shape != e.shape:
            raise ValueError(f"shape mismatch: {t.shape} vs {e.shape}")
        return cls(
            missed_edges=int(np.sum(t & ~e)),
            true_edges=int(np.sum(t)),
            false_edges=int(np.sum(~t & e)),
            true_nonedges=int(np.sum(~t)),
        )

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            missed_edges=self.missed_edges + other.missed_edges,
            true_edges=self.true_edges + other.true_edges,
            false_edges=self.false_edges + other.false_edges,
            true_nonedges=self.true_nonedges + other.true_nonedges,
        )


def error_ratios(truths, estimates) -> tuple[float, float]:
    """Aggregate (false negative ratio, false positive ratio) over a batch."""
    truths = list(truths)
    estimates = list(estimates)
    if len(truths) != len(estimates) or not truths:
        raise ValueError("need equally many truths and estimates, at least one each")
    total = ConfusionCounts(0, 0, 0, 0)
    for t, e in zip(truths, estimates):
        total = total + ConfusionCounts.from_support(t, e)
    return ratios_from_counts(total)


def error_ratio_stderrs(counts: list[ConfusionCounts]) -> tuple[float, float]:
    """Standard errors of the aggregate ratios via ratio-estimator linearization.

    For R = sum(m_i) / sum(e_i) over instances i, the linearized variance
    is var(m_i - R e_i) * k / (sum e_i)^2 with k instances.
    """
    if len(counts) < 2:
        raise ValueError("need at least 2 instances for a standard error")

    def one(nums, dens) -> float:
        total_den = float(np.sum(dens))
        if total_den <= 0:
            raise DegenerateBatchError("aggregate denominator is zero")
        ratio = float(np.sum(nums)) / total_den
        resid = np.asarray(nums, dtype=float) - ratio * np.asarray(dens, dtype=float)
        k = len(counts)
        return float(np.sqrt(k / (k - 1.0) * np.sum(resid**2))) / total_den

    se_minus = one([c.missed_edges for c in counts], [c.true_edges for c in counts])
    se_plus = one([c.false_edges for c in counts], [c.true_nonedges for c in counts])
    return se_minus, se_plus


def ratios_from_counts(counts: ConfusionCounts) -> tuple[float, float]:
    if counts.true_edges == 0 or counts.true_nonedges == 0:
        raise DegenerateBatchError(
            "batch must contain at least one edge and one non-edge"
        )
    return (
        counts.missed_edges / counts.true_edges,
        counts.false_edges / counts.true_nonedges,
    )


def simulate_datasets(
    params: ModelParams, sims: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Sample ``sims`` (truth support, observation series) pairs.

    Each instance uses its own stream spawned from ``rng``, so instances
    can be recomputed or shared across sweep grid values.
    """
    datasets = []
    for stream in rng.spawn(sims):
        signed, adjacency = sample_dynamic_er(params, stream)
        series = simulate_trajectory(adjacency, params, stream)
        datasets.append((signed.support.copy(), series))
    return datasets


def roc_sweep_counts(
    algorithm: str,
    param_grid,
    params: ModelParams,
    sims: int,
    rng: np.random.Generator,
    num_perms: int = 100,
    threads: int = 1,
) -> list[list[ConfusionCounts]]:
    """Per grid value, per simulation confusion counts for one algorithm.

    The same simulated instances (common random numbers) are reused for
    every grid value, and for the greedy algorithm the permutation streams
    are re-derived identically per grid value, so sweeps are monotone in
    the threshold per seed batch.
    """
    grid = list(param_grid)
    if not grid:
        raise ValueError("param_grid must be nonempty")
    if sims < 1:
        raise ValueError(f"sims must be >= 1, got {sims}")
    if algorithm not in ("lasso", "ocse"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    data_rng, algo_rng = rng.spawn(2)
    datasets = simulate_datasets(params, sims, data_rng)
    algo_seqs = child_seed_sequences(algo_rng, sims)

    def run_one(args) -> ConfusionCounts:
        value, sim_idx = args
        truth, series = datasets[sim_idx]
        if algorithm == "lasso":
            estimate = lasso_support(series, LassoConfig(lam=value))
        else:
            cfg = OcseConfig(theta=value, num_perms=num_perms)
            estimate = ocse_support(series, cfg, np.random.default_rng(algo_seqs[sim_idx]))
        return ConfusionCounts.from_support(truth, estimate)

    out = []
    for value in grid:
        units = [(value, s) for s in range(sims)]
        out.append(pmap(run_one, units, threads=threads))
    return out


def roc_sweep(
    algorithm: str,
    param_grid,
    params: ModelParams,
    sims: int,
    rng: np.random.Generator,
    num_perms: int = 100,
    threads: int = 1,
) -> list[RocPoint]:
    """Empirical ROC points (false positive ratio, true positive ratio)."""
    per_grid = roc_sweep_counts(
        algorithm, param_grid, params, sims, rng, num_perms=num_perms, threads=threads
    )
    points = []
    for counts in per_grid:
        total = ConfusionCounts(0, 0, 0, 0)
        for c in counts:
            total = total + c
        eps_minus, eps_plus = ratios_from_counts(total)
        points.append(RocPoint(fpr=eps_plus, tpr=1.0 - eps_minus))
    return points


def auc_bound_simple(rho: float) -> float:
    """Analytic area bound 1 - rho^4 / 6."""
    _check_rho(rho)
    return 1.0 - rho**4 / 6.0


def auc_bound_shapiro(rho: float) -> float:
    """Shapiro's area bound 1 - (1 - sqrt(1 - rho^2))^2 / 2."""
    _check_rho(rho)
    return 1.0 - (1.0 - np.sqrt(1.0 - rho * rho)) ** 2 / 2.0


def default_fpr_grid(count: int = 201) -> np.ndarray:
    return np.linspace(0.0, 1.0, count)


def default_auc_pi_grid() -> np.ndarray:
    """Dense prior grid for area integration.

    The envelope minimum can sit close to either endpoint, so a linear
    grid (including 1/2 exactly) is padded with geometrically spaced
    points near 0 and 1.
    """
    linear = np.linspace(0.0005, 0.9995, 1999)
    ends = np.geomspace(1e-9, 5e-4, 40)
    return np.unique(np.concatenate([ends, linear, 1.0 - ends]))


def auc_bound_numerical(rho: float, fpr_grid=None, pi_grid=None) -> float:
    """Area under the ROC upper envelope built from the direct bound.

    Trapezoidal integration of the envelope over the false-positive grid.
    """
    _check_rho(rho)
    fprs = default_fpr_grid() if fpr_grid is None else np.asarray(fpr_grid, dtype=float)
    pis = default_auc_pi_grid() if pi_grid is None else np.asarray(pi_grid, dtype=float)
    bounds = np.array([lb_direct(rho, pi) for pi in pis])
    envelope = roc_upper_envelope(pis, bounds, fprs)
    tprs = np.array([pt.tpr for pt in envelope])
    return float(np.trapezoid(tprs, fprs))


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")


def column_supports(adjacency) -> list[np.ndarray]:
    """Nonzero row indices of each column: the parent sets of each target."""
    a = np.asarray(adjacency)
    return [np.flatnonzero(a[:, j]) for j in range(a.shape[1])]


def mip(q, supports) -> float:
    """Mutual incoherence parameter of a covariance against given supports.

    max over target columns j and rows i outside the support A_j of
    ||Q_{i, A_j} Q_{A_j, A_j}^{-1}||_1; empty supports contribute 0.
    """
    qm = np.asarray(q, dtype=float)
    if qm.ndim != 2 or qm.shape[0] != qm.shape[1]:
        raise ValueError("Q must be square")
    n = qm.shape[0]
    worst = 0.0
    for j, idx in enumerate(supports):
        idx = np.asarray(idx, dtype=int)
        if idx.size == 0:
            continue
        outside = np.setdiff1d(np.arange(n), idx, assume_unique=False)
        if outside.size == 0:
            continue
        sub = qm[np.ix_(idx, idx)]
        rhs = qm[np.ix_(idx, outside)]
        try:
            solved = np.linalg.solve(sub, rhs)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                f"singular principal submatrix for target column {j}"
            ) from exc
        norms = np.sum(np.abs(solved), axis=0)
        worst = max(worst, float(np.max(norms)))
    return worst
