"""Error-probability bound kernels for binary hypothesis testing.

The kernels take a Bhattacharyya coefficient (or a list of per-component
coefficients) rather than raw densities, so the same code serves both
finite distributions and Gaussian pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import GaussianSpec, gaussian_bc

DIST_SUM_TOL = 1e-12
SQRT_OVERSHOOT_TOL = 1e-12


def as_distribution(v, name: str = "distribution") -> np.ndarray:
    """Validate a finite probability vector: nonnegative, sums to 1."""
    probs = np.asarray(v, dtype=float)
    if probs.ndim != 1 or probs.size < 1:
        raise ValueError(f"{name} must be a 1-d vector")
    if np.any(probs < 0):
        raise ValueError(f"{name} has negative entries")
    if abs(float(probs.sum()) - 1.0) > DIST_SUM_TOL:
        raise ValueError(f"{name} sums to {probs.sum()!r}, not 1")
    return probs


@dataclass(frozen=True)
class MixturePair:
    """Two mixtures f = sum_s w_s f_s and g = sum_s w_s g_s with shared weights.

    Components are (f_s, g_s) pairs, either probability vectors or
    GaussianSpec instances.
    """

    weights: np.ndarray
    components: tuple

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size < 1:
            raise ValueError("weights must be a nonempty 1-d vector")
        if np.any(weights < 0) or abs(float(weights.sum()) - 1.0) > DIST_SUM_TOL:
            raise ValueError("weights must be nonnegative and sum to 1")
        components = tuple((fs, gs) for fs, gs in self.components)
        if len(components) != weights.size:
            raise ValueError("one component pair required per weight")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", components)

    def component_rhos(self) -> np.ndarray:
        return np.array([component_rho(fs, gs) for fs, gs in self.components])


@dataclass(frozen=True)
class Example1Params:
    """Single-edge two-network prior: edge coefficient a, noise ratio N = nu2/sigma2."""

    a: float
    N: float
    T: int
    beta: float = 0.5

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("edge coefficient a must be nonzero")
        if self.N < 0:
            raise ValueError(f"noise ratio N must be >= 0, got {self.N}")
        if self.T < 0:
            raise ValueError(f"T must be >= 0, got {self.T}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")


def bhattacharyya(f, g) -> float:
    """Similarity sum_i sqrt(f_i g_i) of two finite distributions."""
    fv = as_distribution(f, "f")
    gv = as_distribution(g, "g")
    if fv.shape != gv.shape:
        raise ValueError(f"length mismatch: {fv.size} vs {gv.size}")
    return float(np.sum(np.sqrt(fv * gv)))


def component_rho(fs, gs) -> float:
    """Bhattacharyya coefficient of a component pair, discrete or Gaussian."""
    if isinstance(fs, GaussianSpec) or isinstance(gs, GaussianSpec):
        return gaussian_bc(fs, gs)
    return bhattacharyya(fs, gs)


def exact_pe(f, g, pi: float) -> float:
    """Minimum average error probability sum_i min(pi f_i, (1-pi) g_i)."""
    fv = as_distribution(f, "f")
    gv = as_distribution(g, "g")
    if fv.shape != gv.shape:
        raise ValueError(f"length mismatch: {fv.size} vs {gv.size}")
    _check_prior(pi)
    return float(np.sum(np.minimum(pi * fv, (1.0 - pi) * gv)))


def _check_prior(pi: float) -> None:
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"prior pi must be in [0, 1], got {pi}")


def _check_rho(rho: float) -> float:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    return float(rho)


def _sqrt_one_minus(u: float) -> float:
    """sqrt(1 - u), tolerating overshoot of u past 1 by at most 1e-12."""
    if u > 1.0:
        if u > 1.0 + SQRT_OVERSHOOT_TOL:
            raise ValueError(f"radical argument 1 - {u!r} is negative beyond tolerance")
        return 0.0
    return math.sqrt(1.0 - u)


def lb_direct(rho: float, pi: float) -> float:
    """Lower bound (1 - sqrt(1 - 4 pi (1-pi) rho^2)) / 2 on the optimal error."""
    rho = _check_rho(rho)
    _check_prior(pi)
    return 0.5 * (1.0 - _sqrt_one_minus(4.0 * pi * (1.0 - pi) * rho * rho))


def lb_weak(rho: float, pi: float) -> float:
    """Weaker lower bound pi (1-pi) rho^2."""
    rho = _check_rho(rho)
    _check_prior(pi)
    return pi * (1.0 - pi) * rho * rho


def ub_pe(rho: float, pi: float) -> float:
    """Upper bound sqrt(pi (1-pi)) rho on the optimal error."""
    rho = _check_rho(rho)
    _check_prior(pi)
    return math.sqrt(pi * (1.0 - pi)) * rho


def lb_side_info_from_rhos(weights, rhos, pi: float) -> float:
    """Side-information bound from per-component coefficients.

    (1 - sum_s w_s sqrt(1 - 4 pi (1-pi) rho_s^2)) / 2, the average of the
    per-component direct bounds under the component-selector variable.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(float(w.sum()) - 1.0) > DIST_SUM_TOL:
        raise ValueError("weights must be nonnegative and sum to 1")
    _check_prior(pi)
    factor = 4.0 * pi * (1.0 - pi)
    total = sum(
        float(ws) * _sqrt_one_minus(factor * _check_rho(rs) ** 2)
        for ws, rs in zip(w, np.asarray(rhos, dtype=float))
    )
    return 0.5 * (1.0 - total)


def lb_side_info(mix: MixturePair, pi: float) -> float:
    """Side-information bound of a mixture pair, Eq.-(8)-style kernel."""
    return lb_side_info_from_rhos(mix.weights, mix.component_rhos(), pi)


def lb_direct_rho_variant(rho: float, pi: float) -> float:
    """Documented provenance variant with rho in place of rho^2 in the radical.

    Not a valid bound in general; kept only to reproduce previously
    published numbers for Example-2-style inputs.
    """
    rho = _check_rho(rho)
    _check_prior(pi)
    return 0.5 * (1.0 - _sqrt_one_minus(4.0 * pi * (1.0 - pi) * rho))


def lb_side_info_rho_variant(weights, rhos, pi: float) -> float:
    """Provenance variant of the side-information bound (rho, not rho^2)."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(float(w.sum()) - 1.0) > DIST_SUM_TOL:
        raise ValueError("weights must be nonnegative and sum to 1")
    _check_prior(pi)
    factor = 4.0 * pi * (1.0 - pi)
    total = sum(
        float(ws) * _sqrt_one_minus(factor * _check_rho(rs))
        for ws, rs in zip(w, np.asarray(rhos, dtype=float))
    )
    return 0.5 * (1.0 - total)


def example1_rho(params: Example1Params) -> float:
    """Closed-form coefficient rho0 * gamma^T for the single-edge prior.

    rho0 is the similarity of the target vertex's stationary marginal
    under the two networks; gamma is the similarity of one lagged
    (source, target) observation pair.
    """
    a2 = params.a * params.a
    n = params.N
    rho0 = math.sqrt(math.sqrt((n + 1.0) * (n + 1.0 + a2)) / (n + 1.0 + a2 / 2.0))
    gamma = math.sqrt(
        (n + 1.0)
        * math.sqrt(n * n + (2.0 + a2) * n + 1.0)
        / (n * n + (2.0 + a2 / 2.0) * n + 1.0 + a2 / 4.0)
    )
    return rho0 * gamma**params.T


def symmetric_dirichlet(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the simplex via normalized unit-rate exponentials."""
    e = rng.exponential(size=dim)
    return e / e.sum()


def dirichlet_experiment(dim: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Random two-component mixtures: compare the two bounds and the exact error.

    Per trial the mixture weight is uniform on [0, 1] and the four
    component distributions are independent symmetric Dirichlet draws of
    the given dimension; all quantities use prior 1/2.  Returns a
    (trials, 3) array of (lb_direct, lb_side_info, exact_pe) rows sorted
    in increasing lb_direct order.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    out = np.empty((trials, 3))
    for k in range(trials):
        alpha1 = rng.random()
        weights = np.array([alpha1, 1.0 - alpha1])
        f1 = symmetric_dirichlet(dim, rng)
        f2 = symmetric_dirichlet(dim, rng)
        g1 = symmetric_dirichlet(dim, rng)
        g2 = symmetric_dirichlet(dim, rng)
        f = weights[0] * f1 + weights[1] * f2
        g = weights[0] * g1 + weights[1] * g2
        mix = MixturePair(weights=weights, components=((f1, g1), (f2, g2)))
        out[k, 0] = lb_direct(bhattacharyya(f, g), 0.5)
        out[k, 1] = lb_side_info(mix, 0.5)
        out[k, 2] = exact_pe(f, g, 0.5)
    return out[np.argsort(out[:, 0], kind="stable")]
