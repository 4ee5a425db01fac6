"""Generative model: random sparse networks and noisy linear dynamics.

The state evolves as X(t) = X(t-1) A + W(t) with driving noise of
variance sigma2, started from its stationary law, and is observed as
Y(t) = X(t) + Z(t) with observation noise of variance nu2.  Entry (i, j)
of A is the coefficient of the edge i -> j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    StabilityError,
    as_square_matrix,
    solve_discrete_lyapunov,
    spectral_radius,
)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the network prior and the observation model.

    n: vertex count; T: time horizon (observations at 0..T); sigma2:
    driving-noise variance; nu2: observation-noise variance; p: edge
    probability; r0: target spectral radius of sampled networks.
    """

    n: int
    T: int
    sigma2: float = 1.0
    nu2: float = 0.0
    p: float = 0.2
    r0: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.T < 0:
            raise ValueError(f"T must be >= 0, got {self.T}")
        if self.sigma2 <= 0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")
        if self.nu2 < 0:
            raise ValueError(f"nu2 must be >= 0, got {self.nu2}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if not 0.0 < self.r0 < 1.0:
            raise ValueError(f"r0 must be in (0, 1), got {self.r0}")


@dataclass(frozen=True)
class SignedSupport:
    """Sign pattern and support of a sampled network.

    ``signs`` is +-1 for every ordered pair (drawn even where the support
    is 0, which matters when conditioning on everything but one entry);
    ``support`` is 0/1.
    """

    signs: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        signs = np.asarray(self.signs)
        support = np.asarray(self.support)
        if signs.shape != support.shape or signs.ndim != 2 or signs.shape[0] != signs.shape[1]:
            raise ValueError("signs and support must be square matrices of equal shape")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "support", support)


def _is_effectively_nilpotent(m: np.ndarray, r: float) -> bool:
    """Decide whether the computed spectral radius is a numerical zero.

    Eigenvalues of a nilpotent matrix are computed with error up to
    ~eps^(1/n), so exact comparison with zero is wrong.  For integer
    matrices (the sign-support products) a nonzero spectral radius is
    always >= 1 because the product of the nonzero eigenvalues is a
    nonzero integer, so anything computed below 1/2 proves nilpotency.
    """
    if r == 0.0:
        return True
    if np.all(m == np.round(m)):
        return r < 0.5
    return False


def scale_to_radius(a, r0: float) -> np.ndarray:
    """Rescale a matrix to spectral radius r0 when possible.

    A nilpotent matrix has spectral radius zero and is returned unchanged,
    since no scaling can reach r0.
    """
    m = as_square_matrix(a)
    r = spectral_radius(m)
    if _is_effectively_nilpotent(m, r):
        return m.copy()
    return (r0 / r) * m


def sample_dynamic_er(params: ModelParams, rng: np.random.Generator) -> tuple[SignedSupport, np.ndarray]:
    """Draw a signed ER network scaled to spectral radius r0.

    Signs are i.i.d. uniform on {-1, +1}, the support is i.i.d.
    Bernoulli(p) including self-pairs, and the adjacency is the entrywise
    product rescaled by ``scale_to_radius``.
    """
    n = params.n
    signs = rng.integers(0, 2, size=(n, n)) * 2 - 1
    support = (rng.random(size=(n, n)) < params.p).astype(np.int64)
    adjacency = scale_to_radius((signs * support).astype(float), params.r0)
    return SignedSupport(signs=signs, support=support), adjacency


def _stationary_cov(a: np.ndarray, params: ModelParams) -> np.ndarray:
    r = spectral_radius(a)
    if r >= 1.0:
        raise StabilityError(f"adjacency spectral radius {r:.6g} >= 1")
    return solve_discrete_lyapunov(a, params.sigma2)


def simulate_trajectory(a, params: ModelParams, rng: np.random.Generator) -> np.ndarray:
    """Simulate the observed series Y(0..T) as a (T+1, n) array.

    X(0) is drawn from the stationary covariance, so the state process is
    stationary; all noise draws come from ``rng`` in a fixed order, making
    the output bit-identical for a fixed generator state.
    """
    m = as_square_matrix(a)
    n = params.n
    if m.shape[0] != n:
        raise ValueError(f"adjacency order {m.shape[0]} != params.n {n}")
    q = _stationary_cov(m, params)
    chol_q = np.linalg.cholesky(q)
    sigma = np.sqrt(params.sigma2)
    nu = np.sqrt(params.nu2)
    x = rng.standard_normal(n) @ chol_q.T
    states = np.empty((params.T + 1, n))
    states[0] = x
    for t in range(1, params.T + 1):
        x = x @ m + sigma * rng.standard_normal(n)
        states[t] = x
    if nu > 0:
        return states + nu * rng.standard_normal(states.shape)
    return states


def observation_covariance(a, params: ModelParams) -> np.ndarray:
    """Exact covariance of the stacked observations (Y(0), ..., Y(T)).

    Block (s, t) with s <= t is Q A^(t-s), plus nu2 I on the diagonal
    blocks, where Q is the stationary state covariance; the result has
    order n(T+1) and is symmetric positive definite for sigma2 > 0.
    """
    m = as_square_matrix(a)
    n = params.n
    if m.shape[0] != n:
        raise ValueError(f"adjacency order {m.shape[0]} != params.n {n}")
    q = _stationary_cov(m, params)
    powers = [np.eye(n)]
    for _ in range(params.T):
        powers.append(powers[-1] @ m)
    size = n * (params.T + 1)
    cov = np.empty((size, size))
    nu2_eye = params.nu2 * np.eye(n)
    for s in range(params.T + 1):
        for t in range(s, params.T + 1):
            block = q @ powers[t - s]
            if s == t:
                block = block + nu2_eye
            cov[s * n:(s + 1) * n, t * n:(t + 1) * n] = block
            if s != t:
                cov[t * n:(t + 1) * n, s * n:(s + 1) * n] = block.T
    return (cov + cov.T) / 2.0


def zero_start_covariance(a, sigma2: float, T: int) -> np.ndarray:
    """Covariance of X(T) when X(0) = 0: sigma2 * sum of (A^m)* A^m over m < T."""
    m = as_square_matrix(a)
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    n = m.shape[0]
    total = np.zeros((n, n))
    power = np.eye(n)
    for _ in range(T):
        total += power.T @ power
        power = power @ m
    return sigma2 * (total + total.T) / 2.0
