"""Gaussian target and random-walk proposal for the multiple-try sampler."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GaussianSpec:
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")

    def default_proposal_scale(self) -> float:
        return float(np.sqrt(2.7 / self.p**0.75))


class GaussianTarget:
    """Standard p-variate normal, constants dropped."""

    def __init__(self, spec: GaussianSpec):
        self.spec = spec
        self.p = spec.p

    def log_pi(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.p,):
            raise ValueError(f"state must have length {self.p}")
        return -0.5 * float(x @ x)

    def log_pi_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return -0.5 * np.einsum("ij,ij->i", X, X)

    def default_x0(self):
        return np.zeros(self.p)


class RandomWalkProposal:
    """Q(x, .) = N(x, sigma^2 I); symmetric, so log q ratios vanish."""

    symmetric = True

    def __init__(self, sigma: float, p: int):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)
        self.p = int(p)

    def sample_batch(self, x, m: int, rng) -> np.ndarray:
        return np.asarray(x) + self.sigma * rng.standard_normal((m, self.p))

    def log_q_batch(self, x, Y: np.ndarray) -> np.ndarray:
        D = np.asarray(Y) - np.asarray(x)
        return -0.5 * np.einsum("ij,ij->i", D, D) / self.sigma**2


class DiscretePointProposal:
    """Tabulated proposal q(y|x) on a few integer states (exactness checks)."""

    symmetric = False

    def __init__(self, Q: np.ndarray):
        Q = np.asarray(Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if np.any(np.diag(Q) != 0):
            raise ValueError("Q(x, {x}) must be zero")
        if not np.allclose(Q.sum(axis=1), 1.0, atol=1e-12):
            raise ValueError("rows of Q must sum to one")
        self.Q = Q

    def sample_batch(self, x, m: int, rng) -> np.ndarray:
        row = self.Q[int(x)]
        cdf = np.cumsum(row)
        u = rng.random(m) * cdf[-1]
        return np.searchsorted(cdf, u, side="right").astype(np.int64)

    def log_q_batch(self, x, Y: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.Q[int(x), np.asarray(Y, dtype=np.int64)])

    def log_q_to(self, Y: np.ndarray, x) -> np.ndarray:
        """log q(x | y) for each y in Y."""
        with np.errstate(divide="ignore"):
            return np.log(self.Q[np.asarray(Y, dtype=np.int64), int(x)])
