"""Geometric target with a Bernoulli-averaged density estimator.

The target is geometric on {1, 2, ...} with success probability 1 - a*b, so
its mean is 1/(1 - a*b).  Only a noisy density estimate is available:

    pi_hat(x) = U~_x * (1 - a) * a^(x - 1),

where U~_x is the mean of K Bernoulli(b^x) draws.  E[U~_x] = b^x makes
pi_hat unbiased for the target up to a constant.  With positive probability
all K draws are zero; such estimates carry the explicit zero-mass flag -inf
and are never treated as ordinary log values by the samplers.

The chain walks on the integers: N_x = {x-1, x+1} for x >= 2 and N_1 = {2}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import DiscreteTarget


@dataclass(frozen=True)
class GeomABCSpec:
    a: float
    b: float
    K: int

    def __post_init__(self):
        if not 0 < self.a < 1 or not 0 < self.b < 1:
            raise ValueError("a and b must lie in (0, 1)")
        if self.K < 1:
            raise ValueError("K must be a positive integer")

    @property
    def mean(self) -> float:
        return 1.0 / (1.0 - self.a * self.b)


class GeomABCTarget(DiscreteTarget):
    def __init__(self, spec: GeomABCSpec):
        self.spec = spec

    # Exact density, used only by diagnostics; the samplers see the estimator.
    def log_pi(self, x) -> float:
        x = int(x)
        if x < 1:
            raise ValueError("states are positive integers")
        s = self.spec
        return (x - 1) * np.log(s.a * s.b)

    def neighbor_count(self, x) -> int:
        return 1 if int(x) == 1 else 2

    def neighbor(self, x, i):
        x = int(x)
        if x == 1:
            return 2
        return x - 1 if i == 0 else x + 1

    def neighbor_degrees(self, x) -> np.ndarray | None:
        x = int(x)
        if x == 1:
            return np.array([2.0])
        if x == 2:
            return np.array([1.0, 2.0])
        return np.array([2.0, 2.0])

    def min_neighbor_count(self) -> int:
        return 1

    def default_x0(self):
        return 1

    def log_pi_estimate(self, x, rng) -> float:
        x = int(x)
        s = self.spec
        k = rng.binomial(s.K, s.b**x)
        if k == 0:
            return -np.inf
        return float(np.log(k / s.K) + np.log1p(-s.a) + (x - 1) * np.log(s.a))

    def log_B(self, x) -> float:
        """Log probability that not every neighbor estimate is flagged zero.

        B(1) = 1 - (1 - b^2)^K and for x >= 2
        B(x) = 1 - (1 - b^(x-1))^K (1 - b^(x+1))^K; the inverse of B is the
        exactness correction for the zero-mass truncation.
        """
        x = int(x)
        s = self.spec
        lq_up = s.K * np.log1p(-(s.b ** (x + 1)))
        if x == 1:
            return float(np.log1p(-np.exp(lq_up)))
        lq = s.K * np.log1p(-(s.b ** (x - 1))) + lq_up
        return float(np.log1p(-np.exp(lq)))
