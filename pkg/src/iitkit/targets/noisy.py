"""Pseudo-marginal wrapper for the unimodal toys.

For Toy1/Toy2 the log density is -theta * u(x) for an integer statistic u.
Pretending theta is only known through an unbiased draw theta_hat ~
N(theta, sigma^2) gives the unbiased density estimator

    pi_hat(x) = exp(-theta_hat * u(x) - u(x)^2 sigma^2 / 2),

since E exp(-theta_hat u) = exp(-theta u + u^2 sigma^2 / 2).  Each call
draws a fresh theta_hat.
"""
from __future__ import annotations

import numpy as np

from .toys import ToySpec, ToyTarget


class NoisyToyTarget(ToyTarget):
    def __init__(self, spec: ToySpec, sigma: float):
        if spec.example not in (1, 2):
            raise ValueError("the noisy wrapper needs a linear-statistic toy (1 or 2)")
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        super().__init__(spec)
        self.sigma = float(sigma)

    def _u(self, lp: float | np.ndarray):
        return -np.asarray(lp) / self.theta

    def log_pi_estimate(self, x, rng) -> float:
        u = self._u(self.log_pi(x))
        theta_hat = self.theta + self.sigma * rng.standard_normal()
        return float(-theta_hat * u - 0.5 * (u * self.sigma) ** 2)

    def neighbor_log_pi_estimates(self, x, rng) -> np.ndarray:
        u = self._u(self.neighbor_log_pis(x))
        theta_hat = self.theta + self.sigma * rng.standard_normal(u.shape[0])
        return -theta_hat * u - 0.5 * (u * self.sigma) ** 2
