"""Locally balanced proposal weights and the categorical draw they feed.

These are the shared primitives of every sampler: eta_h(y|x) in the log
domain, its normalizer Z_h(x), and a numerically stable categorical sample
from a vector of log weights.
"""
from __future__ import annotations

import numpy as np

from .balancing import BalancingFunction
from .errors import DegenerateDistributionError


def logsumexp(lw: np.ndarray) -> float:
    lw = np.asarray(lw, dtype=np.float64)
    m = np.max(lw)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(lw - m))))


def neighbor_log_weights(target, h: BalancingFunction, x, lp_x: float | None = None):
    """Log eta_h(y|x) for every y in N_x, in neighbor index order.

    The reference proposal is uniform on the neighborhood, so
    eta_h(y|x) = h(pi(y)|N_x| / (pi(x)|N_y|)) / |N_x|.
    """
    if lp_x is None:
        lp_x = target.log_pi(x)
    n_x = target.neighbor_count(x)
    lp_nbrs = target.neighbor_log_pis(x)
    t = lp_nbrs - lp_x
    degs = target.neighbor_degrees(x)
    if degs is not None:
        t = t + np.log(n_x) - np.log(degs)
    return h.log_apply(t) - np.log(n_x)


def log_eta(target, h: BalancingFunction, x, y) -> float:
    """Log eta_h(y|x) for a single neighbor y; raises if y is not in N_x."""
    key = target.state_key(y)
    n_x = target.neighbor_count(x)
    for i in range(n_x):
        if target.state_key(target.neighbor(x, i)) == key:
            t = (
                target.log_pi(y)
                - target.log_pi(x)
                + np.log(n_x)
                - np.log(target.neighbor_count(y))
            )
            return float(h.log_apply(float(t))) - float(np.log(n_x))
    raise ValueError("y is not a neighbor of x")


def compute_log_Z(target, h: BalancingFunction, x, counter=None) -> float:
    """Log Z_h(x), the informed-proposal normalizer at x.

    Charges |N_x| posterior evaluations to ``counter`` when one is passed.
    """
    lw = neighbor_log_weights(target, h, x)
    if counter is not None:
        counter.charge(target.neighbor_count(x))
    return logsumexp(lw)


def sample_categorical_log(log_weights, rng) -> int:
    """Draw an index with probability proportional to exp(log_weights).

    Uses the normalized-CDF method: one uniform per draw, max-shifted
    exponentiation.  Entries equal to -inf carry zero mass.
    """
    lw = np.asarray(log_weights, dtype=np.float64)
    if lw.size == 0:
        raise DegenerateDistributionError("empty weight vector")
    if np.any(np.isnan(lw)):
        raise ValueError("log weights must not be NaN")
    m = np.max(lw)
    if m == -np.inf:
        raise DegenerateDistributionError("all categorical weights are zero")
    cdf = np.cumsum(np.exp(lw - m))
    u = rng.random() * cdf[-1]
    i = int(np.searchsorted(cdf, u, side="right"))
    return min(i, lw.size - 1)
