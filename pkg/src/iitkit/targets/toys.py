"""Closed-form binary-vector targets used throughout the experiments.

Four families on {0,1}^p, all with tunable tail rate theta:

* Toy1 -- unimodal, independent coordinates: pi(x) prop exp(-theta * |x - x*|_1)
  with mode x* = (1,...,1,0,...,0), |x*|_1 = p1.
* Toy2 -- unimodal, dependent coordinates: pi(x) prop exp(-theta * ell(x)) with
  ell(x) = |x|_1 - 1 when x_1 = 1 and ell(x) = 2p - |x|_1 when x_1 = 0;
  mode (1,0,...,0).
* Toy3 -- bimodal, modes two Hamming-2-separated vectors of weight p1.
* Toy4 -- bimodal, modes two Hamming-4-separated vectors of weight p1 (the
  harder traversal case).

Each family carries a canonical integer summary statistic F whose exact
push-forward law is available in closed form, which is what the
total-variation convergence metric is computed against.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np

from .base import BinaryVectorTarget

TOY_STATISTIC = {
    1: "hamming-to-mode",
    2: "branch-size",
    3: "mode-distance-pair",
    4: "mode-distance-pair",
}


def _log_comb(n: int, k: int) -> float:
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


@dataclass(frozen=True)
class ToySpec:
    example: int
    p: int
    p1: int = 1
    theta: float = 1.0

    def __post_init__(self):
        if self.example not in (1, 2, 3, 4):
            raise ValueError("example must be 1, 2, 3 or 4")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.theta <= 0:
            raise ValueError("theta must be > 0")
        if self.example in (1, 3, 4) and not 1 <= self.p1 <= self.p:
            raise ValueError("p1 must satisfy 1 <= p1 <= p")
        if self.example == 3 and self.p < self.p1 + 1:
            raise ValueError("Toy3 requires p >= p1 + 1")
        if self.example == 4 and (self.p1 < 3 or self.p < self.p1 + 2):
            raise ValueError("Toy4 requires p1 >= 3 and p >= p1 + 2")


def toy_modes(spec: ToySpec) -> list[np.ndarray]:
    """The local modes of the target, as uint8 vectors."""
    p, p1 = spec.p, spec.p1
    if spec.example == 1:
        m = np.zeros(p, dtype=np.uint8)
        m[:p1] = 1
        return [m]
    if spec.example == 2:
        m = np.zeros(p, dtype=np.uint8)
        m[0] = 1
        return [m]
    m1 = np.zeros(p, dtype=np.uint8)
    m2 = np.zeros(p, dtype=np.uint8)
    if spec.example == 3:
        m1[0] = 1
        m1[2 : p1 + 1] = 1
        m2[1] = 1
        m2[2 : p1 + 1] = 1
    else:
        m1[0] = m1[1] = 1
        m1[4 : p1 + 2] = 1
        m2[2] = m2[3] = 1
        m2[4 : p1 + 2] = 1
    return [m1, m2]


class ToyTarget(BinaryVectorTarget):
    """Binary-vector target with O(1) per-flip density updates."""

    def __init__(self, spec: ToySpec):
        super().__init__(spec.p)
        self.spec = spec
        self.theta = float(spec.theta)
        self.modes = toy_modes(spec)
        self.statistic_name = TOY_STATISTIC[spec.example]

    # -- density ---------------------------------------------------------
    def log_pi(self, x) -> float:
        x = np.asarray(x)
        if x.shape != (self.p,):
            raise ValueError(f"state must have length {self.p}")
        th = self.theta
        if self.spec.example == 1:
            return -th * float(np.count_nonzero(x != self.modes[0]))
        if self.spec.example == 2:
            s = int(np.count_nonzero(x))
            ell = s - 1 if x[0] == 1 else 2 * self.p - s
            return -th * ell
        d1 = float(np.count_nonzero(x != self.modes[0]))
        d2 = float(np.count_nonzero(x != self.modes[1]))
        return float(np.logaddexp(-th * d1, -th * d2))

    def neighbor_log_pis(self, x) -> np.ndarray:
        x = np.asarray(x)
        th = self.theta
        if self.spec.example == 1:
            base = self.log_pi(x)
            delta = np.where(x == self.modes[0], -th, th)
            return base + delta
        if self.spec.example == 2:
            s = int(np.count_nonzero(x))
            base = self.log_pi(x)
            if x[0] == 1:
                delta = np.where(x == 1, th, -th).astype(np.float64)
                delta[0] = -th * (2 * self.p - 2 * s + 2)
            else:
                delta = np.where(x == 1, -th, th).astype(np.float64)
                delta[0] = 2 * th * (self.p - s)
            return base + delta
        d1 = np.count_nonzero(x != self.modes[0])
        d2 = np.count_nonzero(x != self.modes[1])
        d1n = d1 + np.where(x == self.modes[0], 1, -1)
        d2n = d2 + np.where(x == self.modes[1], 1, -1)
        return np.logaddexp(-th * d1n, -th * d2n)

    # -- summary statistic -------------------------------------------------
    def summary_code(self, x) -> int:
        x = np.asarray(x)
        if self.spec.example == 1:
            return int(np.count_nonzero(x != self.modes[0]))
        if self.spec.example == 2:
            s = int(np.count_nonzero(x))
            return s - 1 if x[0] == 1 else self.p
        d1 = int(np.count_nonzero(x != self.modes[0]))
        d2 = int(np.count_nonzero(x != self.modes[1]))
        return d1 * (self.p + 1) + d2

    def summary_codes(self, states: np.ndarray) -> np.ndarray:
        X = np.asarray(states)
        if self.spec.example == 1:
            return (X != self.modes[0]).sum(axis=1).astype(np.int64)
        if self.spec.example == 2:
            s = X.sum(axis=1, dtype=np.int64)
            return np.where(X[:, 0] == 1, s - 1, self.p)
        d1 = (X != self.modes[0]).sum(axis=1, dtype=np.int64)
        d2 = (X != self.modes[1]).sum(axis=1, dtype=np.int64)
        return d1 * (self.p + 1) + d2

    # -- exact push-forward ------------------------------------------------
    def pushforward_exact(self):
        """(codes, probs) of the canonical statistic under pi; sums to 1."""
        p, th = self.p, self.theta
        if self.spec.example == 1:
            ks = np.arange(p + 1)
            logs = np.array(
                [_log_comb(p, k) - th * k - p * np.log1p(np.exp(-th)) for k in ks]
            )
            return ks.astype(np.int64), np.exp(logs)
        if self.spec.example == 2:
            log_c = np.log1p(np.exp(-th * (p + 1))) + (p - 1) * np.log1p(np.exp(-th))
            ks = np.arange(p + 1)
            logs = np.empty(p + 1)
            for k in range(p):
                logs[k] = _log_comb(p - 1, k) - th * k - log_c
            logs[p] = -th * (p + 1) + (p - 1) * np.log1p(np.exp(-th)) - log_c
            return ks.astype(np.int64), np.exp(logs)
        d = int(np.count_nonzero(self.modes[0] != self.modes[1]))
        log_c = np.log(2.0) + p * np.log1p(np.exp(-th))
        codes, probs = [], []
        for i in range(p - d + 1):
            for j in range(d + 1):
                k1, k2 = i + j, i + d - j
                lp = (
                    _log_comb(p - d, i)
                    + _log_comb(d, j)
                    + np.logaddexp(-th * k1, -th * k2)
                    - log_c
                )
                codes.append(k1 * (p + 1) + k2)
                probs.append(np.exp(lp))
        order = np.argsort(codes)
        return np.asarray(codes, dtype=np.int64)[order], np.asarray(probs)[order]


def toy_log_pi(spec: ToySpec, x) -> float:
    return ToyTarget(spec).log_pi(x)


def toy_pushforward_exact(spec: ToySpec, statistic: str | None = None):
    """Exact push-forward of the toy's canonical statistic.

    ``statistic`` may name the expected map; a mismatch is an error so that
    experiment configs cannot silently pair a target with the wrong metric.
    """
    if statistic is not None and statistic != TOY_STATISTIC[spec.example]:
        raise ValueError(
            f"statistic {statistic!r} does not match this target's "
            f"{TOY_STATISTIC[spec.example]!r}"
        )
    return ToyTarget(spec).pushforward_exact()
