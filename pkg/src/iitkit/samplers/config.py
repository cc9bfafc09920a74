"""Sampler configuration and validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..balancing import MIN_ONE, SQRT, BalancingFunction, parse_balancing
from ..errors import ConfigurationError

ALGORITHMS = (
    "naive-iit",
    "mh-iit",
    "rn-iit",
    "ct-iit",
    "vt-iit",
    "p-iit",
    "mt-it",
    "uninformed-mh",
)

LADDER_METHODS = ("M1", "M2", "M3")


@dataclass(frozen=True)
class LadderConfig:
    """Temperature ladder for the varying-temperature sampler.

    Inverse temperatures are a_j = 1 / (1 + j * delta) for j = 0..J, so the
    cold rung always has a_0 = 1.  ``method`` assigns the per-rung balancing
    functions: M1 uses min-one everywhere, M2 uses sqrt on the cold half and
    min-one on the hot half, M3 uses sqrt everywhere except the hottest rung.
    Rung weights psi are adapted online by stochastic approximation with
    constants s0, n0 unless ``adapt_psi`` is off; ``adapt_until`` freezes the
    adaptation after that many iterations.
    """

    J: int
    delta: float
    method: str = "M2"
    h_star: BalancingFunction = field(default_factory=lambda: BalancingFunction(MIN_ONE))
    s0: float = 100.0
    n0: float = 100.0
    adapt_psi: bool = True
    adapt_until: int | None = None
    phi: tuple | None = None
    h_list: tuple | None = None

    def __post_init__(self):
        if self.J < 0:
            raise ConfigurationError("ladder needs J >= 0")
        if self.delta <= 0:
            raise ConfigurationError("ladder needs delta > 0")
        if self.method not in LADDER_METHODS:
            raise ConfigurationError(f"unknown ladder method {self.method!r}")
        if self.phi is not None and len(self.phi) != self.J + 1:
            raise ConfigurationError("phi must have J + 1 entries")
        if self.h_list is not None and len(self.h_list) != self.J + 1:
            raise ConfigurationError("h_list must have J + 1 entries")

    def inverse_temperatures(self) -> np.ndarray:
        return 1.0 / (1.0 + self.delta * np.arange(self.J + 1))

    def rung_balancing(self) -> list[BalancingFunction]:
        if self.h_list is not None:
            return [parse_balancing(h) for h in self.h_list]
        sqrt_h, min_h = BalancingFunction(SQRT), BalancingFunction(MIN_ONE)
        if self.method == "M1":
            return [min_h] * (self.J + 1)
        if self.method == "M2":
            return [sqrt_h if j < self.J / 2 else min_h for j in range(self.J + 1)]
        return [sqrt_h if j < self.J else min_h for j in range(self.J + 1)]

    def log_phi(self) -> np.ndarray:
        if self.phi is None:
            out = np.full(self.J + 1, -np.inf)
            out[0] = 0.0
            return out
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.phi, dtype=np.float64))


@dataclass(frozen=True)
class SamplerConfig:
    """Everything needed to run one chain, minus the target itself."""

    algorithm: str
    h: BalancingFunction = field(default_factory=lambda: BalancingFunction(SQRT))
    T: int | None = None
    seed: int = 0
    rho: float | None = None
    A: float | None = None
    m: int | None = None
    a: float | None = None
    ladder: LadderConfig | None = None
    use_estimator: bool = False
    correct_bias: bool = False
    x0: Any = None
    engine: str = "auto"
    label: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}")
        if self.engine not in ("auto", "generic", "kernel"):
            raise ConfigurationError(f"unknown engine {self.engine!r}")
        if self.T is not None and self.T < 0:
            raise ConfigurationError("T must be >= 0")

    def validate_for(self, target) -> None:
        alg = self.algorithm
        if alg in ("mh-iit", "uninformed-mh") and not self.h.bounded:
            raise ConfigurationError(
                f"{alg} needs a balancing function bounded by 1, got {self.h.label()}"
            )
        if alg == "mh-iit":
            if (self.rho is None) == (self.A is None):
                raise ConfigurationError("mh-iit needs exactly one of rho or A")
            if self.rho is not None and not 0.0 <= self.rho <= 1.0:
                raise ConfigurationError("rho must lie in [0, 1]")
            if self.A is not None:
                if self.A <= 0:
                    raise ConfigurationError("A must be positive")
                if self.A > target.min_neighbor_count():
                    raise ConfigurationError("A must not exceed the minimum degree")
        if alg in ("rn-iit", "mt-it"):
            if self.m is None or self.m < 2:
                raise ConfigurationError(f"{alg} needs subset size m >= 2")
            if alg == "rn-iit" and self.m > target.min_neighbor_count():
                raise ConfigurationError("m must not exceed the minimum degree")
        if alg == "ct-iit" and (self.a is None or self.a <= 0):
            raise ConfigurationError("ct-iit needs inverse temperature a > 0")
        if alg == "vt-iit" and self.ladder is None:
            raise ConfigurationError("vt-iit needs a ladder")
        if alg == "p-iit" and not target.has_estimator():
            raise ConfigurationError("p-iit needs a target with a density estimator")
        if self.use_estimator and not target.has_estimator():
            raise ConfigurationError("target has no density estimator")

    def display_label(self) -> str:
        if self.label:
            return self.label
        bits = [self.algorithm, self.h.label()]
        if self.rho is not None:
            bits.append(f"rho={self.rho:g}")
        if self.A is not None:
            bits.append(f"A={self.A:g}")
        if self.m is not None:
            bits.append(f"m={self.m}")
        if self.a is not None:
            bits.append(f"a={self.a:g}")
        return " ".join(bits)
