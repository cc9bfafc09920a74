"""iitkit: importance-tempered MCMC samplers for discrete state spaces.

The package implements the always-accept informed sampling family (exact,
mixed, random-subset, tempered, pseudo-marginal and multiple-try variants),
an exact small-space analysis engine for transition matrices, spectral gaps,
asymptotic variances and cost/complexity metrics, and a CLI driving seeded,
reproducible experiments.
"""
from .balancing import BalancingFunction, apply_balancing, parse_balancing
from .streams import WeightedSampleStream
from .weighting import compute_log_Z, log_eta, sample_categorical_log
from .samplers import LadderConfig, SamplerConfig, chain_rng, run_sampler

__version__ = "0.1.0"

__all__ = [
    "BalancingFunction",
    "apply_balancing",
    "parse_balancing",
    "WeightedSampleStream",
    "compute_log_Z",
    "log_eta",
    "sample_categorical_log",
    "LadderConfig",
    "SamplerConfig",
    "chain_rng",
    "run_sampler",
    "__version__",
]
