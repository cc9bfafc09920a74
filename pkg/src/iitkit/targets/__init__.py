from .base import BinaryVectorTarget, DiscreteTarget, SmallGraphTarget, two_state_uniform
from .toys import ToySpec, ToyTarget, toy_log_pi, toy_modes, toy_pushforward_exact
from .varsel import (
    SIX_MODE_SETS,
    VarSelModel,
    VarSelTarget,
    generate_intermediate_snr,
    generate_six_mode,
    generate_varsel_data,
    is_local_mode,
    six_mode_vectors,
    varsel_log_posterior,
)
from .abc_geom import GeomABCSpec, GeomABCTarget
from .gaussian import DiscretePointProposal, GaussianSpec, GaussianTarget, RandomWalkProposal
from .noisy import NoisyToyTarget

__all__ = [
    "BinaryVectorTarget",
    "DiscreteTarget",
    "SmallGraphTarget",
    "two_state_uniform",
    "ToySpec",
    "ToyTarget",
    "toy_log_pi",
    "toy_modes",
    "toy_pushforward_exact",
    "SIX_MODE_SETS",
    "VarSelModel",
    "VarSelTarget",
    "generate_intermediate_snr",
    "generate_six_mode",
    "generate_varsel_data",
    "is_local_mode",
    "six_mode_vectors",
    "varsel_log_posterior",
    "GeomABCSpec",
    "GeomABCTarget",
    "DiscretePointProposal",
    "GaussianSpec",
    "GaussianTarget",
    "RandomWalkProposal",
    "NoisyToyTarget",
]
