from .config import ALGORITHMS, LadderConfig, SamplerConfig
from .discrete import (
    estimate_weight_mh,
    run_ct_iit,
    run_mh_iit,
    run_naive_iit,
    run_rn_iit,
    run_uninformed_mh,
)
from .dispatch import chain_rng, run_sampler
from .ledger import CallLedger
from .mtm import run_mt_it
from .pseudo import run_p_iit, run_pm_mh
from .tempering import run_vt_iit

__all__ = [
    "ALGORITHMS",
    "LadderConfig",
    "SamplerConfig",
    "CallLedger",
    "estimate_weight_mh",
    "run_ct_iit",
    "run_mh_iit",
    "run_naive_iit",
    "run_rn_iit",
    "run_uninformed_mh",
    "run_vt_iit",
    "run_p_iit",
    "run_pm_mh",
    "run_mt_it",
    "run_sampler",
    "chain_rng",
]
