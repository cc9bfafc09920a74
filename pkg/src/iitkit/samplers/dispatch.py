"""Single entry point mapping a SamplerConfig to the right implementation.

Toy targets running the always-informed, mixed or uninformed schemes are
routed to the chain kernels (compiled when built, pure-Python otherwise);
everything else uses the generic implementations.  Kernel streams record the
target's summary statistic instead of full states, which is all the
experiment metrics need.
"""
from __future__ import annotations

import numpy as np

from .. import _kernels
from ..balancing import HC
from ..errors import ConfigurationError
from ..streams import WeightedSampleStream
from ..targets.toys import ToyTarget, toy_modes
from .config import SamplerConfig
from .discrete import run_ct_iit, run_mh_iit, run_naive_iit, run_rn_iit, run_uninformed_mh
from .mtm import run_mt_it
from .pseudo import run_p_iit, run_pm_mh
from .tempering import run_vt_iit

_KERNEL_ALGS = {"naive-iit", "mh-iit", "uninformed-mh"}


def chain_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible generator for one (replicate, ...) cell."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def _kernel_eligible(target, config: SamplerConfig) -> bool:
    if config.algorithm not in _KERNEL_ALGS:
        return False
    if config.use_estimator:
        return False
    return type(target) is ToyTarget


def _run_kernel(target: ToyTarget, config: SamplerConfig, rng, max_calls, backend):
    spec = target.spec
    modes = toy_modes(spec)
    m1 = modes[0]
    m2 = modes[1] if len(modes) > 1 else np.zeros(spec.p, dtype=np.uint8)
    x0 = np.asarray(
        config.x0 if config.x0 is not None else target.default_x0(), dtype=np.uint8
    )
    mixed = config.algorithm != "naive-iit"
    rho_const, rho_A, use_A = 0.0, 0.0, False
    if config.algorithm == "mh-iit":
        if (config.rho is None) == (config.A is None):
            raise ConfigurationError("mh-iit needs exactly one of rho or A")
        if config.rho is not None:
            rho_const = float(config.rho)
        else:
            rho_A, use_A = float(config.A), True
    if config.T is None and max_calls is None:
        raise ConfigurationError("either T or a posterior-call budget is required")
    f_codes, logw, calls, x_final = _kernels.run_toy_chain(
        spec.example,
        float(spec.theta),
        m1,
        m2,
        x0,
        config.h.kind,
        float(config.h.c) if config.h.kind == HC else 0.0,
        mixed,
        rho_const,
        rho_A,
        use_A,
        config.T,
        max_calls,
        rng,
        backend=backend,
    )
    return WeightedSampleStream(
        log_weights=logw,
        calls=calls,
        states=None,
        summary=f_codes,
        aux={"final_state": x_final, "engine": _kernels.backend_name()},
    )


def run_sampler(
    target,
    config: SamplerConfig,
    rng=None,
    max_calls=None,
    proposal=None,
) -> WeightedSampleStream:
    """Run one chain and return its weighted sample stream."""
    from ..targets.base import DiscreteTarget

    if isinstance(target, DiscreteTarget):
        config.validate_for(target)
    if rng is None:
        rng = chain_rng(config.seed)
    engine = config.engine
    if engine == "kernel" and not _kernel_eligible(target, config):
        raise ConfigurationError("kernel engine unavailable for this run")
    if engine in ("auto", "kernel") and _kernel_eligible(target, config):
        return _run_kernel(target, config, rng, max_calls, backend=None)
    alg = config.algorithm
    if alg == "naive-iit":
        return run_naive_iit(target, config, rng, max_calls)
    if alg == "ct-iit":
        return run_ct_iit(target, config, rng, max_calls)
    if alg == "mh-iit":
        return run_mh_iit(target, config, rng, max_calls)
    if alg == "uninformed-mh":
        return run_uninformed_mh(target, config, rng, max_calls)
    if alg == "rn-iit":
        return run_rn_iit(target, config, rng, max_calls)
    if alg == "vt-iit":
        return run_vt_iit(target, config, rng, max_calls)
    if alg == "p-iit":
        return run_p_iit(target, config, rng, max_calls)
    if alg == "mt-it":
        if proposal is None:
            raise ConfigurationError("mt-it needs a proposal kernel")
        return run_mt_it(target, proposal, config, rng, max_calls)
    raise ConfigurationError(f"unknown algorithm {alg!r}")
