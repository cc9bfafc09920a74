"""Varying-temperature informed importance tempering.

The chain lives on (x, j) where j indexes a rung of the inverse-temperature
ladder 1 = a_0 >= ... >= a_J > 0.  Within a rung it behaves like the informed
chain against pi^{a_j} with the rung's balancing function; between rungs it
proposes the adjacent rung (random-walk on j, clipped at the ends) weighted by
h* applied to the tempered density ratio and the rung weights psi.  Sample
(x, j) carries log weight

    (1 - a_j) log pi(x) + log phi(j) - log psi(j) - log Z_t(x, j),

with phi defaulting to the indicator of the cold rung, so only cold samples
enter the estimator.  psi is adapted online (stochastic approximation,
constants s0/n0); weights recorded while adaptation is running are
approximate, so exactness checks freeze psi.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..streams import WeightedSampleStream
from ..weighting import logsumexp, sample_categorical_log
from .config import SamplerConfig
from .discrete import _resolve_x0, _require_run_bound
from .ledger import CallLedger

LOG = np.log


def temp_move_options(j: int, J: int) -> list[int]:
    """Adjacent rungs reachable from j (uniform proposal, clipped at ends)."""
    if J == 0:
        return []
    if j == 0:
        return [1]
    if j == J:
        return [J - 1]
    return [j - 1, j + 1]


def log_q_temp(l: int, j: int, J: int) -> float:
    opts = temp_move_options(j, J)
    if l not in opts:
        return -np.inf
    return -LOG(len(opts))


def run_vt_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    ladder = config.ladder
    if ladder is None:
        raise ConfigurationError("vt-iit needs a ladder")
    _require_run_bound(config, max_calls)
    J = ladder.J
    a = ladder.inverse_temperatures()
    h_rungs = ladder.rung_balancing()
    h_star = ladder.h_star
    log_phi = ladder.log_phi()
    log_psi = np.zeros(J + 1)
    ledger = CallLedger(max_calls)

    x = _resolve_x0(target, config)
    j = 0
    lp = target.log_pi(x)
    states, rungs, logw, calls = [], [], [], []
    k = 0
    while config.T is None or k <= config.T:
        n_x = target.neighbor_count(x)
        if not ledger.can(n_x):
            break
        lp_nbrs = target.neighbor_log_pis(x)
        ledger.charge(n_x)
        t_flip = a[j] * (lp_nbrs - lp)
        degs = target.neighbor_degrees(x)
        if degs is not None:
            t_flip = t_flip + LOG(n_x) - LOG(degs)
        lw_flip = h_rungs[j].log_apply(t_flip) - LOG(n_x)

        opts = temp_move_options(j, J)
        lw_temp = np.empty(len(opts))
        for idx, l in enumerate(opts):
            lqf = log_q_temp(l, j, J)
            lqb = log_q_temp(j, l, J)
            t = (a[l] - a[j]) * lp + log_psi[l] - log_psi[j] + lqb - lqf
            lw_temp[idx] = lqf + h_star.log_apply(float(t))

        all_lw = np.concatenate([lw_flip, lw_temp])
        log_zt = logsumexp(all_lw)
        states.append(target.copy_state(x))
        rungs.append(j)
        logw.append((1.0 - a[j]) * lp + log_phi[j] - log_psi[j] - log_zt)
        calls.append(ledger.count)

        adapting = ladder.adapt_psi and (
            ladder.adapt_until is None or k < ladder.adapt_until
        )
        if adapting and J > 0:
            step = ladder.s0 / (ladder.n0 + k + 1)
            log_psi[j] -= step
            mask = np.arange(J + 1) != j
            log_psi[mask] += step / J

        i = sample_categorical_log(all_lw, rng)
        if i < n_x:
            x = target.neighbor(x, i)
            lp = lp_nbrs[i]
        else:
            j = opts[i - n_x]
        k += 1

    states_arr = np.stack(states) if states else None
    summary = None
    if states_arr is not None and hasattr(target, "summary_codes"):
        try:
            summary = target.summary_codes(states_arr)
        except NotImplementedError:
            summary = None
    return WeightedSampleStream(
        log_weights=np.asarray(logw),
        calls=np.asarray(calls, dtype=np.int64),
        states=states_arr,
        summary=summary,
        aux={"rungs": np.asarray(rungs, dtype=np.int64), "log_psi": log_psi.copy()},
    )
