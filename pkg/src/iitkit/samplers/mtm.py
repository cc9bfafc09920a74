"""Multiple-try importance tempering on general state spaces.

Candidates are drawn iid from an arbitrary proposal kernel Q(x, .), scored by
alpha_h(x, y) = h(pi(y) q(x|y) / (pi(x) q(y|x))) -- no q factor outside h,
since the candidates already carry the proposal law.  The chosen candidate is
always accepted; sample x carries log weight -log Z~_h(x, S) with
Z~ = sum of candidate scores.  The next candidate set is the old state plus
m - 1 fresh draws from the new state.  m posterior calls per iteration.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..streams import WeightedSampleStream
from ..weighting import logsumexp, sample_categorical_log
from .config import SamplerConfig
from .discrete import _require_run_bound
from .ledger import CallLedger


def run_mt_it(target, proposal, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    m = config.m
    if m is None or m < 2:
        raise ConfigurationError("mt-it needs candidate count m >= 2")
    _require_run_bound(config, max_calls)
    h = config.h
    ledger = CallLedger(max_calls)
    x = np.asarray(config.x0 if config.x0 is not None else target.default_x0())
    lp_x = float(target.log_pi(x))

    cand = proposal.sample_batch(x, m, rng)
    lp_cand = None  # densities of the candidate set, filled lazily per sweep
    states, logw, calls = [], [], []
    k = 0
    while config.T is None or k <= config.T:
        if not ledger.can(m):
            break
        if lp_cand is None:
            lp_cand = target.log_pi_batch(cand)
        ledger.charge(m)
        t = lp_cand - lp_x
        if not getattr(proposal, "symmetric", False):
            t = t + proposal.log_q_to(cand, x) - proposal.log_q_batch(x, cand)
        lalpha = h.log_apply(t)
        states.append(np.array(x, copy=True))
        logw.append(-logsumexp(lalpha))
        calls.append(ledger.count)
        i = sample_categorical_log(lalpha, rng)
        y = np.array(cand[i], copy=True)
        lp_y = float(lp_cand[i])
        fresh = proposal.sample_batch(y, m - 1, rng)
        cand = np.concatenate([np.asarray(x)[None, ...], fresh], axis=0)
        lp_fresh = target.log_pi_batch(fresh)
        lp_cand = np.concatenate([[lp_x], lp_fresh])
        x, lp_x = y, lp_y
        k += 1
    return WeightedSampleStream(
        log_weights=np.asarray(logw),
        calls=np.asarray(calls, dtype=np.int64),
        states=np.stack(states) if states else None,
    )
