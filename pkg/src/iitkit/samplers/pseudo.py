"""Pseudo-marginal samplers: the informed chain and the uninformed baseline
run against an unbiased density estimator.

The informed variant caches one estimate for the current state and one per
neighbor.  On a move x -> y the estimates of x and y are retained and only
the estimates of the remaining neighbors of y are drawn fresh.  An estimate
of -inf is the explicit zero-mass flag and is never fed to arithmetic:

* a zero-mass neighbor gets zero proposal weight, so the chain never moves
  onto a flagged state;
* if *every* neighbor is flagged, the whole neighborhood is redrawn (and
  the redraw counted) rather than letting the chain die -- this is the
  stability-over-exactness truncation, and the resulting small weight bias
  can be removed for targets that expose the closed-form log_B correction;
* if the *current* state is flagged (possible only at initialization), the
  density ratio is +inf for every unflagged neighbor, so the proposal is
  uniform over them and the sample itself carries zero weight.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..streams import WeightedSampleStream
from ..weighting import logsumexp, sample_categorical_log
from .config import SamplerConfig
from .discrete import _StreamBuilder, _neighbor_index_of, _resolve_x0, _require_run_bound
from .ledger import CallLedger

LOG = np.log


def _estimate_neighbors(target, x, rng) -> np.ndarray:
    fn = getattr(target, "neighbor_log_pi_estimates", None)
    if fn is not None:
        return np.asarray(fn(x, rng), dtype=np.float64)
    n = target.neighbor_count(x)
    return np.array(
        [target.log_pi_estimate(target.neighbor(x, i), rng) for i in range(n)]
    )


def run_p_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    if not target.has_estimator():
        raise ConfigurationError("p-iit needs a target with a density estimator")
    if config.correct_bias and not hasattr(target, "log_B"):
        raise ConfigurationError("this target has no zero-mass correction term")
    _require_run_bound(config, max_calls)
    h = config.h
    ledger = CallLedger(max_calls)
    x = _resolve_x0(target, config)

    lph_x = target.log_pi_estimate(x, rng)
    ledger.charge(1)
    if not ledger.can(target.neighbor_count(x)):
        return WeightedSampleStream(np.empty(0), np.empty(0, dtype=np.int64))
    lph_nbrs = _estimate_neighbors(target, x, rng)
    ledger.charge(target.neighbor_count(x))

    out = _StreamBuilder(target, x)
    redraws = 0
    k = 0
    while config.T is None or k <= config.T:
        n_x = target.neighbor_count(x)
        alive = lph_nbrs > -np.inf
        if not np.any(alive):
            if not ledger.can(n_x):
                break
            lph_nbrs = _estimate_neighbors(target, x, rng)
            ledger.charge(n_x)
            redraws += 1
            continue
        lw = np.full(n_x, -np.inf)
        if lph_x > -np.inf:
            t = lph_nbrs[alive] - lph_x
            degs = target.neighbor_degrees(x)
            if degs is not None:
                t = t + LOG(n_x) - LOG(degs[alive])
            lw[alive] = h.log_apply(t) - LOG(n_x)
            lw_emit = -logsumexp(lw)
            if config.correct_bias:
                lw_emit -= target.log_B(x)
        else:
            lw[alive] = 0.0  # ratio is +inf everywhere it is defined
            lw_emit = -np.inf
        out.emit(x, lw_emit, ledger.count)
        i = sample_categorical_log(lw, rng)
        y = target.neighbor(x, i)
        lph_y = lph_nbrs[i]
        n_y = target.neighbor_count(y)
        if not ledger.can(n_y - 1):
            break
        fresh = _estimate_neighbors(target, y, rng)
        ledger.charge(n_y - 1)
        back = _neighbor_index_of(target, y, x)
        fresh[back] = lph_x  # the old current-state estimate is retained
        x, lph_x, lph_nbrs = y, lph_y, fresh
        k += 1
    return out.finish({"zero_mass_redraws": redraws})


def run_pm_mh(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Pseudo-marginal uninformed baseline in sojourn form.

    The accepted estimate is carried: acceptance compares a fresh estimate of
    the proposal against the stored estimate of the current state, which is
    what keeps the marginal law of x exact for unbiased estimators.  A
    zero-mass proposal is always rejected; a zero-mass current state accepts
    any live proposal.
    """
    if not target.has_estimator():
        raise ConfigurationError("pseudo-marginal baseline needs an estimator")
    if not config.h.bounded:
        raise ConfigurationError("the baseline needs a balancing function <= 1")
    _require_run_bound(config, max_calls)
    h = config.h
    ledger = CallLedger(max_calls)
    x = _resolve_x0(target, config)
    lph_x = target.log_pi_estimate(x, rng)
    ledger.charge(1)
    out = _StreamBuilder(target, x)
    k = 0
    n_mh = 0
    while config.T is None or k <= config.T:
        if not ledger.can(1):
            if n_mh > 0:
                out.emit(x, LOG(n_mh), ledger.count)
            break
        n_x = target.neighbor_count(x)
        n_mh += 1
        j = int(rng.random() * n_x)
        y = target.neighbor(x, j)
        lph_y = target.log_pi_estimate(y, rng)
        ledger.charge(1)
        if lph_y == -np.inf:
            accept = False
        elif lph_x == -np.inf:
            accept = True
        else:
            t = lph_y - lph_x + LOG(n_x) - LOG(target.neighbor_count(y))
            accept = rng.random() < np.exp(h.log_apply(float(t)))
        if accept:
            out.emit(x, LOG(n_mh), ledger.count)
            x, lph_x = y, lph_y
            n_mh = 0
            k += 1
    return out.finish()
