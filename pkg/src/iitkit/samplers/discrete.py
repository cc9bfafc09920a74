"""Generic discrete-space samplers: the informed chain, its mixed
informed/acceptance-rejection variant, the uninformed baseline and the
random-subset scheme.

Every sampler emits a stream of (state, log-weight) pairs with a cumulative
posterior-call ledger; the self-normalized estimator downstream consumes the
log weights directly.  Each run is a pure function of (target, config, seed).

Iteration convention: a run configured with T iterations emits T + 1 weighted
samples (indices 0..T) because the sweep that weights sample k is the same
sweep that proposes sample k+1.  Budget-capped runs stop at the last sample
whose update fits inside the budget.
"""
from __future__ import annotations

import numpy as np

from ..balancing import BalancingFunction
from ..errors import ConfigurationError
from ..streams import WeightedSampleStream
from ..weighting import logsumexp, sample_categorical_log
from .config import SamplerConfig
from .ledger import CallLedger

LOG = np.log


class _StreamBuilder:
    """Collects per-sample records and finalizes a WeightedSampleStream."""

    def __init__(self, target, x0, cap_hint: int | None = None):
        self.target = target
        self.states: list = []
        self.logw: list[float] = []
        self.calls: list[int] = []
        self.cap_hint = cap_hint

    def emit(self, x, lw: float, calls: int) -> None:
        self.states.append(self.target.copy_state(x))
        self.logw.append(float(lw))
        self.calls.append(int(calls))

    def finish(self, aux: dict | None = None) -> WeightedSampleStream:
        if not self.states:
            states = None
        elif isinstance(self.states[0], np.ndarray):
            states = np.stack(self.states)
        else:
            states = np.asarray(self.states)
        summary = None
        if hasattr(self.target, "summary_codes") and len(self.states):
            try:
                summary = self.target.summary_codes(states)
            except NotImplementedError:
                summary = None
        return WeightedSampleStream(
            log_weights=np.asarray(self.logw),
            calls=np.asarray(self.calls, dtype=np.int64),
            states=states,
            summary=summary,
            aux=aux or {},
        )


def _resolve_x0(target, config):
    return target.copy_state(config.x0) if config.x0 is not None else target.default_x0()


def _require_run_bound(config: SamplerConfig, max_calls):
    if config.T is None and max_calls is None:
        raise ConfigurationError("either T or a posterior-call budget is required")


def _informed_log_weights(target, h, x, lp_x, a=1.0):
    """Log proposal weights over N_x (tempered density, untempered q-ratio)."""
    lp_nbrs = target.neighbor_log_pis(x)
    t = a * (lp_nbrs - lp_x)
    degs = target.neighbor_degrees(x)
    n_x = lp_nbrs.shape[0]
    if degs is not None:
        t = t + LOG(n_x) - LOG(degs)
    return h.log_apply(t) - LOG(n_x), lp_nbrs


def run_ct_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Always-accepted informed chain against the tempered target pi^a.

    Sample k carries log weight (1 - a) log pi(x_k) - log Z_{h,a}(x_k); a = 1
    recovers the plain informed chain.
    """
    a = 1.0 if config.algorithm == "naive-iit" else config.a
    if a is None or a <= 0:
        raise ConfigurationError("ct-iit needs inverse temperature a > 0")
    _require_run_bound(config, max_calls)
    h = config.h
    ledger = CallLedger(max_calls)
    x = _resolve_x0(target, config)
    lp = target.log_pi(x)
    out = _StreamBuilder(target, x)
    k = 0
    while config.T is None or k <= config.T:
        n_x = target.neighbor_count(x)
        if not ledger.can(n_x):
            break
        lw, lp_nbrs = _informed_log_weights(target, h, x, lp, a)
        ledger.charge(n_x)
        log_z = logsumexp(lw)
        out.emit(x, (1.0 - a) * lp - log_z, ledger.count)
        i = sample_categorical_log(lw, rng)
        x = target.neighbor(x, i)
        lp = lp_nbrs[i]
        k += 1
    return out.finish()


def run_naive_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Informed importance-tempered chain: move by eta_h/Z_h, weight by 1/Z_h."""
    if config.algorithm != "naive-iit":
        config = SamplerConfig(**{**config.__dict__, "algorithm": "naive-iit", "a": None})
    return run_ct_iit(target, config, rng, max_calls)


def _alg_mixed_step(target, h, x, lp_x, rho, rng, ledger):
    """One mixed weight-estimation step (acceptance-rejection with informed
    restarts).

    Returns (n_mh, log_z, y, lp_y, truncated): n_mh counts completed
    acceptance-rejection proposals (each adds 1 to the weight and costs one
    call); log_z is set when the step exited through an informed update
    (adding 1/Z_h(x) to the weight and costing |N_x| calls).
    """
    n_mh = 0
    n_x = target.neighbor_count(x)
    while True:
        u = rng.random()
        if u < rho:
            if not ledger.can(n_x):
                return n_mh, None, None, None, True
            lw, lp_nbrs = _informed_log_weights(target, h, x, lp_x)
            ledger.charge(n_x)
            log_z = logsumexp(lw)
            i = sample_categorical_log(lw, rng)
            return n_mh, log_z, target.neighbor(x, i), lp_nbrs[i], False
        if not ledger.can(1):
            return n_mh, None, None, None, True
        n_mh += 1
        j = int(rng.random() * n_x)
        y = target.neighbor(x, j)
        lp_y = target.log_pi(y)
        ledger.charge(1)
        t = lp_y - lp_x + LOG(n_x) - LOG(target.neighbor_count(y))
        if rng.random() < np.exp(h.log_apply(float(t))):
            return n_mh, None, y, lp_y, False


def estimate_weight_mh(target, h: BalancingFunction, x, rho: float, rng, counter=None):
    """Unbiased importance-weight estimate at x with exact-update frequency rho.

    Returns (w, y, calls): the raw weight estimate with E[w] = 1/Z_h(x), the
    next state (drawn from the informed kernel), and the posterior calls
    spent.  Requires h bounded by 1.
    """
    if not h.bounded:
        raise ConfigurationError("weight estimation needs a balancing function <= 1")
    if not 0.0 <= rho <= 1.0:
        raise ConfigurationError("rho must lie in [0, 1]")
    ledger = counter if counter is not None else CallLedger()
    before = ledger.count
    lp_x = target.log_pi(x)
    n_mh, log_z, y, _, truncated = _alg_mixed_step(target, h, x, lp_x, rho, rng, ledger)
    if truncated:
        raise RuntimeError("weight estimation exceeded the posterior-call budget")
    w = float(n_mh) + (np.exp(-log_z) if log_z is not None else 0.0)
    return w, y, ledger.count - before


def _mixed_log_weight(n_mh: int, log_z) -> float:
    if log_z is None:
        return LOG(n_mh) if n_mh > 0 else -np.inf
    if n_mh == 0:
        return -log_z
    return float(np.logaddexp(LOG(n_mh), -log_z))


def run_mh_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Mixed chain: with probability rho(x) per inner step do an exact
    informed update, otherwise an acceptance-rejection proposal.

    rho == 0 everywhere is the uninformed baseline in sojourn form; rho == 1
    recovers the always-informed chain's output law.
    """
    if not config.h.bounded:
        raise ConfigurationError("mh-iit needs a balancing function bounded by 1")
    _require_run_bound(config, max_calls)
    if config.algorithm == "mh-iit" and (config.rho is None) == (config.A is None):
        raise ConfigurationError("mh-iit needs exactly one of rho or A")
    ledger = CallLedger(max_calls)
    x = _resolve_x0(target, config)
    lp = target.log_pi(x)
    out = _StreamBuilder(target, x)
    k = 0
    while config.T is None or k <= config.T:
        if config.A is not None:
            rho = min(1.0, config.A / target.neighbor_count(x))
        else:
            rho = config.rho if config.rho is not None else 0.0
        n_mh, log_z, y, lp_y, truncated = _alg_mixed_step(
            target, config.h, x, lp, rho, rng, ledger
        )
        if truncated:
            if n_mh > 0:
                out.emit(x, _mixed_log_weight(n_mh, None), ledger.count)
            break
        out.emit(x, _mixed_log_weight(n_mh, log_z), ledger.count)
        x, lp = y, lp_y
        k += 1
    return out.finish()


def run_uninformed_mh(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Classic MH re-emitted as (accepted state, sojourn weight) pairs.

    Identical in law to the mixed chain with rho == 0; one posterior call per
    proposal.  With ``use_estimator`` the density is replaced by its
    pseudo-marginal estimate, carried across iterations for the current state.
    """
    if config.use_estimator:
        from .pseudo import run_pm_mh

        return run_pm_mh(target, config, rng, max_calls)
    cfg_dict = {**config.__dict__, "rho": 0.0, "A": None}
    return run_mh_iit(target, SamplerConfig(**cfg_dict), rng, max_calls)


def run_rn_iit(target, config: SamplerConfig, rng, max_calls=None) -> WeightedSampleStream:
    """Informed chain on random neighborhood subsets of fixed size m.

    The subset for the next state is the current state plus m - 1 neighbors
    of the new state drawn uniformly without replacement; m posterior calls
    per iteration.  The recorded log weight is -log|N_x| - log Z_h(x, S).
    """
    m = config.m
    if m is None or m < 2:
        raise ConfigurationError("rn-iit needs subset size m >= 2")
    if m > target.min_neighbor_count():
        raise ConfigurationError("m must not exceed the minimum degree")
    _require_run_bound(config, max_calls)
    h = config.h
    ledger = CallLedger(max_calls)
    x = _resolve_x0(target, config)
    lp = target.log_pi(x)
    n_x = target.neighbor_count(x)
    sub = rng.choice(n_x, size=m, replace=False).astype(np.int64)
    out = _StreamBuilder(target, x)
    subsets = []
    k = 0
    while config.T is None or k <= config.T:
        if not ledger.can(m):
            break
        lp_sub = _neighbor_log_pis_subset(target, x, sub)
        ledger.charge(m)
        t = lp_sub - lp
        degs = target.neighbor_degrees(x)
        if degs is not None:
            t = t + LOG(n_x) - LOG(degs[sub])
        lw = h.log_apply(t) - LOG(n_x)
        log_zs = logsumexp(lw)
        out.emit(x, -LOG(n_x) - log_zs, ledger.count)
        subsets.append(sub.copy())
        j = sample_categorical_log(lw, rng)
        x_new = target.neighbor(x, int(sub[j]))
        lp_new = lp_sub[j]
        n_new = target.neighbor_count(x_new)
        back = _neighbor_index_of(target, x_new, x)
        draw = rng.choice(n_new - 1, size=m - 1, replace=False).astype(np.int64)
        draw += draw >= back
        sub = np.concatenate(([back], draw))
        x, lp, n_x = x_new, lp_new, n_new
        k += 1
    aux = {"subsets": np.stack(subsets) if subsets else None}
    return out.finish(aux)


def _neighbor_log_pis_subset(target, x, idx) -> np.ndarray:
    fn = getattr(target, "neighbor_log_pi_subset", None)
    if fn is not None:
        return fn(x, idx)
    lp = target.neighbor_log_pis(x)
    return lp[np.asarray(idx, dtype=np.int64)]


def _neighbor_index_of(target, x, y) -> int:
    """Index i with neighbor(x, i) == y; the states must be adjacent."""
    if isinstance(x, np.ndarray):
        diff = np.flatnonzero(np.asarray(x) != np.asarray(y))
        if diff.size == 1:
            return int(diff[0])
    key = target.state_key(y)
    for i in range(target.neighbor_count(x)):
        if target.state_key(target.neighbor(x, i)) == key:
            return i
    raise ValueError("states are not neighbors")
