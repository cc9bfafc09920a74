"""Estimators and experiment metrics over weighted sample streams.

Conventions shared by everything here: sample 0 (the arbitrary initial
state) never enters an estimate; ``burn_in_fraction`` then discards that
fraction of the remaining samples; log weights are exponentiated only after
subtracting the running maximum, so streams whose raw weights span thousands
of log units are safe.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStreamError
from .samplers.dispatch import run_sampler
from .streams import WeightedSampleStream


@dataclass(frozen=True)
class EstimatorResult:
    value: float
    effective_samples: float
    n_samples: int


@dataclass(frozen=True)
class ThresholdResult:
    calls_to_threshold: int
    censored: bool
    threshold: float
    budget: int
    total_calls: int


def _retained(stream: WeightedSampleStream, burn_in_fraction: float) -> slice:
    n = len(stream)
    if n == 0:
        raise DegenerateStreamError("stream is empty")
    if not 0.0 <= burn_in_fraction < 1.0:
        raise ValueError("burn_in_fraction must lie in [0, 1)")
    if n == 1:
        # chain never left its initial state; estimate with what exists
        return slice(0, 1)
    start = 1 + int(burn_in_fraction * (n - 1))
    if start >= n:
        start = n - 1
    return slice(start, n)


def _shifted_weights(log_w: np.ndarray) -> np.ndarray:
    m = np.max(log_w)
    if m == -np.inf:
        raise DegenerateStreamError("every retained weight is zero")
    return np.exp(log_w - m)


def self_normalized_estimate(
    stream: WeightedSampleStream, f, burn_in_fraction: float = 0.0
) -> EstimatorResult:
    """Weighted mean of f over the retained suffix of the stream.

    ``f`` maps the retained states array (leading sample axis) to a value
    vector; for streams that carry only the summary statistic, it receives
    the summary array instead.
    """
    sl = _retained(stream, burn_in_fraction)
    if stream.states is not None:
        vals = np.asarray(f(stream.states[sl]), dtype=np.float64)
    elif stream.summary is not None:
        vals = np.asarray(f(stream.summary[sl]), dtype=np.float64)
    else:
        raise ValueError("stream carries neither states nor summary")
    w = _shifted_weights(stream.log_weights[sl])
    total = w.sum()
    value = float((vals * w).sum() / total)
    ess = float(total**2 / (w @ w))
    return EstimatorResult(value=value, effective_samples=ess, n_samples=int(w.shape[0]))


def estimate_pushforward_prob(
    stream: WeightedSampleStream, code: int, burn_in_fraction: float = 0.0
) -> EstimatorResult:
    """Importance-weighted probability that the summary statistic equals code."""
    if stream.summary is None:
        raise ValueError("stream carries no summary statistic")
    sl = _retained(stream, burn_in_fraction)
    vals = (stream.summary[sl] == code).astype(np.float64)
    w = _shifted_weights(stream.log_weights[sl])
    total = w.sum()
    return EstimatorResult(
        value=float((vals * w).sum() / total),
        effective_samples=float(total**2 / (w @ w)),
        n_samples=int(w.shape[0]),
    )


def tv_pushforward(
    stream: WeightedSampleStream, target, burn_in_fraction: float = 0.0
) -> float:
    """Total-variation distance between the exact push-forward of the
    target's summary statistic and its importance-weighted empirical law."""
    codes_exact, probs_exact = target.pushforward_exact()
    sl = _retained(stream, burn_in_fraction)
    codes = _stream_codes(stream, target, sl)
    w = _shifted_weights(stream.log_weights[sl])
    return _tv_from_buckets(codes, w, codes_exact, probs_exact)


def _stream_codes(stream, target, sl) -> np.ndarray:
    if stream.summary is not None:
        return stream.summary[sl]
    return target.summary_codes(stream.states[sl])


def _tv_from_buckets(codes, w, codes_exact, probs_exact) -> float:
    total = w.sum()
    hi = int(max(codes_exact.max(), codes.max())) + 1
    emp = np.zeros(hi)
    np.add.at(emp, codes, w / total)
    exact = np.zeros(hi)
    exact[codes_exact] = probs_exact
    return float(np.abs(exact - emp).sum())


def calls_to_threshold(
    target,
    config,
    threshold: float,
    budget: int,
    eval_stride: int = 100,
    rng=None,
    burn_in_fraction: float = 0.0,
) -> ThresholdResult:
    """First posterior-call count at which the TV metric drops to threshold.

    Runs the configured sampler against the call budget and evaluates the
    push-forward TV every ``eval_stride`` retained samples, incrementally
    (running-max rescaling keeps the bucket sums finite).  Censored at the
    budget when the threshold is never met.
    """
    if budget < 1 or eval_stride < 1:
        raise ValueError("budget and eval_stride must be positive")
    stream = run_sampler(target, config, rng=rng, max_calls=budget)
    codes_exact, probs_exact = target.pushforward_exact()
    sl = _retained(stream, burn_in_fraction)
    codes = _stream_codes(stream, target, sl)
    log_w = stream.log_weights[sl]
    calls = stream.calls[sl]
    n = codes.shape[0]

    hi = int(max(codes_exact.max(), codes.max())) + 1
    exact = np.zeros(hi)
    exact[codes_exact] = probs_exact
    buckets = np.zeros(hi)
    cur_max = -np.inf
    pos = 0
    while pos < n:
        end = min(pos + eval_stride, n)
        chunk_w = log_w[pos:end]
        chunk_max = np.max(chunk_w)
        if chunk_max > cur_max:
            if cur_max > -np.inf:
                buckets *= np.exp(cur_max - chunk_max)
            cur_max = chunk_max
        if cur_max > -np.inf:
            np.add.at(buckets, codes[pos:end], np.exp(chunk_w - cur_max))
        total = buckets.sum()
        if total > 0:
            tv = float(np.abs(exact - buckets / total).sum())
            if tv <= threshold:
                return ThresholdResult(
                    calls_to_threshold=int(calls[end - 1]),
                    censored=False,
                    threshold=threshold,
                    budget=budget,
                    total_calls=stream.total_calls,
                )
        pos = end
    return ThresholdResult(
        calls_to_threshold=budget,
        censored=True,
        threshold=threshold,
        budget=budget,
        total_calls=stream.total_calls,
    )
