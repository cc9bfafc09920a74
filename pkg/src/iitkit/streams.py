"""Weighted sample streams emitted by every sampler."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class WeightedSampleStream:
    """Output of one chain: states, log-domain weights, posterior-call ledger.

    ``log_weights[k]`` is the natural-log un-normalized importance weight of
    sample k and ``calls[k]`` the cumulative posterior-call count after that
    sample was produced.  ``states`` is an array with leading sample axis, or
    None for fast paths that record only ``summary``.  ``summary`` holds the
    target's canonical integer statistic per sample when cheaply available.
    A weight of -inf is an explicit zero-mass flag (tempered samples off the
    cold rung, or degenerate pseudo-marginal estimates).
    """

    log_weights: np.ndarray
    calls: np.ndarray
    states: np.ndarray | list | None = None
    summary: np.ndarray | None = None
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        self.log_weights = np.asarray(self.log_weights, dtype=np.float64)
        self.calls = np.asarray(self.calls, dtype=np.int64)
        if self.log_weights.shape[0] != self.calls.shape[0]:
            raise ValueError("log_weights and calls lengths disagree")
        if self.states is not None and len(self.states) != len(self.log_weights):
            raise ValueError("states and log_weights lengths disagree")
        if self.summary is not None:
            self.summary = np.asarray(self.summary)
            if self.summary.shape[0] != self.log_weights.shape[0]:
                raise ValueError("summary and log_weights lengths disagree")
        if np.any(np.diff(self.calls) < 0):
            raise ValueError("posterior-call ledger must be non-decreasing")

    def __len__(self) -> int:
        return int(self.log_weights.shape[0])

    @property
    def total_calls(self) -> int:
        return int(self.calls[-1]) if len(self) else 0
