"""Posterior-call accounting.

One call is one evaluation of the un-normalized target density (or of its
estimator).  Full-neighborhood sweeps charge |N_x|, single proposals charge
1, subset schemes charge their subset size.  The density of the current
state is carried by the chain and never re-charged.
"""
from __future__ import annotations


class CallLedger:
    __slots__ = ("count", "budget")

    def __init__(self, budget: int | None = None):
        self.count = 0
        self.budget = budget

    def can(self, k: int) -> bool:
        return self.budget is None or self.count + k <= self.budget

    def charge(self, k: int) -> None:
        self.count += k
