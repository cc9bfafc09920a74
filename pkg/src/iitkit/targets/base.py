"""Target-distribution interface shared by all discrete samplers."""
from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import CapacityError


class DiscreteTarget(ABC):
    """An un-normalized discrete target with a neighborhood structure.

    The reference proposal is uniform on the neighborhood N_x, which must
    exclude x itself and be symmetric (y in N_x iff x in N_y).  log_pi must
    be finite for every state.  Instances are immutable after construction
    and safe for concurrent read.
    """

    @abstractmethod
    def log_pi(self, x) -> float:
        """Un-normalized log target density."""

    @abstractmethod
    def neighbor_count(self, x) -> int:
        """|N_x|; strictly positive."""

    @abstractmethod
    def neighbor(self, x, i):
        """The i-th neighbor of x, 0 <= i < |N_x|.  Returns a fresh state."""

    def neighbor_log_pis(self, x) -> np.ndarray:
        """log_pi of every neighbor, in index order.

        The default loops over ``neighbor``; targets override this with a
        vectorized sweep when incremental evaluation is possible.
        """
        n = self.neighbor_count(x)
        return np.array([self.log_pi(self.neighbor(x, i)) for i in range(n)])

    def neighbor_degrees(self, x) -> np.ndarray | None:
        """|N_y| per neighbor y, or None when the degree is constant."""
        return None

    def min_neighbor_count(self) -> int:
        """Lower bound on |N_x| over the state space (for config validation)."""
        raise NotImplementedError

    def copy_state(self, x):
        return np.array(x, copy=True) if isinstance(x, np.ndarray) else x

    def state_key(self, x):
        """Hashable identity of a state."""
        return x.tobytes() if isinstance(x, np.ndarray) else x

    def default_x0(self):
        raise NotImplementedError("target has no default initial state")

    def enumerate_states(self, max_states: int = 4096) -> list:
        raise CapacityError("target does not support exhaustive enumeration")

    # Pseudo-marginal hooks; present only on targets with a noisy density.
    # log_pi_estimate(x, rng) -> float, where -inf flags a zero-mass estimate.
    def has_estimator(self) -> bool:
        return hasattr(self, "log_pi_estimate")


class BinaryVectorTarget(DiscreteTarget):
    """Targets on {0,1}^p with single-coordinate-flip neighborhoods."""

    def __init__(self, p: int):
        if p < 1:
            raise ValueError("p must be >= 1")
        self.p = int(p)

    def neighbor_count(self, x) -> int:
        return self.p

    def neighbor(self, x, i):
        y = np.array(x, dtype=np.uint8, copy=True)
        y[i] ^= 1
        return y

    def min_neighbor_count(self) -> int:
        return self.p

    def default_x0(self):
        return np.zeros(self.p, dtype=np.uint8)

    def enumerate_states(self, max_states: int = 4096) -> list:
        if 2**self.p > max_states:
            raise CapacityError(
                f"2^{self.p} states exceed the enumeration capacity {max_states}"
            )
        out = []
        for code in range(2**self.p):
            x = np.fromiter(
                ((code >> j) & 1 for j in range(self.p)), dtype=np.uint8, count=self.p
            )
            out.append(x)
        return out

    def summary_code(self, x) -> int:
        """Canonical integer statistic of a state (target specific)."""
        raise NotImplementedError

    def summary_codes(self, states: np.ndarray) -> np.ndarray:
        return np.array([self.summary_code(s) for s in states], dtype=np.int64)


class SmallGraphTarget(DiscreteTarget):
    """Explicit target on a handful of integer states; used by exact checks."""

    def __init__(self, log_pi_values, neighbor_lists):
        self._lp = np.asarray(log_pi_values, dtype=np.float64)
        self._nbrs = [np.asarray(v, dtype=np.int64) for v in neighbor_lists]
        if len(self._nbrs) != self._lp.shape[0]:
            raise ValueError("log_pi_values and neighbor_lists lengths disagree")
        for i, nb in enumerate(self._nbrs):
            if i in nb:
                raise ValueError("neighborhoods must not contain the state itself")
            for j in nb:
                if i not in self._nbrs[j]:
                    raise ValueError("neighborhood structure must be symmetric")

    def log_pi(self, x) -> float:
        return float(self._lp[int(x)])

    def neighbor_count(self, x) -> int:
        return len(self._nbrs[int(x)])

    def neighbor(self, x, i):
        return int(self._nbrs[int(x)][i])

    def neighbor_log_pis(self, x) -> np.ndarray:
        return self._lp[self._nbrs[int(x)]]

    def neighbor_degrees(self, x) -> np.ndarray | None:
        counts = np.array([len(self._nbrs[j]) for j in self._nbrs[int(x)]])
        if np.all(counts == len(self._nbrs[int(x)])):
            return None
        return counts

    def min_neighbor_count(self) -> int:
        return min(len(v) for v in self._nbrs)

    def default_x0(self):
        return 0

    def enumerate_states(self, max_states: int = 4096) -> list:
        return list(range(len(self._lp)))


def two_state_uniform() -> SmallGraphTarget:
    """The smallest useful target: two states of equal mass."""
    return SmallGraphTarget([0.0, 0.0], [[1], [0]])
