"""Pure-Python kernels: the fallback for the compiled module.

These mirror ``_compiled.pyx`` operation for operation -- same uniform-draw
order, same arithmetic -- so a run is bit-identical across backends.  Scalar
loops only; speed comes from the compiled twin.
"""
from __future__ import annotations

from math import exp, log, log1p

import numpy as np

H_MIN_ONE, H_SQRT, H_BARKER, H_MAX_ONE, H_HC = 0, 1, 2, 3, 4

TOY_F_NONE = -1


def _lh(kind: int, c: float, t: float) -> float:
    if kind == H_MIN_ONE:
        return t if t < 0.0 else 0.0
    if kind == H_SQRT:
        return 0.5 * t
    if kind == H_BARKER:
        m = t if t < 0.0 else 0.0
        return m - log1p(exp(-abs(t)))
    if kind == H_MAX_ONE:
        return t if t > 0.0 else 0.0
    # two-sided clamp
    if t >= c:
        return 0.0
    if t >= 0.0:
        return t - c
    if t > -c:
        return -c
    return t


def _lae(a: float, b: float) -> float:
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a >= b:
        return a + log1p(exp(b - a))
    return b + log1p(exp(a - b))


class _ToyState:
    """Binary state with O(1) flip deltas for the four toy families."""

    __slots__ = ("example", "p", "theta", "m1", "m2", "x", "d1", "d2", "lp", "prev_f")

    def __init__(self, example, theta, m1, m2, x0):
        self.example = example
        self.theta = theta
        self.p = len(x0)
        self.m1 = np.asarray(m1, dtype=np.uint8)
        self.m2 = np.asarray(m2, dtype=np.uint8)
        self.x = np.array(x0, dtype=np.uint8, copy=True)
        self.d2 = 0
        self.prev_f = TOY_F_NONE
        if example == 1:
            self.d1 = int(np.count_nonzero(self.x != self.m1))
            self.lp = -theta * self.d1
        elif example == 2:
            self.d1 = int(np.count_nonzero(self.x))  # d1 holds |x|_1
            self.lp = self._lp_toy2()
        else:
            self.d1 = int(np.count_nonzero(self.x != self.m1))
            self.d2 = int(np.count_nonzero(self.x != self.m2))
            self.lp = _lae(-theta * self.d1, -theta * self.d2)

    def _lp_toy2(self) -> float:
        s = self.d1
        ell = s - 1 if self.x[0] == 1 else 2 * self.p - s
        return -self.theta * ell

    def flip_delta(self, i: int) -> float:
        """log pi(flip i) - log pi(x)."""
        th, x = self.theta, self.x
        if self.example == 1:
            return -th if x[i] == self.m1[i] else th
        if self.example == 2:
            s = self.d1
            if x[0] == 1:
                if i == 0:
                    return -th * (2 * self.p - 2 * s + 2)
                return th if x[i] == 1 else -th
            if i == 0:
                return 2.0 * th * (self.p - s)
            return -th if x[i] == 1 else th
        d1n = self.d1 + (1 if x[i] == self.m1[i] else -1)
        d2n = self.d2 + (1 if x[i] == self.m2[i] else -1)
        return _lae(-th * d1n, -th * d2n) - self.lp

    def apply_flip(self, i: int) -> None:
        x = self.x
        if self.example == 1:
            self.d1 += 1 if x[i] == self.m1[i] else -1
            x[i] ^= 1
            self.lp = -self.theta * self.d1
            return
        if self.example == 2:
            self.d1 += -1 if x[i] == 1 else 1
            x[i] ^= 1
            self.lp = self._lp_toy2()
            return
        self.d1 += 1 if x[i] == self.m1[i] else -1
        self.d2 += 1 if x[i] == self.m2[i] else -1
        x[i] ^= 1
        self.lp = _lae(-self.theta * self.d1, -self.theta * self.d2)

    def f_code(self) -> int:
        if self.example == 1:
            return self.d1
        if self.example == 2:
            return self.d1 - 1 if self.x[0] == 1 else self.p
        return self.d1 * (self.p + 1) + self.d2


def run_toy_chain(
    example: int,
    theta: float,
    m1: np.ndarray,
    m2: np.ndarray,
    x0: np.ndarray,
    h_kind: int,
    h_c: float,
    mixed: bool,
    rho_const: float,
    rho_A: float,
    use_A: bool,
    T: int,
    max_calls: int,
    rng,
):
    """Simulate the informed (or mixed informed/acceptance-rejection) chain.

    Returns (F_codes, log_weights, calls, x_final).  T < 0 means run to the
    call budget; max_calls < 0 means unbounded.  ``mixed`` selects the
    acceptance-rejection scheme with exact-update frequency rho (constant, or
    A/|N| when use_A).
    """
    st = _ToyState(example, theta, m1, m2, x0)
    p = st.p
    rho = (rho_A / p if use_A else rho_const) if mixed else 1.0
    if rho > 1.0:
        rho = 1.0
    f_out: list[int] = []
    w_out: list[float] = []
    c_out: list[int] = []
    calls = 0
    lw = np.empty(p)
    n_emitted = 0
    while T < 0 or n_emitted <= T:
        if not mixed:
            if max_calls >= 0 and calls + p > max_calls:
                break
            logz = _sweep_and_move(st, h_kind, h_c, lw, rng)
            calls += p
            f_out.append(st.prev_f)
            w_out.append(log(p) - logz)
            c_out.append(calls)
            n_emitted += 1
            continue
        # mixed scheme: one weight estimate + transition
        n_mh = 0
        truncated = False
        exited_informed = False
        logz = 0.0
        while True:
            u = rng.random()
            if u < rho:
                if max_calls >= 0 and calls + p > max_calls:
                    truncated = True
                    break
                logz = _sweep_and_move(st, h_kind, h_c, lw, rng)
                calls += p
                exited_informed = True
                break
            if max_calls >= 0 and calls + 1 > max_calls:
                truncated = True
                break
            n_mh += 1
            j = int(rng.random() * p)
            t = st.flip_delta(j)
            calls += 1
            if rng.random() < exp(_lh(h_kind, h_c, t)):
                f_prev = st.f_code()
                st.apply_flip(j)
                st.prev_f = f_prev
                break
        if truncated:
            if n_mh > 0:
                f_out.append(st.f_code())
                w_out.append(log(n_mh))
                c_out.append(calls)
            break
        if exited_informed:
            lw_val = log(p) - logz
            w = lw_val if n_mh == 0 else _lae(log(n_mh), lw_val)
        else:
            w = log(n_mh)
        f_out.append(st.prev_f)
        w_out.append(w)
        c_out.append(calls)
        n_emitted += 1
    return (
        np.asarray(f_out, dtype=np.int64),
        np.asarray(w_out, dtype=np.float64),
        np.asarray(c_out, dtype=np.int64),
        st.x.copy(),
    )


def _sweep_and_move(st: _ToyState, h_kind: int, h_c: float, lw: np.ndarray, rng) -> float:
    """Full-neighborhood sweep: fill lw, draw a flip, apply it.

    Returns log sum_i exp(lw_i); the emitted weight is log p - that value.
    Stores the pre-move F code in st.prev_f.
    """
    p = st.p
    mx = -np.inf
    for i in range(p):
        v = _lh(h_kind, h_c, st.flip_delta(i))
        lw[i] = v
        if v > mx:
            mx = v
    total = 0.0
    for i in range(p):
        total += exp(lw[i] - mx)
    u = rng.random() * total
    acc = 0.0
    pick = p - 1
    for i in range(p):
        acc += exp(lw[i] - mx)
        if u < acc:
            pick = i
            break
    f_prev = st.f_code()
    st.apply_flip(pick)
    st.prev_f = f_prev
    return mx + log(total)


def simulate_it_estimate(
    cum_P: np.ndarray,
    Z: np.ndarray,
    rho: np.ndarray,
    f: np.ndarray,
    T: int,
    x0: int,
    rng,
):
    """Bivariate (state, weight) chain on an enumerated model.

    Per step: draw the weight at the current state by the mixed scheme
    (an exact 1/Z contribution with probability rho, else unit increments
    until an acceptance test at rate Z succeeds), then move by the
    transition row.  Returns (sum_fw, sum_w) over T steps.
    """
    x = int(x0)
    n = cum_P.shape[0]
    sum_fw = 0.0
    sum_w = 0.0
    for _ in range(T):
        zx = Z[x]
        rx = rho[x]
        w = 0.0
        while True:
            if rng.random() < rx:
                w += 1.0 / zx
                break
            w += 1.0
            if rng.random() < zx:
                break
        sum_fw += f[x] * w
        sum_w += w
        u = rng.random()
        row = cum_P[x]
        nxt = n - 1
        for i in range(n):
            if u < row[i]:
                nxt = i
                break
        x = nxt
    return sum_fw, sum_w
