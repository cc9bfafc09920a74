# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the sequential chain loops.

Operation-for-operation twin of ``_reference.py``: the same uniform-draw
order and the same floating-point expressions, so trajectories match the
pure-Python backend bit for bit.  Uniforms come straight from a NumPy
BitGenerator's next_double.
"""
from libc.math cimport exp, fabs, log, log1p

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t

cnp.import_array()

cdef const char *CAPSULE_NAME = "BitGenerator"

cdef double NEG_INF = -np.inf


cdef inline double _next(bitgen_t *gen) noexcept:
    return gen.next_double(gen.state)


cdef inline double _lh(int kind, double c, double t) noexcept:
    if kind == 0:  # min-one
        return t if t < 0.0 else 0.0
    if kind == 1:  # sqrt
        return 0.5 * t
    if kind == 2:  # barker
        return (t if t < 0.0 else 0.0) - log1p(exp(-fabs(t)))
    if kind == 3:  # max-one
        return t if t > 0.0 else 0.0
    # two-sided clamp
    if t >= c:
        return 0.0
    if t >= 0.0:
        return t - c
    if t > -c:
        return -c
    return t


cdef inline double _lae(double a, double b) noexcept:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a >= b:
        return a + log1p(exp(b - a))
    return b + log1p(exp(a - b))


cdef struct ToyState:
    int example
    int p
    double theta
    int d1
    int d2
    double lp
    long prev_f


cdef inline double _toy2_lp(ToyState *st, unsigned char x0bit) noexcept:
    cdef long ell
    if x0bit == 1:
        ell = st.d1 - 1
    else:
        ell = 2 * st.p - st.d1
    return -st.theta * ell


cdef inline double _flip_delta(
    ToyState *st, unsigned char[::1] x, unsigned char[::1] m1,
    unsigned char[::1] m2, int i
) noexcept:
    cdef double th = st.theta
    cdef long s
    cdef int d1n, d2n
    if st.example == 1:
        return -th if x[i] == m1[i] else th
    if st.example == 2:
        s = st.d1
        if x[0] == 1:
            if i == 0:
                return -th * (2 * st.p - 2 * s + 2)
            return th if x[i] == 1 else -th
        if i == 0:
            return 2.0 * th * (st.p - s)
        return -th if x[i] == 1 else th
    d1n = st.d1 + (1 if x[i] == m1[i] else -1)
    d2n = st.d2 + (1 if x[i] == m2[i] else -1)
    return _lae(-th * d1n, -th * d2n) - st.lp


cdef inline void _apply_flip(
    ToyState *st, unsigned char[::1] x, unsigned char[::1] m1,
    unsigned char[::1] m2, int i
) noexcept:
    if st.example == 1:
        st.d1 += 1 if x[i] == m1[i] else -1
        x[i] ^= 1
        st.lp = -st.theta * st.d1
        return
    if st.example == 2:
        st.d1 += -1 if x[i] == 1 else 1
        x[i] ^= 1
        st.lp = _toy2_lp(st, x[0])
        return
    st.d1 += 1 if x[i] == m1[i] else -1
    st.d2 += 1 if x[i] == m2[i] else -1
    x[i] ^= 1
    st.lp = _lae(-st.theta * st.d1, -st.theta * st.d2)


cdef inline long _f_code(ToyState *st, unsigned char[::1] x) noexcept:
    if st.example == 1:
        return st.d1
    if st.example == 2:
        return st.d1 - 1 if x[0] == 1 else st.p
    return st.d1 * (st.p + 1) + st.d2


cdef double _sweep_and_move(
    ToyState *st, unsigned char[::1] x, unsigned char[::1] m1,
    unsigned char[::1] m2, int h_kind, double h_c, double[::1] lw,
    bitgen_t *gen
) noexcept:
    cdef int p = st.p
    cdef int i, pick
    cdef double v, mx, total, u, acc
    cdef long f_prev
    mx = NEG_INF
    for i in range(p):
        v = _lh(h_kind, h_c, _flip_delta(st, x, m1, m2, i))
        lw[i] = v
        if v > mx:
            mx = v
    total = 0.0
    for i in range(p):
        total += exp(lw[i] - mx)
    u = _next(gen) * total
    acc = 0.0
    pick = p - 1
    for i in range(p):
        acc += exp(lw[i] - mx)
        if u < acc:
            pick = i
            break
    f_prev = _f_code(st, x)
    _apply_flip(st, x, m1, m2, pick)
    st.prev_f = f_prev
    return mx + log(total)


def run_toy_chain(
    int example,
    double theta,
    cnp.ndarray m1_arr,
    cnp.ndarray m2_arr,
    cnp.ndarray x0_arr,
    int h_kind,
    double h_c,
    bint mixed,
    double rho_const,
    double rho_A,
    bint use_A,
    long T,
    long max_calls,
    bitgen,
):
    cdef unsigned char[::1] m1 = np.ascontiguousarray(m1_arr, dtype=np.uint8)
    cdef unsigned char[::1] m2 = np.ascontiguousarray(m2_arr, dtype=np.uint8)
    x_np = np.array(x0_arr, dtype=np.uint8, copy=True)
    cdef unsigned char[::1] x = x_np
    cdef int p = x_np.shape[0]

    capsule = bitgen.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("invalid BitGenerator capsule")
    cdef bitgen_t *gen = <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)

    cdef ToyState st
    st.example = example
    st.p = p
    st.theta = theta
    st.prev_f = -1
    cdef int i
    cdef long cnt
    if example == 1:
        cnt = 0
        for i in range(p):
            if x[i] != m1[i]:
                cnt += 1
        st.d1 = cnt
        st.d2 = 0
        st.lp = -theta * st.d1
    elif example == 2:
        cnt = 0
        for i in range(p):
            if x[i] == 1:
                cnt += 1
        st.d1 = cnt
        st.d2 = 0
        st.lp = _toy2_lp(&st, x[0])
    else:
        cnt = 0
        for i in range(p):
            if x[i] != m1[i]:
                cnt += 1
        st.d1 = cnt
        cnt = 0
        for i in range(p):
            if x[i] != m2[i]:
                cnt += 1
        st.d2 = cnt
        st.lp = _lae(-theta * st.d1, -theta * st.d2)

    cdef double rho
    if mixed:
        rho = rho_A / p if use_A else rho_const
        if rho > 1.0:
            rho = 1.0
    else:
        rho = 1.0

    # capacity: every emission costs at least one call (mixed) or p (sweep)
    cdef long cap
    if T >= 0:
        cap = T + 1
    elif max_calls >= 0:
        cap = (max_calls // (1 if mixed else p)) + 2
    else:
        raise ValueError("either T or max_calls must bound the run")

    f_np = np.empty(cap, dtype=np.int64)
    w_np = np.empty(cap, dtype=np.float64)
    c_np = np.empty(cap, dtype=np.int64)
    lw_np = np.empty(p, dtype=np.float64)
    cdef long[::1] f_out = f_np
    cdef double[::1] w_out = w_np
    cdef long[::1] c_out = c_np
    cdef double[::1] lw = lw_np

    cdef long calls = 0
    cdef long n_emitted = 0
    cdef long n_mh
    cdef int j
    cdef double u, t, logz, lw_val, w
    cdef bint truncated, exited_informed
    cdef long f_prev

    while T < 0 or n_emitted <= T:
        if not mixed:
            if max_calls >= 0 and calls + p > max_calls:
                break
            logz = _sweep_and_move(&st, x, m1, m2, h_kind, h_c, lw, gen)
            calls += p
            f_out[n_emitted] = st.prev_f
            w_out[n_emitted] = log(<double> p) - logz
            c_out[n_emitted] = calls
            n_emitted += 1
            continue
        n_mh = 0
        truncated = False
        exited_informed = False
        logz = 0.0
        while True:
            u = _next(gen)
            if u < rho:
                if max_calls >= 0 and calls + p > max_calls:
                    truncated = True
                    break
                logz = _sweep_and_move(&st, x, m1, m2, h_kind, h_c, lw, gen)
                calls += p
                exited_informed = True
                break
            if max_calls >= 0 and calls + 1 > max_calls:
                truncated = True
                break
            n_mh += 1
            j = <int> (_next(gen) * p)
            t = _flip_delta(&st, x, m1, m2, j)
            calls += 1
            if _next(gen) < exp(_lh(h_kind, h_c, t)):
                f_prev = _f_code(&st, x)
                _apply_flip(&st, x, m1, m2, j)
                st.prev_f = f_prev
                break
        if truncated:
            if n_mh > 0:
                f_out[n_emitted] = _f_code(&st, x)
                w_out[n_emitted] = log(<double> n_mh)
                c_out[n_emitted] = calls
                n_emitted += 1
            break
        if exited_informed:
            lw_val = log(<double> p) - logz
            w = lw_val if n_mh == 0 else _lae(log(<double> n_mh), lw_val)
        else:
            w = log(<double> n_mh)
        f_out[n_emitted] = st.prev_f
        w_out[n_emitted] = w
        c_out[n_emitted] = calls
        n_emitted += 1

    return (
        f_np[:n_emitted].copy(),
        w_np[:n_emitted].copy(),
        c_np[:n_emitted].copy(),
        x_np,
    )


def simulate_it_estimate(
    cnp.ndarray cum_P_arr,
    cnp.ndarray Z_arr,
    cnp.ndarray rho_arr,
    cnp.ndarray f_arr,
    long T,
    long x0,
    bitgen,
):
    cdef double[:, ::1] cum_P = np.ascontiguousarray(cum_P_arr, dtype=np.float64)
    cdef double[::1] Z = np.ascontiguousarray(Z_arr, dtype=np.float64)
    cdef double[::1] rho = np.ascontiguousarray(rho_arr, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(f_arr, dtype=np.float64)

    capsule = bitgen.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("invalid BitGenerator capsule")
    cdef bitgen_t *gen = <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)

    cdef long x = x0
    cdef int n = cum_P.shape[0]
    cdef double sum_fw = 0.0
    cdef double sum_w = 0.0
    cdef double zx, rx, w, u
    cdef long k
    cdef int i, nxt
    for k in range(T):
        zx = Z[x]
        rx = rho[x]
        w = 0.0
        while True:
            if _next(gen) < rx:
                w += 1.0 / zx
                break
            w += 1.0
            if _next(gen) < zx:
                break
        sum_fw += f[x] * w
        sum_w += w
        u = _next(gen)
        nxt = n - 1
        for i in range(n):
            if u < cum_P[x, i]:
                nxt = i
                break
        x = nxt
    return sum_fw, sum_w
