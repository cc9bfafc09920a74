"""Exact small-state-space engine.

For targets small enough to enumerate, builds the informed transition matrix
P_h(x, y) = eta_h(y|x) / Z_h(x), its stationary law pi_h prop pi * Z_h, the
associated continuous-time rate matrix, spectral gaps, the expected
posterior-call cost kappa and the complexity metric kappa / Gap(rate),
plus a Poisson-equation oracle for the asymptotic variance of the
self-normalized estimator under arbitrary weight-generation kernels.

Everything here is certified numerically at build time: row stochasticity,
reversibility and stationarity are asserted to tight tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .balancing import BalancingFunction
from .errors import CapacityError, ContractViolationError
from .samplers.config import LadderConfig
from .samplers.tempering import log_q_temp, temp_move_options

_TOL_STOCHASTIC = 1e-12
_TOL_REVERSIBLE = 1e-10


@dataclass
class ExactModel:
    """Fully enumerated chain for one (target, balancing function) pair."""

    states: list
    log_pi: np.ndarray
    neighbors: list
    h: BalancingFunction
    log_Z: np.ndarray
    P: np.ndarray
    pi: np.ndarray
    pi_h: np.ndarray
    P_ct: np.ndarray
    degrees: np.ndarray = field(default=None)

    @property
    def n(self) -> int:
        return self.log_pi.shape[0]

    @property
    def Z(self) -> np.ndarray:
        return np.exp(self.log_Z)

    @property
    def pi_Z(self) -> float:
        """pi(Z_h), the mean normalizer under the target."""
        return float(self.pi @ self.Z)


def _normalized(log_w: np.ndarray) -> np.ndarray:
    w = np.exp(log_w - np.max(log_w))
    return w / w.sum()


def build_exact_model(target, h: BalancingFunction, max_states: int = 4096, a: float = 1.0) -> ExactModel:
    """Enumerate the state space and assemble all exact quantities.

    ``a`` tempers the density (the chain against pi^a); the stationary and
    cost quantities then refer to the tempered chain.
    """
    states = target.enumerate_states(max_states=max_states)
    n = len(states)
    if n > max_states:
        raise CapacityError(f"{n} states exceed the capacity {max_states}")
    index = {target.state_key(s): i for i, s in enumerate(states)}
    log_pi = np.array([a * target.log_pi(s) for s in states])
    neighbors = []
    for s in states:
        k = target.neighbor_count(s)
        neighbors.append(
            np.array([index[target.state_key(target.neighbor(s, i))] for i in range(k)])
        )
    degrees = np.array([len(v) for v in neighbors], dtype=np.float64)

    P = np.zeros((n, n))
    log_Z = np.empty(n)
    for i, nbr in enumerate(neighbors):
        t = log_pi[nbr] - log_pi[i] + np.log(degrees[i]) - np.log(degrees[nbr])
        lw = h.log_apply(t) - np.log(degrees[i])
        m = np.max(lw)
        wsum = np.exp(lw - m).sum()
        log_Z[i] = m + np.log(wsum)
        P[i, nbr] += np.exp(lw - m) / wsum

    pi = _normalized(log_pi)
    log_pi_h = log_pi + log_Z
    pi_h = _normalized(log_pi_h)

    row_err = np.max(np.abs(P.sum(axis=1) - 1.0))
    if row_err > _TOL_STOCHASTIC:
        raise ContractViolationError(f"row stochasticity residual {row_err:g}")
    flow = pi_h[:, None] * P
    rev_err = np.max(np.abs(flow - flow.T))
    if rev_err > _TOL_REVERSIBLE:
        raise ContractViolationError(f"reversibility residual {rev_err:g}")
    stat_err = np.max(np.abs(pi_h @ P - pi_h))
    if stat_err > _TOL_REVERSIBLE:
        raise ContractViolationError(f"stationarity residual {stat_err:g}")

    pi_Z = float(pi @ np.exp(log_Z))
    P_ct = P * (np.exp(log_Z) / pi_Z)[:, None]
    np.fill_diagonal(P_ct, 0.0)
    np.fill_diagonal(P_ct, -P_ct.sum(axis=1))

    return ExactModel(
        states=states,
        log_pi=log_pi,
        neighbors=neighbors,
        h=h,
        log_Z=log_Z,
        P=P,
        pi=pi,
        pi_h=pi_h,
        P_ct=P_ct,
        degrees=degrees,
    )


def _sym_eigvals(M: np.ndarray, stationary: np.ndarray) -> np.ndarray:
    """Eigenvalues of a reversible matrix via the similarity symmetrization."""
    d = np.sqrt(stationary)
    S = M * d[:, None] / d[None, :]
    sym_err = np.max(np.abs(S - S.T))
    scale = max(1.0, np.max(np.abs(S)))
    if sym_err > 1e-10 * scale:
        raise ContractViolationError(
            f"matrix is not reversible w.r.t. the supplied law (residual {sym_err:g})"
        )
    return np.linalg.eigvalsh((S + S.T) / 2.0)


def spectral_gap(M: np.ndarray, stationary: np.ndarray, kind: str) -> float:
    """Spectral gap of a reversible transition matrix or rate matrix.

    ``discrete``: 1 minus the largest eigenvalue on the centered subspace
    (which may be negative, so the gap can exceed 1).  ``rate``: minus the
    second-largest eigenvalue of the rate matrix.
    """
    if kind not in ("discrete", "rate"):
        raise ValueError("kind must be 'discrete' or 'rate'")
    ev = _sym_eigvals(np.asarray(M, dtype=np.float64), stationary)
    if kind == "discrete":
        return float(1.0 - ev[-2])
    return float(-ev[-2])


def gap_discrete(model: ExactModel) -> float:
    return spectral_gap(model.P, model.pi_h, "discrete")


def gap_ct(model: ExactModel) -> float:
    """Gap of the rate matrix, which is reversible w.r.t. pi itself."""
    return spectral_gap(model.P_ct, model.pi, "rate")


def expected_step_cost(model: ExactModel, rho) -> np.ndarray:
    """Per-state expected posterior calls of one mixed-scheme step.

    E[K(x)] = (rho(x)(|N_x| - 1) + 1) / (rho(x)(1 - Z(x)) + Z(x)).
    """
    rho = np.broadcast_to(np.asarray(rho, dtype=np.float64), (model.n,))
    if np.any((rho < 0) | (rho > 1)):
        raise ValueError("rho must lie in [0, 1] per state")
    Z = model.Z
    return (rho * (model.degrees - 1.0) + 1.0) / (rho * (1.0 - Z) + Z)


def kappa(model: ExactModel, rho) -> float:
    """Average step cost under the chain's stationary law pi_h."""
    return float(model.pi_h @ expected_step_cost(model, rho))


def complexity_estimate(model: ExactModel, rho) -> float:
    """kappa / Gap(rate matrix): effective cost per independent sample."""
    return kappa(model, rho) / gap_ct(model)


# ---------------------------------------------------------------------------
# Asymptotic-variance oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightKernelSpec:
    """Per-state law of the weight generator: mean and normalized variance.

    m_R(x) is the conditional mean weight at x; v_R(x) the conditional
    variance of the weight divided by (pi_h-average of m_R)^2.  Consistency
    requires m_R(x) * pi_h(x) / pi(x) constant across states.
    """

    m_R: np.ndarray
    v_R: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m_R", np.asarray(self.m_R, dtype=np.float64))
        object.__setattr__(self, "v_R", np.asarray(self.v_R, dtype=np.float64))
        if np.any(self.m_R <= 0) or np.any(self.v_R < 0):
            raise ValueError("m_R must be positive and v_R non-negative")


def weight_kernel_dirac(model: ExactModel) -> WeightKernelSpec:
    return WeightKernelSpec(m_R=1.0 / model.Z, v_R=np.zeros(model.n))


def weight_kernel_mixed(model: ExactModel, rho) -> WeightKernelSpec:
    """The mixed scheme's weight law: mean 1/Z and the closed-form variance

    Var(W(x)) = (1 - Z)(1 - rho) / (Z^2 + rho Z (1 - Z)),

    normalized by pi_h(m_R) = 1/pi(Z).
    """
    rho = np.broadcast_to(np.asarray(rho, dtype=np.float64), (model.n,))
    Z = model.Z
    var = (1.0 - Z) * (1.0 - rho) / (Z**2 + rho * Z * (1.0 - Z))
    return WeightKernelSpec(m_R=1.0 / Z, v_R=var * model.pi_Z**2)


def _check_weight_kernel(model: ExactModel, weights: WeightKernelSpec) -> None:
    ratio = weights.m_R * model.pi_h / model.pi
    spread = np.max(ratio) - np.min(ratio)
    if spread > 1e-10 * np.max(np.abs(ratio)):
        raise ContractViolationError(
            "weight kernel violates the unbiasedness structure: "
            f"m_R * pi_h / pi varies by {spread:g}"
        )


def solve_poisson(P: np.ndarray, stationary: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Solve (I - P) g_hat = g for centered g, with stationary(g_hat) = 0."""
    n = P.shape[0]
    A = np.eye(n) - P + np.outer(np.ones(n), stationary)
    return np.linalg.solve(A, g)


def asymptotic_variance_oracle(model: ExactModel, weights: WeightKernelSpec, f) -> float:
    """Asymptotic variance of sqrt(T) times the self-normalized estimator.

    Decomposes into the exact-weight (Dirac) term, obtained from the Poisson
    equation of the chain, plus the weight-noise term pi_h(f^2 v_R).
    """
    f = np.asarray(f, dtype=np.float64)
    if abs(float(model.pi @ f)) > 1e-10 * max(1.0, np.max(np.abs(f))):
        raise ContractViolationError("f must be centered under the target")
    _check_weight_kernel(model, weights)
    mean_m = float(model.pi_h @ weights.m_R)
    g = f * weights.m_R / mean_m
    g_hat = solve_poisson(model.P, model.pi_h, g)
    sigma2_dirac = 2.0 * float(model.pi_h @ (g * g_hat)) - float(model.pi_h @ g**2)
    return sigma2_dirac + float(model.pi_h @ (f**2 * weights.v_R))


def asymptotic_variance_bivariate(
    model: ExactModel, weight_values: list, weight_probs: list, f
) -> float:
    """Independent oracle: exact variance on the joint (state, weight) chain.

    ``weight_values[i]`` / ``weight_probs[i]`` give the finite support of the
    weight draw at state i.  Builds the joint chain (x, w) -> (x', w') with
    x' ~ P(x, .) and w' drawn at x', and solves its Poisson equation for the
    additive functional f(x) w / mean.  Used to cross-check the decomposition
    oracle, not for production sizes.
    """
    f = np.asarray(f, dtype=np.float64)
    n = model.n
    pairs = [(i, k) for i in range(n) for k in range(len(weight_values[i]))]
    pos = {pk: j for j, pk in enumerate(pairs)}
    N = len(pairs)
    mean_at = np.array([np.dot(weight_values[i], weight_probs[i]) for i in range(n)])
    mean_m = float(model.pi_h @ mean_at)

    PJ = np.zeros((N, N))
    mu = np.zeros(N)
    phi = np.zeros(N)
    for (i, k), j in pos.items():
        mu[j] = model.pi_h[i] * weight_probs[i][k]
        phi[j] = f[i] * weight_values[i][k] / mean_m
        for i2 in range(n):
            if model.P[i, i2] == 0.0:
                continue
            for k2 in range(len(weight_values[i2])):
                PJ[j, pos[(i2, k2)]] = model.P[i, i2] * weight_probs[i2][k2]
    mu = mu / mu.sum()
    phi = phi - float(mu @ phi)
    phi_hat = solve_poisson(PJ, mu, phi)
    return 2.0 * float(mu @ (phi * phi_hat)) - float(mu @ phi**2)


def gamma_functional(model: ExactModel, f) -> float:
    """pi(Z) * pi(f^2 / Z), the variance premium of geometric weights."""
    f = np.asarray(f, dtype=np.float64)
    return model.pi_Z * float(model.pi @ (f**2 / model.Z))


def verify_variance_ordering(model: ExactModel, f, rho_grid) -> dict:
    """Certify the variance and cost theory on one enumerated model.

    Returns every computed quantity plus boolean verdicts for: monotone
    ordering of the asymptotic variance in rho with the gamma-capped spread;
    the Poisson-vs-weight-noise upper bound; the rate-matrix bound; and the
    cost bound for the degree-scaled exact-update frequency.
    """
    f = np.asarray(f, dtype=np.float64)
    f = f - float(model.pi @ f)
    sig = {float(r): asymptotic_variance_oracle(model, weight_kernel_mixed(model, r), f)
           for r in rho_grid}
    s1 = asymptotic_variance_oracle(model, weight_kernel_mixed(model, 1.0), f)
    s0 = asymptotic_variance_oracle(model, weight_kernel_mixed(model, 0.0), f)
    gam = gamma_functional(model, f)
    gd = gap_discrete(model)
    gct = gap_ct(model)
    pi_f2 = float(model.pi @ f**2)
    tol = 1e-10 * max(1.0, abs(s0))
    ordering = all(
        s1 - tol <= s <= s0 + tol for s in sig.values()
    ) and s0 <= s1 + gam + tol
    prop1 = all(
        sig[r] <= 2.0 * (gam + float(model.pi_h @ (f**2 * weight_kernel_mixed(model, r).v_R))) / gd + tol
        for r in sig
    )
    rate_bound = all(s <= 2.0 * pi_f2 / gct + tol for s in sig.values())
    kappa_1 = kappa(model, 1.0)
    kappa_0 = kappa(model, 0.0)
    cost_bound = True
    for A in (0.5, 1.0, 2.0):
        if A > float(np.min(model.degrees)):
            continue
        k_a = kappa(model, np.minimum(1.0, A / model.degrees))
        cost_bound &= k_a <= min((A + 1.0) / A * kappa_1, (A + 1.0) * kappa_0) + 1e-12
    return {
        "sigma2": sig,
        "sigma2_exact": s1,
        "sigma2_sojourn": s0,
        "gamma": gam,
        "gap_discrete": gd,
        "gap_rate": gct,
        "pi_f2": pi_f2,
        "kappa_exact": kappa_1,
        "kappa_sojourn": kappa_0,
        "ordering_ok": bool(ordering),
        "noise_bound_ok": bool(prop1),
        "rate_bound_ok": bool(rate_bound),
        "cost_bound_ok": bool(cost_bound),
    }


# ---------------------------------------------------------------------------
# Joint-space exactness checks for the tempered and multiple-try chains
# ---------------------------------------------------------------------------


def build_vt_joint_matrix(target, ladder: LadderConfig, log_psi=None, max_states: int = 4096):
    """Exact transition matrix of the varying-temperature chain on (x, j).

    Returns (P_joint, log_stationary) where the stationary law is
    pi_t(x, j) prop pi(x)^{a_j} psi(j) Z_t(x, j); psi is frozen to the
    supplied values (default all ones).
    """
    states = target.enumerate_states(max_states=max_states)
    n = len(states)
    J = ladder.J
    a = ladder.inverse_temperatures()
    hs = ladder.rung_balancing()
    h_star = ladder.h_star
    log_psi = np.zeros(J + 1) if log_psi is None else np.asarray(log_psi, dtype=np.float64)
    index = {target.state_key(s): i for i, s in enumerate(states)}
    lp = np.array([target.log_pi(s) for s in states])
    nbrs = [
        np.array([index[target.state_key(target.neighbor(s, i))]
                  for i in range(target.neighbor_count(s))])
        for s in states
    ]
    degs = np.array([len(v) for v in nbrs], dtype=np.float64)

    N = n * (J + 1)
    joint = lambda i, j: i * (J + 1) + j
    PJ = np.zeros((N, N))
    log_stat = np.empty(N)
    for i in range(n):
        for j in range(J + 1):
            t_flip = a[j] * (lp[nbrs[i]] - lp[i]) + np.log(degs[i]) - np.log(degs[nbrs[i]])
            lw_flip = hs[j].log_apply(t_flip) - np.log(degs[i])
            opts = temp_move_options(j, J)
            lw_temp = np.empty(len(opts))
            for idx, l in enumerate(opts):
                lqf = log_q_temp(l, j, J)
                lqb = log_q_temp(j, l, J)
                tt = (a[l] - a[j]) * lp[i] + log_psi[l] - log_psi[j] + lqb - lqf
                lw_temp[idx] = lqf + h_star.log_apply(float(tt))
            all_lw = np.concatenate([lw_flip, lw_temp])
            m = np.max(all_lw)
            w = np.exp(all_lw - m)
            zt = w.sum()
            row = joint(i, j)
            for pos, i2 in enumerate(nbrs[i]):
                PJ[row, joint(i2, j)] += w[pos] / zt
            for idx, l in enumerate(opts):
                PJ[row, joint(i, l)] += w[len(nbrs[i]) + idx] / zt
            log_stat[row] = a[j] * lp[i] + log_psi[j] + m + np.log(zt)
    return PJ, log_stat


def verify_vtiit_stationarity(target, ladder: LadderConfig, log_psi=None) -> float:
    """Max reversibility residual of the joint tempered chain (frozen psi)."""
    PJ, log_stat = build_vt_joint_matrix(target, ladder, log_psi)
    stat = _normalized(log_stat)
    flow = stat[:, None] * PJ
    return float(np.max(np.abs(flow - flow.T)))


def mtm_joint_reversibility_residual(log_pi, Q, h: BalancingFunction, m: int = 2) -> float:
    """Exact check of the multiple-try chain's stationary form on a tiny space.

    Enumerates the chain on (x, S) with S a size-m multiset of candidates,
    kernel: pick y in S with probability proportional to
    alpha_h(x, y) = h(pi(y)q(x|y) / (pi(x)q(y|x))), then S' = {x} plus m-1
    iid draws from q(.|y).  Verifies detailed balance w.r.t.

        mu(x, S) prop pi(x) Z~_h(x, S) C(S) prod_{y in S} q(y|x),

    C(S) the multinomial multiplicity of the multiset.  Returns the max
    residual of the flow matrix.
    """
    log_pi = np.asarray(log_pi, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    n = log_pi.shape[0]

    def alpha(x, y):
        r = log_pi[y] - log_pi[x] + np.log(Q[y, x]) - np.log(Q[x, y])
        return np.exp(h.log_apply(float(r)))

    multisets = list(combinations_with_replacement_range(n, m))
    joint_states = []
    for x in range(n):
        for S in multisets:
            if all(Q[x, y] > 0 for y in S):
                joint_states.append((x, tuple(S)))
    pos = {s: i for i, s in enumerate(joint_states)}
    N = len(joint_states)

    from math import factorial

    def mult_coeff(S):
        c = factorial(len(S))
        for v in set(S):
            c //= factorial(S.count(v))
        return c

    mu = np.zeros(N)
    PJ = np.zeros((N, N))
    for (x, S), row in pos.items():
        z = sum(alpha(x, y) for y in S)
        qprod = np.prod([Q[x, y] for y in S])
        mu[row] = np.exp(log_pi[x]) * z * mult_coeff(S) * qprod
        for y in set(S):
            p_pick = S.count(y) * alpha(x, y) / z
            # S' = multiset {x} + (m-1) iid draws from Q(y, .)
            for draws in combinations_with_replacement_range(n, m - 1):
                p_draws = mult_coeff(draws) * np.prod([Q[y, v] for v in draws])
                if p_draws == 0:
                    continue
                S2 = tuple(sorted((x,) + draws))
                PJ[row, pos[(y, S2)]] += p_pick * p_draws
    row_err = np.max(np.abs(PJ.sum(axis=1) - 1.0))
    if row_err > 1e-12:
        raise ContractViolationError(f"joint rows do not sum to one ({row_err:g})")
    mu = mu / mu.sum()
    flow = mu[:, None] * PJ
    return float(np.max(np.abs(flow - flow.T)))


def combinations_with_replacement_range(n: int, k: int):
    from itertools import combinations_with_replacement

    return combinations_with_replacement(range(n), k)


def table_grid(theta_values, c_grid, p: int = 5, rho_values=(0.0, 0.5, 1.0)):
    """Gap and complexity of the clamp family on the dependent-coordinates toy.

    Returns a list of rows (theta, c, gap_rate, comp per rho) spanning the
    grid; the per-theta optima reproduce the published six-entry table.
    """
    from .targets.toys import ToySpec, ToyTarget

    rows = []
    for theta in theta_values:
        target = ToyTarget(ToySpec(2, p, theta=theta))
        for c in c_grid:
            model = build_exact_model(target, BalancingFunction("hc", float(c)))
            g = gap_ct(model)
            comps = {rho: kappa(model, rho) / g for rho in rho_values}
            rows.append({"theta": theta, "c": float(c), "gap": g, "comp": comps})
    return rows
