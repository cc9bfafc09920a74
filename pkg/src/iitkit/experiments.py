"""Batch experiment drivers.

Each experiment kind maps a validated config mapping to per-replicate result
rows plus a summary; the runner writes one CSV (fixed column order), one
JSON summary with medians/quartiles/censoring counts, and a provenance block
echoing the full config.  Reruns with the same config and master seed are
byte-identical; replicate workers only parallelize, never reorder.
"""
from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import _kernels, __version__
from .balancing import BalancingFunction, parse_balancing
from .errors import ConfigurationError
from .samplers import LadderConfig, SamplerConfig, chain_rng, run_sampler
from .diagnostics import (
    calls_to_threshold,
    estimate_pushforward_prob,
    self_normalized_estimate,
)
from .targets import (
    GaussianSpec,
    GaussianTarget,
    GeomABCSpec,
    GeomABCTarget,
    NoisyToyTarget,
    RandomWalkProposal,
    ToySpec,
    ToyTarget,
    generate_six_mode,
    six_mode_vectors,
    toy_modes,
    VarSelTarget,
)

RESULT_COLUMNS = [
    "experiment",
    "target",
    "algorithm",
    "label",
    "p",
    "theta",
    "param",
    "replicate",
    "metric",
    "value",
    "calls",
    "censored",
]

EXPERIMENT_KINDS = (
    "tv-threshold",
    "estimate",
    "table1",
    "variance-verify",
    "six-mode",
    "abc",
    "gaussian-mtit",
    "ct-traverse",
)

ANALYSIS_KINDS = ("table1", "variance-verify")

DEFAULT_THRESHOLD = {1: 0.1, 2: 0.2, 3: 0.5, 4: 0.5}


class ConfigFieldError(ConfigurationError):
    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field


def _need(cfg: dict, field: str, kind=None):
    if field not in cfg:
        raise ConfigFieldError(field, "missing required field")
    value = cfg[field]
    if kind is not None and not isinstance(value, kind):
        raise ConfigFieldError(field, f"expected {kind}, got {type(value).__name__}")
    return value


def _as_list(v):
    return v if isinstance(v, (list, tuple)) else [v]


# ---------------------------------------------------------------------------
# target / sampler construction from config mappings
# ---------------------------------------------------------------------------


def build_toy_target(tcfg: dict) -> ToyTarget:
    kind = _need(tcfg, "kind", str)
    if not kind.startswith("toy"):
        raise ConfigFieldError("target.kind", f"unknown target kind {kind!r}")
    example = int(kind[3:])
    spec = ToySpec(
        example,
        int(_need(tcfg, "p", int)),
        p1=int(tcfg.get("p1", 1)),
        theta=float(tcfg["theta"]),
    )
    sigma = tcfg.get("estimator_sigma")
    if sigma is not None:
        return NoisyToyTarget(spec, float(sigma))
    return ToyTarget(spec)


def resolve_x0(target, name):
    if name is None or name == "zeros":
        return None if not isinstance(name, str) else target.default_x0()
    if isinstance(name, (list, tuple, np.ndarray)):
        return np.asarray(name, dtype=np.uint8)
    if name == "mode":
        return toy_modes(target.spec)[0]
    if name == "anti-mode":
        return 1 - toy_modes(target.spec)[0]
    if name == "tail-ones":
        x = np.zeros(target.p, dtype=np.uint8)
        x[-10:] = 1
        return x
    raise ConfigFieldError("x0", f"unknown initial state {name!r}")


def build_sampler_config(scfg: dict, theta: float | None = None, x0=None) -> SamplerConfig:
    scfg = dict(scfg)
    alg = _need(scfg, "algorithm", str)
    h_spec = scfg.get("h", "sqrt")
    if isinstance(h_spec, dict) and "c_scale_theta" in h_spec:
        if theta is None:
            raise ConfigFieldError("samplers.h", "c_scale_theta needs a theta context")
        h = BalancingFunction("hc", float(h_spec["c_scale_theta"]) * float(theta))
    else:
        h = parse_balancing(h_spec)
    ladder = None
    if "ladder" in scfg:
        lcfg = dict(scfg["ladder"])
        ladder = LadderConfig(
            J=int(_need(lcfg, "J", int)),
            delta=float(_need(lcfg, "delta")),
            method=lcfg.get("method", "M2"),
            h_star=parse_balancing(lcfg.get("h_star", "min-one")),
            s0=float(lcfg.get("s0", 100.0)),
            n0=float(lcfg.get("n0", 100.0)),
            adapt_psi=bool(lcfg.get("adapt_psi", True)),
            adapt_until=lcfg.get("adapt_until"),
        )
    return SamplerConfig(
        algorithm=alg,
        h=h,
        T=scfg.get("T"),
        rho=scfg.get("rho"),
        A=scfg.get("A"),
        m=scfg.get("m"),
        a=scfg.get("a"),
        ladder=ladder,
        use_estimator=bool(scfg.get("use_estimator", False)),
        correct_bias=bool(scfg.get("correct_bias", False)),
        x0=x0,
        label=scfg.get("label"),
    )


def _param_string(config: SamplerConfig) -> str:
    bits = []
    if config.rho is not None:
        bits.append(f"rho={config.rho:g}")
    if config.A is not None:
        bits.append(f"A={config.A:g}")
    if config.m is not None:
        bits.append(f"m={config.m}")
    if config.a is not None:
        bits.append(f"a={config.a:g}")
    if config.ladder is not None:
        lad = config.ladder
        bits.append(f"J={lad.J};delta={lad.delta:g};method={lad.method}")
    return " ".join(bits)


# ---------------------------------------------------------------------------
# experiment drivers
# ---------------------------------------------------------------------------


def _parallel_rows(task_fn, payloads: list, workers: int) -> list:
    """Run tasks in replicate order; workers > 1 parallelizes, never reorders."""
    if workers <= 1:
        return [task_fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(task_fn, payloads, chunksize=1))


def _tv_task(payload: dict) -> dict:
    cfg = payload["cfg"]
    ti, si, rep = payload["ti"], payload["si"], payload["rep"]
    theta = payload["theta"]
    target = build_toy_target({**cfg["target"], "theta": theta})
    threshold = float(cfg.get("threshold", DEFAULT_THRESHOLD[target.spec.example]))
    x0 = resolve_x0(target, cfg.get("x0"))
    config = build_sampler_config(cfg["samplers"][si], theta=theta, x0=x0)
    rng = chain_rng(cfg["seed"], ti, si, rep)
    res = calls_to_threshold(
        target, config, threshold=threshold, budget=int(cfg["budget"]),
        eval_stride=int(cfg.get("eval_stride", 100)), rng=rng,
    )
    return {
        "experiment": "tv-threshold",
        "target": f"toy{target.spec.example}",
        "algorithm": config.algorithm,
        "label": config.display_label(),
        "p": target.p,
        "theta": theta,
        "param": _param_string(config),
        "replicate": rep,
        "metric": "calls_to_threshold",
        "value": res.calls_to_threshold,
        "calls": res.total_calls,
        "censored": int(res.censored),
    }


def _run_tv_threshold(cfg: dict) -> tuple[list[dict], dict]:
    _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 20))
    _need(cfg, "budget", int)
    tcfg = _need(cfg, "target", dict)
    thetas = [float(v) for v in _as_list(_need(tcfg, "theta"))]
    samplers = _need(cfg, "samplers", list)
    payloads = [
        {"cfg": cfg, "ti": ti, "si": si, "rep": rep, "theta": theta}
        for ti, theta in enumerate(thetas)
        for si in range(len(samplers))
        for rep in range(replicates)
    ]
    rows = _parallel_rows(_tv_task, payloads, int(cfg.get("workers", 1)))
    summary = _summarize_groups(rows, keys=("theta", "label"))
    return rows, summary


def _run_estimate(cfg: dict) -> tuple[list[dict], dict]:
    seed = _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 1))
    tcfg = _need(cfg, "target", dict)
    stat = _need(cfg, "statistic", dict)
    burn = float(cfg.get("burn_in", 0.0))
    target = build_toy_target(tcfg)
    x0 = resolve_x0(target, cfg.get("x0"))
    code = int(_need(stat, "code", int))
    codes_exact, probs_exact = target.pushforward_exact()
    exact = float(probs_exact[list(codes_exact).index(code)]) if code in codes_exact else 0.0
    rows = []
    for si, scfg in enumerate(_need(cfg, "samplers", list)):
        config = build_sampler_config(scfg, theta=target.spec.theta, x0=x0)
        for rep in range(replicates):
            rng = chain_rng(seed, si, rep)
            stream = run_sampler(target, config, rng=rng, max_calls=cfg.get("budget"))
            est = estimate_pushforward_prob(stream, code, burn_in_fraction=burn)
            rows.append({
                "experiment": "estimate",
                "target": f"toy{target.spec.example}",
                "algorithm": config.algorithm,
                "label": config.display_label(),
                "p": target.p,
                "theta": target.spec.theta,
                "param": _param_string(config),
                "replicate": rep,
                "metric": f"pushforward_prob[{code}]",
                "value": est.value,
                "calls": stream.total_calls,
                "censored": 0,
            })
    summary = _summarize_groups(rows, keys=("label",))
    summary["exact_value"] = exact
    return rows, summary


def _run_table1(cfg: dict) -> tuple[list[dict], dict]:
    from .analysis import table_grid

    p = int(cfg.get("p", 5))
    thetas = [float(v) for v in _as_list(cfg.get("theta", [1.0, 2.0, 3.0]))]
    gcfg = cfg.get("c_grid", {})
    start = float(gcfg.get("start", 0.0))
    stop = float(gcfg.get("stop", 6.0))
    step = float(gcfg.get("step", 0.01))
    c_grid = np.round(np.arange(start, stop + step / 2, step), 10)
    rhos = [float(r) for r in _as_list(cfg.get("rho", [0.0, 0.5, 1.0]))]
    grid = table_grid(thetas, c_grid, p=p, rho_values=tuple(rhos))
    rows = []
    for r in grid:
        row = {"theta": r["theta"], "c": r["c"], "gap": r["gap"]}
        for rho in rhos:
            row[f"comp_rho{rho:g}"] = r["comp"][rho]
        rows.append(row)
    optima = {}
    for theta in thetas:
        sub = [r for r in grid if r["theta"] == theta]
        gaps = np.array([r["gap"] for r in sub])
        cs = np.array([r["c"] for r in sub])
        entry = {"max_gap": float(gaps.max()), "argmax_c": float(cs[gaps.argmax()])}
        for rho in rhos:
            comp = np.array([r["comp"][rho] for r in sub])
            entry[f"min_comp_rho{rho:g}"] = float(comp.min())
            entry[f"argmin_c_rho{rho:g}"] = float(cs[comp.argmin()])
        optima[f"theta={theta:g}"] = entry
    return rows, {"optima": optima, "p": p}


def _run_variance_verify(cfg: dict) -> tuple[list[dict], dict]:
    from .analysis import build_exact_model, verify_variance_ordering

    tcfg = _need(cfg, "target", dict)
    target = build_toy_target(tcfg)
    h = parse_balancing(cfg.get("h", "min-one"))
    model = build_exact_model(target, h)
    code = int(cfg.get("statistic_code", 0))
    codes = target.summary_codes(np.stack(model.states))
    f = (codes == code).astype(np.float64)
    rho_grid = [float(r) for r in _as_list(cfg.get("rho_grid", [0, 0.25, 0.5, 0.75, 1.0]))]
    report = verify_variance_ordering(model, f, rho_grid)
    rows = [
        {"rho": r, "sigma2": report["sigma2"][r]} for r in sorted(report["sigma2"])
    ]
    summary = {k: v for k, v in report.items() if k != "sigma2"}
    mc = cfg.get("mc_check")
    if mc:
        summary["mc_check"] = _variance_mc_check(
            model, f, mc, int(_need(cfg, "seed", int))
        )
    return rows, summary


def _variance_mc_check(model, f, mc_cfg: dict, seed: int) -> dict:
    """Empirical variance of sqrt(T) * estimator vs the oracle, per kernel."""
    from .analysis import asymptotic_variance_oracle, weight_kernel_mixed

    runs = int(mc_cfg.get("runs", 500))
    T = int(mc_cfg.get("T", 100_000))
    rhos = [float(r) for r in _as_list(mc_cfg.get("rho", [1.0, 0.0]))]
    f = f - float(model.pi @ f)
    cum_P = np.cumsum(model.P, axis=1)
    start_cdf = np.cumsum(model.pi_h)
    out = {}
    for rho in rhos:
        oracle = asymptotic_variance_oracle(model, weight_kernel_mixed(model, rho), f)
        rho_vec = np.full(model.n, rho)
        vals = np.empty(runs)
        for r in range(runs):
            rng = chain_rng(seed, int(rho * 1000), r)
            x0 = int(np.searchsorted(start_cdf, rng.random(), side="right"))
            sum_fw, sum_w = _kernels.simulate_it_estimate(
                cum_P, model.Z, rho_vec, f, T, x0, rng
            )
            vals[r] = sum_fw / sum_w
        emp = float(np.var(vals) * T)
        out[f"rho={rho:g}"] = {
            "oracle": oracle,
            "empirical": emp,
            "rel_err": abs(emp - oracle) / oracle if oracle > 0 else float("nan"),
        }
    return out


def _six_mode_task(payload: dict) -> dict:
    cfg = payload["cfg"]
    si, rep = payload["si"], payload["rep"]
    n, p = int(cfg.get("n", 100)), int(cfg.get("p", 200))
    model = generate_six_mode(
        n=n, p=p, seed=int(cfg.get("data_seed", 1)),
        sigma2_e=float(cfg.get("sigma2_e", 1.0)), require_modes=False,
    )
    target = VarSelTarget(model)
    mode_keys = [m.tobytes() for m in six_mode_vectors(p)]
    config = build_sampler_config(cfg["samplers"][si])
    config = SamplerConfig(**{**config.__dict__, "T": int(cfg.get("iterations", 50_000))})
    rng = chain_rng(cfg["seed"], si, rep)
    stream = run_sampler(target, config, rng=rng)
    visited = _count_mode_visits(stream.states, mode_keys)
    return {
        "experiment": "six-mode",
        "target": "varsel-six-mode",
        "algorithm": config.algorithm,
        "label": config.display_label(),
        "p": p,
        "theta": "",
        "param": _param_string(config),
        "replicate": rep,
        "metric": "modes_visited",
        "value": visited,
        "calls": stream.total_calls,
        "censored": 0,
    }


def _run_six_mode(cfg: dict) -> tuple[list[dict], dict]:
    _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 20))
    # validate the dataset once up front (modes must hold for this seed)
    generate_six_mode(
        n=int(cfg.get("n", 100)), p=int(cfg.get("p", 200)),
        seed=int(cfg.get("data_seed", 1)), sigma2_e=float(cfg.get("sigma2_e", 1.0)),
        require_modes=bool(cfg.get("require_modes", True)),
    )
    samplers = _need(cfg, "samplers", list)
    payloads = [
        {"cfg": cfg, "si": si, "rep": rep}
        for si in range(len(samplers))
        for rep in range(replicates)
    ]
    rows = _parallel_rows(_six_mode_task, payloads, int(cfg.get("workers", 1)))
    summary = _summarize_groups(rows, keys=("label",))
    for g in summary["groups"]:
        vals = [r["value"] for r in rows if r["label"] == g["label"]]
        g["histogram"] = {str(k): int(sum(1 for v in vals if v == k)) for k in range(7)}
    return rows, summary


def _count_mode_visits(states: np.ndarray, mode_keys: list[bytes]) -> int:
    if states is None:
        return 0
    sizes = states.sum(axis=1)
    hits = set()
    for i in np.flatnonzero(sizes == 3):
        key = states[i].tobytes()
        if key in mode_keys:
            hits.add(key)
    return len(hits)


def _abc_task(payload: dict) -> dict:
    cfg = payload["cfg"]
    rep = payload["rep"]
    spec = GeomABCSpec(
        a=float(cfg.get("a", 0.5)), b=float(cfg.get("b", 0.4)), K=int(cfg.get("K", 100))
    )
    target = GeomABCTarget(spec)
    x0 = int(cfg.get("x0", 15))
    burn = float(cfg.get("burn_in", 0.5))
    if payload["which"] == "p-iit":
        rng = chain_rng(cfg["seed"], 0, rep)
        config = SamplerConfig(
            algorithm="p-iit", h=BalancingFunction("sqrt"),
            T=int(cfg.get("iterations", 10_000)), x0=x0,
            correct_bias=bool(cfg.get("correct_bias", False)),
        )
        stream = run_sampler(target, config, rng=rng)
    else:
        rng = chain_rng(cfg["seed"], 1, rep)
        config = SamplerConfig(
            algorithm="uninformed-mh", h=BalancingFunction("min-one"),
            use_estimator=True, x0=x0,
        )
        stream = run_sampler(target, config, rng=rng, max_calls=payload["budget"])
    est = self_normalized_estimate(stream, lambda s: s.astype(float), burn)
    return _abc_row(payload["which"], rep, est.value, stream.total_calls)


def _run_abc(cfg: dict) -> tuple[list[dict], dict]:
    _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 50))
    workers = int(cfg.get("workers", 1))
    spec = GeomABCSpec(
        a=float(cfg.get("a", 0.5)), b=float(cfg.get("b", 0.4)), K=int(cfg.get("K", 100))
    )
    piit_rows = _parallel_rows(
        _abc_task,
        [{"cfg": cfg, "rep": r, "which": "p-iit"} for r in range(replicates)],
        workers,
    )
    # the uninformed baseline gets each replicate's exact call budget
    pm_rows = _parallel_rows(
        _abc_task,
        [
            {"cfg": cfg, "rep": r, "which": "pm-mh", "budget": int(piit_rows[r]["calls"])}
            for r in range(replicates)
        ],
        workers,
    )
    rows = piit_rows + pm_rows
    summary = _summarize_groups(rows, keys=("label",))
    for g in summary["groups"]:
        vals = np.array([r["value"] for r in rows if r["label"] == g["label"]])
        g["mean"] = float(vals.mean())
        g["sd"] = float(vals.std(ddof=1))
    summary["true_mean"] = spec.mean
    return rows, summary


def _abc_row(label: str, rep: int, value: float, calls: int) -> dict:
    return {
        "experiment": "abc",
        "target": "geometric-abc",
        "algorithm": label,
        "label": label,
        "p": "",
        "theta": "",
        "param": "",
        "replicate": rep,
        "metric": "posterior_mean",
        "value": value,
        "calls": calls,
        "censored": 0,
    }


def _gaussian_task(payload: dict) -> list:
    cfg = payload["cfg"]
    rep = payload["rep"]
    p = int(cfg.get("p", 10))
    m = int(cfg.get("m", 50))
    spec = GaussianSpec(p)
    target = GaussianTarget(spec)
    sigma = float(cfg.get("sigma", spec.default_proposal_scale()))
    proposal = RandomWalkProposal(sigma, p)
    h = parse_balancing(cfg.get("h", "sqrt"))
    x0 = np.full(p, float(cfg.get("x0_value", 10.0)))
    checkpoint = int(cfg.get("trajectory_checkpoint_calls", 20_000))
    rng = chain_rng(cfg["seed"], rep)
    config = SamplerConfig(algorithm="mt-it", h=h, m=m, x0=x0)
    stream = run_sampler(
        target, config, rng=rng, max_calls=int(cfg.get("budget", 500_000)),
        proposal=proposal,
    )
    est = self_normalized_estimate(
        stream, lambda X: np.einsum("ij,ij->i", X, X), float(cfg.get("burn_in", 0.5))
    )
    norms = np.linalg.norm(stream.states, axis=1)
    k_chk = int(np.searchsorted(stream.calls, checkpoint, side="right")) - 1
    base = {
        "experiment": "gaussian-mtit",
        "target": f"gaussian-p{p}",
        "algorithm": "mt-it",
        "label": f"mt-it {h.label()} m={m}",
        "p": p,
        "theta": "",
        "param": f"m={m};sigma={sigma:g}",
        "replicate": rep,
        "censored": 0,
    }
    return [
        {**base, "metric": "second_moment", "value": est.value, "calls": stream.total_calls},
        {**base, "metric": "norm_at_checkpoint", "value": float(norms[max(k_chk, 0)]),
         "calls": checkpoint},
    ]


def _run_gaussian_mtit(cfg: dict) -> tuple[list[dict], dict]:
    _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 20))
    p = int(cfg.get("p", 10))
    nested = _parallel_rows(
        _gaussian_task,
        [{"cfg": cfg, "rep": r} for r in range(replicates)],
        int(cfg.get("workers", 1)),
    )
    rows = [r for pair in nested for r in pair]
    ests = np.array([r["value"] for r in rows if r["metric"] == "second_moment"])
    chks = np.array([r["value"] for r in rows if r["metric"] == "norm_at_checkpoint"])
    summary = {
        "true_second_moment": float(p),
        "mean_estimate": float(ests.mean()),
        "rel_err": float(abs(ests.mean() - p) / p),
        "mean_norm_at_checkpoint": float(chks.mean()),
        "norm_target": float(2.0 * np.sqrt(p)),
    }
    return rows, summary


def _ct_task(payload: dict) -> dict:
    cfg = payload["cfg"]
    ai, rep, a = payload["ai"], payload["rep"], payload["a"]
    cap = int(cfg.get("max_iterations", 10_000))
    target = build_toy_target(cfg["target"])
    modes = toy_modes(target.spec)
    h = parse_balancing(cfg.get("h", "sqrt"))
    goal = modes[1].tobytes()
    rng = chain_rng(cfg["seed"], ai, rep)
    config = SamplerConfig(
        algorithm="ct-iit", h=h, a=a, T=cap, x0=modes[0], engine="generic"
    )
    stream = run_sampler(target, config, rng=rng)
    hit = _first_hit(stream.states, goal)
    return {
        "experiment": "ct-traverse",
        "target": f"toy{target.spec.example}",
        "algorithm": "ct-iit",
        "label": f"ct-iit a={a:g}",
        "p": target.p,
        "theta": target.spec.theta,
        "param": f"a={a:g}",
        "replicate": rep,
        "metric": "iterations_to_second_mode",
        "value": hit if hit >= 0 else cap,
        "calls": stream.total_calls,
        "censored": int(hit < 0),
    }


def _run_ct_traverse(cfg: dict) -> tuple[list[dict], dict]:
    _need(cfg, "seed", int)
    replicates = int(cfg.get("replicates", 20))
    target = build_toy_target(_need(cfg, "target", dict))
    if len(toy_modes(target.spec)) < 2:
        raise ConfigFieldError("target", "ct-traverse needs a bimodal toy")
    a_values = [float(v) for v in _as_list(_need(cfg, "a"))]
    payloads = [
        {"cfg": cfg, "ai": ai, "rep": rep, "a": a}
        for ai, a in enumerate(a_values)
        for rep in range(replicates)
    ]
    rows = _parallel_rows(_ct_task, payloads, int(cfg.get("workers", 1)))
    summary = _summarize_groups(rows, keys=("label",))
    return rows, summary


def _first_hit(states: np.ndarray, goal: bytes) -> int:
    for i in range(states.shape[0]):
        if states[i].tobytes() == goal:
            return i
    return -1


# ---------------------------------------------------------------------------
# summaries and writers
# ---------------------------------------------------------------------------


def _summarize_groups(rows: list[dict], keys: tuple) -> dict:
    groups = {}
    for r in rows:
        gk = tuple(r[k] for k in keys)
        groups.setdefault(gk, []).append(r)
    out = []
    for gk in sorted(groups, key=str):
        vals = np.array([float(r["value"]) for r in groups[gk]])
        out.append({
            **{k: v for k, v in zip(keys, gk)},
            "n": int(vals.shape[0]),
            "median": float(np.median(vals)),
            "q1": float(np.quantile(vals, 0.25)),
            "q3": float(np.quantile(vals, 0.75)),
            "censored": int(sum(int(r["censored"]) for r in groups[gk])),
            "total_calls": int(sum(int(r["calls"]) for r in groups[gk])),
        })
    return {"groups": out}


_DRIVERS = {
    "tv-threshold": _run_tv_threshold,
    "estimate": _run_estimate,
    "table1": _run_table1,
    "variance-verify": _run_variance_verify,
    "six-mode": _run_six_mode,
    "abc": _run_abc,
    "gaussian-mtit": _run_gaussian_mtit,
    "ct-traverse": _run_ct_traverse,
}


def validate_config(cfg: dict) -> str:
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a mapping")
    kind = _need(cfg, "experiment", str)
    if kind not in EXPERIMENT_KINDS:
        raise ConfigFieldError("experiment", f"unknown kind {kind!r}")
    _need(cfg, "seed", int)
    return kind


def run_experiment_config(cfg: dict, out_dir) -> dict:
    """Run one experiment config; write CSV, summary JSON and provenance."""
    kind = validate_config(cfg)
    rows, summary = _DRIVERS[kind](cfg)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if kind == "table1":
        columns = list(rows[0].keys())
        csv_path = out_dir / "grid.csv"
    elif kind == "variance-verify":
        columns = list(rows[0].keys()) if rows else ["rho", "sigma2"]
        csv_path = out_dir / "values.csv"
    else:
        columns = RESULT_COLUMNS
        csv_path = out_dir / "results.csv"
    write_csv(csv_path, rows, columns)
    provenance = {
        "config": cfg,
        "package_version": __version__,
        "kernel_backend": _kernels.backend_name(),
        "master_seed": cfg.get("seed"),
        "seed_derivation": "SeedSequence(entropy=master_seed, spawn_key=cell_index)",
    }
    payload = {"experiment": kind, "summary": summary, "provenance": provenance}
    write_json(out_dir / "summary.json", payload)
    return payload


def write_csv(path, rows: list[dict], columns: list[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(r.get(k, "")) for k in columns})


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialize {type(v)}")
