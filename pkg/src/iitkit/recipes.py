"""Canned experiment configurations with desk-scale defaults.

Every recipe is a complete, runnable config; the listing prints the scaled
defaults so the shrunk dimensions are never silent.  Full-scale values remain
legal overrides.
"""
from __future__ import annotations

import copy

from .errors import ConfigurationError

_STANDARD_SAMPLERS = [
    {"algorithm": "uninformed-mh", "h": "min-one", "label": "mh"},
    {"algorithm": "naive-iit", "h": "sqrt", "label": "iit"},
    {"algorithm": "mh-iit", "h": "min-one", "rho": 0.025, "label": "mh-iit"},
]

RECIPES: dict[str, dict] = {
    "table1": {
        "description": "complexity/gap grid of the clamp family on the "
        "dependent-coordinates toy (p=5, theta in {1,2,3}, c in [0,6])",
        "config": {
            "experiment": "table1",
            "seed": 1,
            "p": 5,
            "theta": [1.0, 2.0, 3.0],
            "c_grid": {"start": 0.0, "stop": 6.0, "step": 0.01},
            "rho": [0.0, 0.5, 1.0],
        },
    },
    "fig1": {
        "description": "calls-to-threshold on the independent-coordinates toy "
        "(desk scale p=100, p1=10; full scale uses p=500, p1=50)",
        "config": {
            "experiment": "tv-threshold",
            "seed": 20260809,
            "replicates": 20,
            "budget": 500_000,
            "threshold": 0.1,
            "target": {"kind": "toy1", "p": 100, "p1": 10, "theta": [1.0, 5.0, 10.0]},
            "samplers": _STANDARD_SAMPLERS
            + [{"algorithm": "rn-iit", "h": "sqrt", "m": 20, "label": "rn-iit"}],
        },
    },
    "fig2": {
        "description": "calls-to-threshold on the dependent-coordinates toy, "
        "conservative vs aggressive clamp (desk scale p=100; full p=500)",
        "config": {
            "experiment": "tv-threshold",
            "seed": 20260809,
            "replicates": 20,
            "budget": 500_000,
            "threshold": 0.2,
            "x0": "tail-ones",
            "target": {"kind": "toy2", "p": 100, "theta": [1.0, 5.0, 10.0]},
            "samplers": [
                {"algorithm": "uninformed-mh", "h": "min-one", "label": "mh"},
                {"algorithm": "naive-iit", "h": "sqrt", "label": "iit"},
                {"algorithm": "mh-iit", "h": "min-one", "rho": 0.025, "label": "mh-iit-1"},
                {
                    "algorithm": "mh-iit",
                    "h": {"kind": "hc", "c_scale_theta": 2.0},
                    "rho": 0.025,
                    "label": "mh-iit-2",
                },
                {"algorithm": "rn-iit", "h": "sqrt", "m": 20, "label": "rn-iit"},
            ],
        },
    },
    "fig3": {
        "description": "calls-to-threshold on the bimodal toy "
        "(desk scale p=50, p1=12; full scale p=200, p1=50)",
        "config": {
            "experiment": "tv-threshold",
            "seed": 20260809,
            "replicates": 20,
            "budget": 500_000,
            "threshold": 0.5,
            "target": {"kind": "toy3", "p": 50, "p1": 12, "theta": [2.0, 5.0, 10.0]},
            "samplers": _STANDARD_SAMPLERS
            + [{"algorithm": "rn-iit", "h": "sqrt", "m": 10, "label": "rn-iit"}],
        },
    },
    "ct-temperature": {
        "description": "iterations for the constant-temperature chain to cross "
        "between the two modes of the hard bimodal toy (p=200, p1=10, theta=6)",
        "config": {
            "experiment": "ct-traverse",
            "seed": 20260809,
            "replicates": 20,
            "max_iterations": 10_000,
            "h": "sqrt",
            "a": [0.02, 0.1, 0.4, 0.7, 1.0],
            "target": {"kind": "toy4", "p": 200, "p1": 10, "theta": 6.0},
        },
    },
    "six-mode": {
        "description": "mode discovery on the engineered six-mode selection "
        "posterior (n=100, p=200): tempered ladder vs plain informed chain",
        "config": {
            "experiment": "six-mode",
            "seed": 20260809,
            "replicates": 20,
            "iterations": 50_000,
            "n": 100,
            "p": 200,
            "data_seed": 1,
            "sigma2_e": 1.0,
            "samplers": [
                {
                    "algorithm": "vt-iit",
                    "ladder": {"J": 4, "delta": 2.0, "method": "M2"},
                    "label": "vt-iit-M2",
                },
                {"algorithm": "naive-iit", "h": "sqrt", "label": "iit"},
            ],
        },
    },
    "abc": {
        "description": "posterior-mean estimation for the geometric target with "
        "Bernoulli-averaged density estimates (a=0.5, b=0.4, K=100, start 10; "
        "deeper tail starts need proportionally longer runs)",
        "config": {
            "experiment": "abc",
            "seed": 20260809,
            "replicates": 50,
            "iterations": 10_000,
            "burn_in": 0.5,
            "a": 0.5,
            "b": 0.4,
            "K": 100,
            "x0": 10,
        },
    },
    "gaussian-mtit": {
        "description": "multiple-try chain on a standard normal target "
        "(desk scale p=10, m=50; full scale p=50)",
        "config": {
            "experiment": "gaussian-mtit",
            "seed": 20260809,
            "replicates": 20,
            "p": 10,
            "m": 50,
            "h": "sqrt",
            "budget": 500_000,
            "burn_in": 0.5,
            "trajectory_checkpoint_calls": 20_000,
        },
    },
    "variance-verify": {
        "description": "numerical certification of the asymptotic-variance "
        "ordering, bounds and cost inequalities on an enumerated toy (p=4)",
        "config": {
            "experiment": "variance-verify",
            "seed": 20260809,
            "target": {"kind": "toy1", "p": 4, "p1": 2, "theta": 1.0},
            "h": "min-one",
            "rho_grid": [0.0, 0.25, 0.5, 0.75, 1.0],
            "statistic_code": 0,
            "mc_check": {"runs": 500, "T": 100_000, "rho": [1.0, 0.0]},
        },
    },
}


def recipe_config(name: str) -> dict:
    if name not in RECIPES:
        raise ConfigurationError(
            f"unknown recipe {name!r}; see 'list-recipes' for the catalog"
        )
    return copy.deepcopy(RECIPES[name]["config"])


def list_recipes_text() -> str:
    lines = []
    for name in sorted(RECIPES):
        entry = RECIPES[name]
        lines.append(f"{name}")
        lines.append(f"  {entry['description']}")
        cfg = entry["config"]
        keys = [k for k in cfg if k not in ("samplers",)]
        parts = []
        for k in sorted(keys):
            v = cfg[k]
            if isinstance(v, dict):
                v = "{" + ", ".join(f"{a}={b}" for a, b in sorted(v.items())) + "}"
            parts.append(f"{k}={v}")
        lines.append("  defaults: " + "; ".join(parts))
        if "samplers" in cfg:
            labels = [s.get("label", s["algorithm"]) for s in cfg["samplers"]]
            lines.append("  samplers: " + ", ".join(labels))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
