"""Command-line driver for batch experiments.

Subcommands:
  run CONFIG            run one experiment config (YAML)
  reproduce RECIPE      run a canned recipe, with optional overrides
  list-recipes          print the recipe catalog with desk-scale defaults
  analyze CONFIG        run an exact-analysis config (grid/verification kinds)
  bench                 compare the compiled and pure-Python chain kernels

Outputs per run: a CSV of per-replicate results, a JSON summary with
medians/quartiles/censoring counts, and a provenance block echoing the
config.  The default output root is $IITKIT_OUTPUT_DIR or ./results.
Configuration errors exit with status 2 and name the offending field.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import yaml

from .errors import ConfigurationError
from .experiments import ANALYSIS_KINDS, run_experiment_config, validate_config
from .recipes import RECIPES, list_recipes_text, recipe_config

EXIT_CONFIG = 2


def _out_root() -> Path:
    return Path(os.environ.get("IITKIT_OUTPUT_DIR", "results"))


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"config file does not parse: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a mapping at the top level")
    return cfg


def _apply_overrides(cfg: dict, args) -> dict:
    if getattr(args, "p", None) is not None:
        if "target" in cfg:
            cfg["target"]["p"] = args.p
        else:
            cfg["p"] = args.p
    if getattr(args, "theta", None) is not None:
        thetas = [float(v) for v in str(args.theta).split(",")]
        value = thetas if len(thetas) > 1 else thetas[0]
        if "target" in cfg:
            cfg["target"]["theta"] = value
        else:
            cfg["theta"] = value
    for field in ("replicates", "budget", "seed", "workers"):
        v = getattr(args, field, None)
        if v is not None:
            cfg[field] = v
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = yaml.safe_load(raw)
    return cfg


def _execute(cfg: dict, out: str | None, default_name: str) -> int:
    kind = validate_config(cfg)
    out_dir = Path(out) if out else _out_root() / default_name
    payload = run_experiment_config(cfg, out_dir)
    print(f"experiment: {kind}")
    print(f"results written to {out_dir}")
    _print_brief(payload["summary"])
    return 0


def _print_brief(summary: dict) -> None:
    groups = summary.get("groups")
    if groups:
        for g in groups:
            label = " ".join(
                str(g[k]) for k in ("theta", "label") if k in g and g[k] != ""
            )
            print(
                f"  {label}: median={g['median']:g} "
                f"[q1={g['q1']:g}, q3={g['q3']:g}] censored={g['censored']}/{g['n']}"
            )
    for key in ("optima", "mean_estimate", "true_mean", "mc_check"):
        if key in summary:
            print(f"  {key}: {summary[key]}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="iitkit", description="importance-tempered sampler experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--workers", type=int, default=None)

    p_rep = sub.add_parser("reproduce", help="run a canned recipe")
    p_rep.add_argument("recipe", choices=sorted(RECIPES))
    p_rep.add_argument("--p", type=int, default=None)
    p_rep.add_argument("--theta", default=None, help="comma-separated list")
    p_rep.add_argument("--replicates", type=int, default=None)
    p_rep.add_argument("--budget", type=int, default=None)
    p_rep.add_argument("--seed", type=int, default=None)
    p_rep.add_argument("--workers", type=int, default=None)
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override any config entry (dotted keys)",
    )

    sub.add_parser("list-recipes", help="print the recipe catalog")

    p_an = sub.add_parser("analyze", help="run an exact-analysis config")
    p_an.add_argument("config")
    p_an.add_argument("--out", default=None)

    p_bench = sub.add_parser("bench", help="benchmark compiled vs python kernels")
    p_bench.add_argument("--repeats", type=int, default=3)

    args = parser.parse_args(argv)
    try:
        if args.command == "list-recipes":
            sys.stdout.write(list_recipes_text())
            return 0
        if args.command == "run":
            cfg = _load_config(args.config)
            if args.workers is not None:
                cfg["workers"] = args.workers
            return _execute(cfg, args.out, Path(args.config).stem)
        if args.command == "reproduce":
            cfg = _apply_overrides(recipe_config(args.recipe), args)
            return _execute(cfg, args.out, args.recipe)
        if args.command == "analyze":
            cfg = _load_config(args.config)
            kind = validate_config(cfg)
            if kind not in ANALYSIS_KINDS:
                raise ConfigurationError(
                    f"'analyze' covers {ANALYSIS_KINDS}; use 'run' for {kind!r}"
                )
            return _execute(cfg, args.out, Path(args.config).stem)
        if args.command == "bench":
            from .benchmark import run_benchmark

            run_benchmark(repeats=args.repeats)
            return 0
        raise ConfigurationError(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
