"""Throughput comparison of the compiled and pure-Python chain kernels.

Run via ``iitkit bench`` or ``python -m iitkit.benchmark``.  Also asserts the
two backends produce identical output on the benchmarked runs, which is the
contract the fallback is held to.
"""
from __future__ import annotations

import time

import numpy as np

from . import _kernels
from .samplers.dispatch import _run_kernel, chain_rng
from .balancing import BalancingFunction
from .samplers import SamplerConfig
from .targets import ToySpec, ToyTarget

_CASES = [
    (
        "always-informed sweep chain (p=100, 5k iterations)",
        ToySpec(1, 100, p1=10, theta=5.0),
        SamplerConfig(algorithm="naive-iit", h=BalancingFunction("sqrt"), T=5_000),
    ),
    (
        "mixed chain, rho=0.025 (p=100, 200k calls)",
        ToySpec(1, 100, p1=10, theta=5.0),
        SamplerConfig(algorithm="mh-iit", h=BalancingFunction("min-one"), rho=0.025),
    ),
    (
        "uninformed baseline (p=100, 200k calls)",
        ToySpec(2, 100, theta=2.0),
        SamplerConfig(algorithm="uninformed-mh", h=BalancingFunction("min-one")),
    ),
]


def _time_case(spec, config, backend: str, repeats: int):
    target = ToyTarget(spec)
    max_calls = None if config.T is not None else 200_000
    best = np.inf
    stream = None
    for _ in range(repeats):
        rng = chain_rng(1234)
        t0 = time.perf_counter()
        stream = _run_kernel(target, config, rng, max_calls, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, stream


def run_benchmark(repeats: int = 3) -> list[dict]:
    rows = []
    have = _kernels.have_compiled()
    print(f"kernel backends: python{' + compiled' if have else ' only'}")
    for name, spec, config in _CASES:
        t_py, s_py = _time_case(spec, config, "python", repeats)
        row = {"case": name, "python_s": t_py}
        line = f"{name}\n  python:   {t_py * 1e3:9.1f} ms"
        if have:
            t_c, s_c = _time_case(spec, config, "compiled", repeats)
            identical = (
                np.array_equal(s_py.summary, s_c.summary)
                and np.array_equal(s_py.log_weights, s_c.log_weights)
                and np.array_equal(s_py.calls, s_c.calls)
            )
            row.update(compiled_s=t_c, speedup=t_py / t_c, identical=identical)
            line += (
                f"\n  compiled: {t_c * 1e3:9.1f} ms"
                f"   speedup {t_py / t_c:6.1f}x   outputs identical: {identical}"
            )
        print(line)
        rows.append(row)
    return rows


if __name__ == "__main__":
    run_benchmark()
