"""Backend selection for the hot chain loops.

The compiled Cython module is preferred when importable; the pure-Python
reference implements the identical operations (same uniform-draw order, same
arithmetic), so results are bit-identical across backends.  Set
IITKIT_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _reference

_FORCE_PY = os.environ.get("IITKIT_PURE_PYTHON", "").strip() not in ("", "0")

if _FORCE_PY:
    _impl = None
else:
    try:
        from . import _compiled as _impl
    except ImportError:
        _impl = None

H_KIND_INDEX = {"min-one": 0, "sqrt": 1, "barker": 2, "max-one": 3, "hc": 4}


def backend_name() -> str:
    return "compiled" if _impl is not None else "python"


def have_compiled() -> bool:
    return _impl is not None


def run_toy_chain(
    example,
    theta,
    m1,
    m2,
    x0,
    h_kind: str,
    h_c: float,
    mixed: bool,
    rho_const: float,
    rho_A: float,
    use_A: bool,
    T,
    max_calls,
    rng,
    backend: str | None = None,
):
    kind = H_KIND_INDEX[h_kind]
    T = -1 if T is None else int(T)
    max_calls = -1 if max_calls is None else int(max_calls)
    if _use_compiled(backend):
        return _impl.run_toy_chain(
            example, theta, m1, m2, x0, kind, h_c, mixed, rho_const, rho_A,
            use_A, T, max_calls, rng.bit_generator,
        )
    return _reference.run_toy_chain(
        example, theta, m1, m2, x0, kind, h_c, mixed, rho_const, rho_A,
        use_A, T, max_calls, rng,
    )


def simulate_it_estimate(cum_P, Z, rho, f, T: int, x0: int, rng, backend: str | None = None):
    if _use_compiled(backend):
        return _impl.simulate_it_estimate(cum_P, Z, rho, f, T, x0, rng.bit_generator)
    return _reference.simulate_it_estimate(cum_P, Z, rho, f, T, x0, rng)


def _use_compiled(backend: str | None) -> bool:
    if backend == "python":
        return False
    if backend == "compiled":
        if _impl is None:
            raise RuntimeError("compiled backend requested but not built")
        return True
    return _impl is not None
