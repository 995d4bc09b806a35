"""Benchmark the compiled stepping kernel against the pure-Python fallback.

Both cores are run on identical chains; results are checked for bit
equality before rates are reported, so the benchmark doubles as a
cross-core consistency check.  The pure-Python core gets a proportionally
shorter run (it is orders of magnitude slower) and its rate is measured on
that shorter run.
"""

from __future__ import annotations

import time

import numpy as np

from . import _pycore
from ._core import active_core
from .lattice import build_geometry
from .model import UniformCoupling
from .sampler import ChainParams, advance, new_chain


def _time_core(geometry, coupling, params, steps, core):
    state = new_chain(geometry, coupling, params)
    t0 = time.perf_counter()
    advance(state, steps, core=core)
    elapsed = time.perf_counter() - t0
    return state, elapsed


def run_benchmark(lengths, temperature=2.0, steps=1_000_000, seed=0) -> dict:
    geometry = build_geometry(lengths)
    coupling = UniformCoupling(1.0)
    params = ChainParams(
        temperature=temperature, steps=max(steps, 1), seed=seed, init_mode="random"
    )
    fast = active_core()

    fast_state, fast_s = _time_core(geometry, coupling, params, steps, fast)
    py_steps = min(steps, 200_000)
    py_state, py_s = _time_core(geometry, coupling, params, py_steps, _pycore)

    # equality check on the common prefix of the two runs
    check_state, _ = _time_core(geometry, coupling, params, py_steps, fast)
    identical = (
        np.array_equal(check_state.states, py_state.states)
        and check_state.w == py_state.w
        and check_state.rng.state == py_state.rng.state
    )

    fast_rate = steps / fast_s
    py_rate = py_steps / py_s
    print(f"lattice {list(lengths)} ({geometry.site_count} sites), T={temperature}")
    print(f"{fast.CORE_NAME:>10}: {steps:>10} steps in {fast_s:8.3f}s  ({fast_rate / 1e6:8.2f} M steps/s)")
    print(f"{'python':>10}: {py_steps:>10} steps in {py_s:8.3f}s  ({py_rate / 1e6:8.2f} M steps/s)")
    print(f"  speedup x{fast_rate / py_rate:.0f}, trajectories bit-identical: {identical}")
    if not identical:
        raise AssertionError("compiled and pure-Python cores disagree")
    return {
        "fast_core": fast.CORE_NAME,
        "fast_rate": fast_rate,
        "python_rate": py_rate,
        "identical": identical,
    }


if __name__ == "__main__":
    run_benchmark([32, 32, 32])
