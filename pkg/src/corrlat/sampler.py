"""Metropolis Markov chain over agent configurations.

One elementary step proposes flipping a single agent's decision: accept
unconditionally when the objective change is <= 0, otherwise accept when
exp(-beta * delta) >= xi for one fresh uniform draw xi.  Site selection is
either one uniform index draw per step (``random_site``) or a row-major
sweep (``sequential_sweep``).

Draw accounting (per step): one 64-bit draw for the site under the
``random_site`` schedule, none under ``sequential_sweep``; one uniform
real draw if and only if delta > 0.  Chains are bit-reproducible from
(seed, params) alone, with either stepping core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import InvalidParamsError
from .lattice import LatticeGeometry, init_configuration
from .model import convention_factor, flip_delta, total_objective
from .observables import TimeSeries, record
from .rng import Xoshiro256pp

SCHEDULES = ("random_site", "sequential_sweep")


@dataclass(frozen=True)
class ChainParams:
    """Temperature, step budget and stream parameters of one chain."""

    temperature: float
    steps: int
    schedule: str = "random_site"
    seed: int = 0
    init_mode: str = "random"
    p_corrupt: float = 0.5
    objective_convention: str = "bond_once"

    def __post_init__(self):
        if not self.temperature > 0:
            raise InvalidParamsError(f"temperature must be > 0, got {self.temperature}")
        if self.steps < 1:
            raise InvalidParamsError(f"steps must be >= 1, got {self.steps}")
        if self.schedule not in SCHEDULES:
            raise InvalidParamsError(
                f"unknown schedule {self.schedule!r}; expected one of {SCHEDULES}"
            )
        convention_factor(self.objective_convention)  # validate

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature

    @property
    def convention_scale(self) -> float:
        return convention_factor(self.objective_convention)

    @property
    def acceptance_beta(self) -> float:
        """beta actually applied to the bond-once delta inside the kernel."""
        return self.beta * self.convention_scale


@dataclass
class ChainState:
    """Mutable state of one running chain.

    ``w`` is the running bond-once objective and always equals
    ``total_objective(geometry, states, coupling)``; it is maintained
    incrementally by the stepping kernels.
    """

    geometry: LatticeGeometry
    states: np.ndarray
    coupling: object
    params: ChainParams
    rng: Xoshiro256pp
    step_count: int = 0
    w: float = 0.0
    sweep_pos: int = 0
    n_accepted: int = 0
    n_real_draws: int = 0
    n_site_draws: int = 0


@dataclass(frozen=True)
class StepOutcome:
    site: int
    delta_w: float
    accepted: bool


def acceptance_probability(delta_w: float, beta: float) -> float:
    """Metropolis acceptance: 1 for delta_w <= 0, else exp(-beta * delta_w)."""
    if delta_w <= 0.0:
        return 1.0
    return math.exp(-beta * delta_w)


def new_chain(geometry: LatticeGeometry, coupling, params: ChainParams) -> ChainState:
    """Fresh chain at step 0; initialization draws come from the chain stream."""
    rng = Xoshiro256pp(params.seed)
    states = init_configuration(geometry, params.init_mode, rng, params.p_corrupt)
    w = total_objective(geometry, states, coupling)
    return ChainState(
        geometry=geometry,
        states=states,
        coupling=coupling,
        params=params,
        rng=rng,
        w=w,
    )


def metropolis_step(state: ChainState) -> StepOutcome:
    """One elementary trial move, consuming the same draws as the kernels."""
    geometry = state.geometry
    params = state.params
    m = geometry.site_count
    if params.schedule == "random_site":
        site = state.rng.uniform_index(m)
        state.n_site_draws += 1
    else:
        site = state.sweep_pos
        state.sweep_pos += 1
        if state.sweep_pos == m:
            state.sweep_pos = 0

    delta = flip_delta(geometry, state.states, state.coupling, site)
    if delta > 0.0:
        xi = state.rng.uniform()
        state.n_real_draws += 1
        accepted = math.exp(-params.acceptance_beta * delta) >= xi
    else:
        accepted = True

    if accepted:
        state.states[site] = -state.states[site]
        state.w += delta
        state.n_accepted += 1
    state.step_count += 1
    return StepOutcome(site=site, delta_w=params.convention_scale * delta, accepted=accepted)


def advance(state: ChainState, nsteps: int, core=None) -> None:
    """Advance the chain by ``nsteps`` elementary moves using a stepping kernel."""
    if nsteps <= 0:
        return
    impl = core if core is not None else _core
    params = state.params
    coupling = state.coupling
    slot_j = None if coupling.kind == "uniform" else coupling.slot_values
    j_uniform = coupling.j if coupling.kind == "uniform" else 0.0
    schedule = (
        _core.SCHEDULE_RANDOM if params.schedule == "random_site" else _core.SCHEDULE_SEQUENTIAL
    )
    rng_arr = state.rng.state_array()
    w, sweep_pos, accepted, real_draws = impl.run_steps(
        state.states,
        state.geometry.neighbor_table,
        slot_j,
        j_uniform,
        params.acceptance_beta,
        nsteps,
        rng_arr,
        schedule,
        state.sweep_pos,
        state.w,
    )
    state.rng.set_state_array(rng_arr)
    state.w = w
    state.sweep_pos = int(sweep_pos)
    state.n_accepted += int(accepted)
    state.n_real_draws += int(real_draws)
    if schedule == _core.SCHEDULE_RANDOM:
        state.n_site_draws += nsteps
    state.step_count += nsteps


@dataclass
class RunResult:
    state: ChainState
    series: TimeSeries
    snapshots: list  # (step, configuration copy) pairs


def _next_multiple(step: int, every: int) -> int:
    return (step // every + 1) * every


def run_chain(
    geometry: LatticeGeometry,
    coupling,
    params: ChainParams,
    measure_every: int | None = None,
    snapshot_every: int | None = None,
    on_measure=None,
    on_snapshot=None,
    checkpoint_every: int | None = None,
    on_checkpoint=None,
    halt_at: int | None = None,
    start_state: ChainState | None = None,
    collect_snapshots: bool = True,
    core=None,
) -> RunResult:
    """Run a chain for ``params.steps`` elementary moves with recording hooks.

    Measurements are taken at step 0, every ``measure_every`` steps, and at
    the final step; snapshots at multiples of ``snapshot_every`` and at the
    final step.  Pass ``start_state`` (e.g. from a checkpoint) to continue
    a partially advanced chain on the same absolute step grid; already
    recorded points are not repeated.  ``None`` disables a hook family.
    ``halt_at`` stops the run early at that step (``on_checkpoint`` fires
    there first), leaving the chain resumable.
    """
    for name, every in (("measure_every", measure_every),
                        ("snapshot_every", snapshot_every),
                        ("checkpoint_every", checkpoint_every)):
        if every is not None and every < 1:
            raise InvalidParamsError(f"{name} must be >= 1, got {every}")

    state = start_state if start_state is not None else new_chain(geometry, coupling, params)
    series = TimeSeries()
    snapshots: list = []

    def do_measure():
        meas = record(series, state)
        if on_measure is not None:
            on_measure(state, meas)

    def do_snapshot():
        snap = state.states.copy()
        if collect_snapshots:
            snapshots.append((state.step_count, snap))
        if on_snapshot is not None:
            on_snapshot(state, snap)

    if measure_every is not None and state.step_count == 0:
        do_measure()

    steps = params.steps
    stop = steps if halt_at is None else min(steps, halt_at)
    while state.step_count < stop:
        target = stop
        if measure_every is not None:
            target = min(target, _next_multiple(state.step_count, measure_every))
        if snapshot_every is not None:
            target = min(target, _next_multiple(state.step_count, snapshot_every))
        if checkpoint_every is not None:
            target = min(target, _next_multiple(state.step_count, checkpoint_every))
        advance(state, target - state.step_count, core=core)
        at = state.step_count
        if measure_every is not None and (at % measure_every == 0 or at == steps):
            do_measure()
        if snapshot_every is not None and (at % snapshot_every == 0 or at == steps):
            do_snapshot()
        if on_checkpoint is not None and (
            (checkpoint_every is not None and at % checkpoint_every == 0)
            or (halt_at is not None and at == stop)
        ):
            on_checkpoint(state)

    return RunResult(state=state, series=series, snapshots=snapshots)
