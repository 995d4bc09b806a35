"""Scalar observables and the measurement time series.

Total profit U counts the corrupt agents (equals the sum of positive
states under the +-1 encoding); the mean state m = (2U - M) / M is the
order parameter separating the widespread-corruption regime from the
fragmented one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError


@dataclass(frozen=True)
class Measurement:
    step: int
    w: float
    u: int
    m: float


class TimeSeries:
    """Append-only measurement series with strictly increasing steps."""

    def __init__(self):
        self.steps: list[int] = []
        self.w: list[float] = []
        self.u: list[int] = []
        self.m: list[float] = []

    def append(self, meas: Measurement) -> None:
        if self.steps and meas.step <= self.steps[-1]:
            raise ContractViolationError(
                f"measurement step {meas.step} not after previous {self.steps[-1]}"
            )
        self.steps.append(meas.step)
        self.w.append(meas.w)
        self.u.append(meas.u)
        self.m.append(meas.m)

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i: int) -> Measurement:
        return Measurement(self.steps[i], self.w[i], self.u[i], self.m[i])

    def __iter__(self):
        for i in range(len(self.steps)):
            yield self[i]


def total_profit(states: np.ndarray) -> int:
    """Number of corrupt agents, U."""
    return int(np.count_nonzero(states == 1))


def mean_state(states: np.ndarray) -> float:
    """Mean agent state, sum(c_i) / M."""
    m = states.shape[0]
    return (2 * total_profit(states) - m) / m


def record(series: TimeSeries, state) -> Measurement:
    """Append a measurement of a chain state, using its running objective."""
    u = total_profit(state.states)
    m = state.geometry.site_count
    meas = Measurement(
        step=state.step_count,
        w=state.params.convention_scale * state.w,
        u=u,
        m=(2 * u - m) / m,
    )
    series.append(meas)
    return meas
