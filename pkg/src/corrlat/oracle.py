"""Exact Boltzmann enumeration for small lattices.

Ground truth for sampler verification: enumerates all 2^M configurations,
computes the stationary distribution p(c) proportional to exp(-beta W(c)),
pushes it forward onto observables, and builds the explicit one-step
transition matrix of the random-site Metropolis kernel.

Configuration index encoding: bit k of the index is site k's state, with a
set bit meaning +1 (corrupt).  The objective is evaluated over the same
bond list used by ``model.total_objective``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationTooLargeError, InvalidParamsError
from .lattice import LatticeGeometry
from .model import bond_list
from .sampler import acceptance_probability

ENUMERATION_MAX_SITES = 24
TRANSITION_MATRIX_MAX_SITES = 12

OBSERVABLES = ("U", "W", "m")

_CHUNK = 1 << 20


@dataclass(frozen=True)
class ExactDistribution:
    geometry: LatticeGeometry
    coupling: object
    beta: float
    probabilities: np.ndarray = field(repr=False)  # indexed by configuration bits
    w_values: np.ndarray = field(repr=False)


def config_from_index(geometry: LatticeGeometry, index: int) -> np.ndarray:
    """Decode a configuration index into an int8 state array."""
    m = geometry.site_count
    bits = (index >> np.arange(m)) & 1
    return (2 * bits - 1).astype(np.int8)


def index_of_config(states: np.ndarray) -> int:
    bits = (states > 0).astype(np.uint64)
    return int((bits << np.arange(states.shape[0], dtype=np.uint64)).sum())


def _all_objectives(geometry: LatticeGeometry, coupling) -> np.ndarray:
    """Bond-once objective W for every configuration index, in chunks."""
    m = geometry.site_count
    i_idx, j_idx, strengths = bond_list(geometry, coupling)
    n_configs = 1 << m
    w = np.empty(n_configs, dtype=np.float64)
    for start in range(0, n_configs, _CHUNK):
        stop = min(start + _CHUNK, n_configs)
        ns = np.arange(start, stop, dtype=np.uint32)
        acc = np.zeros(stop - start, dtype=np.float64)
        for i, j, s in zip(i_idx, j_idx, strengths):
            anti = ((ns >> np.uint32(i)) ^ (ns >> np.uint32(j))) & np.uint32(1)
            # c_i * c_j = 1 - 2*anti, and each bond contributes -J_ij c_i c_j
            acc += s * (2.0 * anti - 1.0)
        w[start:stop] = acc
    return w


def _check_enumerable(geometry: LatticeGeometry, bound: int) -> None:
    if geometry.site_count > bound:
        raise EnumerationTooLargeError(
            f"{geometry.site_count} sites exceeds the enumeration bound {bound}"
        )


def enumerate_distribution(geometry: LatticeGeometry, coupling, beta: float) -> ExactDistribution:
    """Exact stationary distribution p(c) ~ exp(-beta W(c)) over all 2^M configs."""
    _check_enumerable(geometry, ENUMERATION_MAX_SITES)
    w = _all_objectives(geometry, coupling)
    # subtract the minimum before exponentiating to keep weights in range
    weights = np.exp(-beta * (w - w.min()))
    probabilities = weights / weights.sum()
    return ExactDistribution(
        geometry=geometry,
        coupling=coupling,
        beta=float(beta),
        probabilities=probabilities,
        w_values=w,
    )


def observable_values(dist: ExactDistribution, observable: str) -> np.ndarray:
    """Per-configuration values of an observable, indexed like probabilities."""
    m = dist.geometry.site_count
    if observable == "W":
        return dist.w_values
    ns = np.arange(1 << m, dtype=np.uint32)
    u = np.bitwise_count(ns).astype(np.float64)
    if observable == "U":
        return u
    if observable == "m":
        return (2.0 * u - m) / m
    raise InvalidParamsError(
        f"unknown observable {observable!r}; expected one of {OBSERVABLES}"
    )


def observable_marginal(dist: ExactDistribution, observable: str):
    """Exact pushforward of the distribution onto one observable.

    Returns ``(values, masses)`` with values ascending and masses summing
    to 1 (up to roundoff).
    """
    vals = observable_values(dist, observable)
    values, inverse = np.unique(vals, return_inverse=True)
    masses = np.zeros(values.shape[0])
    np.add.at(masses, inverse, dist.probabilities)
    return values, masses


def exact_expectation(dist: ExactDistribution, observable: str) -> float:
    vals = observable_values(dist, observable)
    return float(np.dot(vals, dist.probabilities))


def transition_matrix(geometry: LatticeGeometry, coupling, beta: float) -> np.ndarray:
    """One-step transition matrix of the random-site Metropolis kernel.

    Row c holds P(c -> c'); single-flip entries are acceptance/M using the
    implemented acceptance rule, the diagonal absorbs the rest.
    """
    _check_enumerable(geometry, TRANSITION_MATRIX_MAX_SITES)
    m = geometry.site_count
    w = _all_objectives(geometry, coupling)
    n_configs = 1 << m
    matrix = np.zeros((n_configs, n_configs))
    for c in range(n_configs):
        for k in range(m):
            c2 = c ^ (1 << k)
            dw = w[c2] - w[c]
            matrix[c, c2] = acceptance_probability(dw, beta) / m
        matrix[c, c] = 1.0 - matrix[c].sum()
    return matrix
