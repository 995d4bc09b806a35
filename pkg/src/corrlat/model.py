"""Social-interaction objective and coupling models.

The objective of a configuration is summed once per unordered lattice bond:

    W = - sum over bonds (i, j) of J_ij * c_i * c_j

There are d*M bonds (axes of length 2 contribute doubled bonds, one per
neighbor-slot pair).  Summing the per-site terms phi_i instead counts every
bond twice; callers wanting that doubled value scale W and the flip change
by 2 through the ``objective_convention = literal`` run switch, which also
feeds the doubled change into the acceptance rule.

Couplings are either a single uniform strength J (conformist interaction
for J > 0) or one quenched strength per bond, the spin-glass variant.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParamsError
from .lattice import LatticeGeometry, check_configuration
from .rng import Xoshiro256pp

CONVENTIONS = ("bond_once", "literal")


def convention_factor(name: str) -> float:
    if name == "bond_once":
        return 1.0
    if name == "literal":
        return 2.0
    raise InvalidParamsError(
        f"unknown objective convention {name!r}; expected one of {CONVENTIONS}"
    )


class UniformCoupling:
    """Single interaction strength J shared by every bond."""

    kind = "uniform"

    def __init__(self, j: float = 1.0):
        j = float(j)
        if not np.isfinite(j):
            raise InvalidParamsError(f"coupling J must be finite, got {j}")
        self.j = j

    def slot_couplings(self, geometry: LatticeGeometry) -> np.ndarray:
        return np.full((geometry.site_count, 2 * geometry.ndim), self.j)

    def describe(self) -> str:
        return f"uniform J={self.j!r}"


class BondCoupling:
    """One quenched strength per bond, held fixed for the whole run.

    ``bond_values[i, a]`` is the strength of the bond leaving site ``i`` in
    the +axis-a direction; every bond is stored exactly once this way.  The
    derived ``slot_values`` view repeats each strength on both of its
    neighbor slots so that J_ij = J_ji by construction.
    """

    kind = "per_bond"

    def __init__(self, geometry: LatticeGeometry, bond_values: np.ndarray):
        bond_values = np.asarray(bond_values, dtype=np.float64)
        expected = (geometry.site_count, geometry.ndim)
        if bond_values.shape != expected:
            raise InvalidParamsError(
                f"bond values must have shape {expected}, got {bond_values.shape}"
            )
        if not np.all(np.isfinite(bond_values)):
            raise InvalidParamsError("bond values must be finite")
        self.geometry = geometry
        self.bond_values = bond_values
        self.slot_values = self._build_slot_view()
        self.bond_values.setflags(write=False)
        self.slot_values.setflags(write=False)
        self._source = "explicit"

    def _build_slot_view(self) -> np.ndarray:
        geo = self.geometry
        slots = np.empty((geo.site_count, 2 * geo.ndim), dtype=np.float64)
        for a in range(geo.ndim):
            plus_nbr = geo.neighbor_table[:, 2 * a + 1]
            slots[:, 2 * a + 1] = self.bond_values[:, a]
            # site j's -axis slot sees the bond coming from i: J_ij = J_ji
            slots[plus_nbr, 2 * a] = self.bond_values[:, a]
        return slots

    @classmethod
    def random_sign(cls, geometry: LatticeGeometry, j: float, seed: int) -> "BondCoupling":
        """Quenched +-J disorder, each sign with probability 1/2.

        Draws one uniform real per bond, site-major then axis order.
        """
        rng = Xoshiro256pp(seed)
        j = float(j)
        values = np.empty((geometry.site_count, geometry.ndim))
        for i in range(geometry.site_count):
            for a in range(geometry.ndim):
                values[i, a] = j if rng.uniform() < 0.5 else -j
        coupling = cls(geometry, values)
        coupling._source = f"pm J={j!r} disorder_seed={seed}"
        return coupling

    @classmethod
    def random_interval(
        cls, geometry: LatticeGeometry, low: float, high: float, seed: int
    ) -> "BondCoupling":
        """Quenched disorder uniform on [low, high), one draw per bond."""
        low, high = float(low), float(high)
        if not low < high:
            raise InvalidParamsError(f"need low < high, got [{low}, {high})")
        rng = Xoshiro256pp(seed)
        values = np.empty((geometry.site_count, geometry.ndim))
        for i in range(geometry.site_count):
            for a in range(geometry.ndim):
                values[i, a] = low + (high - low) * rng.uniform()
        coupling = cls(geometry, values)
        coupling._source = f"interval [{low!r},{high!r}) disorder_seed={seed}"
        return coupling

    def describe(self) -> str:
        return f"per_bond {self._source}"


def bond_list(geometry: LatticeGeometry, coupling) -> tuple:
    """All d*M bonds as parallel arrays (site_i, site_j, strength).

    Each unordered bond appears exactly once, enumerated by site then
    positive axis direction; length-2 axes yield their doubled bonds.
    """
    sites = np.arange(geometry.site_count, dtype=np.int64)
    i_idx = np.tile(sites, geometry.ndim)
    j_idx = np.concatenate(
        [geometry.neighbor_table[:, 2 * a + 1] for a in range(geometry.ndim)]
    ).astype(np.int64)
    if coupling.kind == "uniform":
        strengths = np.full(i_idx.shape, coupling.j)
    else:
        strengths = np.concatenate(
            [coupling.bond_values[:, a] for a in range(geometry.ndim)]
        )
    return i_idx, j_idx, strengths


def local_term(geometry: LatticeGeometry, states: np.ndarray, coupling, site: int) -> float:
    """phi_i = -sum over the 2d neighbor slots j of J_ij * c_i * c_j."""
    geometry.check_site(site)
    row = geometry.neighbor_table[site]
    ck = int(states[site])
    if coupling.kind == "uniform":
        ssum = 0
        for j in row:
            ssum += int(states[j])
        return -coupling.j * (ck * ssum)
    slot_j = coupling.slot_values[site]
    h = 0.0
    for t in range(row.shape[0]):
        h += slot_j[t] * int(states[row[t]])
    return -ck * h


def total_objective(geometry: LatticeGeometry, states: np.ndarray, coupling) -> float:
    """Objective W summed once per bond (half of the literal sum of phi_i)."""
    check_configuration(geometry, states)
    i_idx, j_idx, strengths = bond_list(geometry, coupling)
    prod = states[i_idx].astype(np.float64) * states[j_idx]
    return float(-(strengths * prod).sum())


def flip_delta(geometry: LatticeGeometry, states: np.ndarray, coupling, site: int) -> float:
    """Change of W when site's state is flipped: 2 c_k sum_j J_kj c_j.

    Evaluated in the stepping kernels' arithmetic order, so it reproduces
    their accept/reject decisions exactly.
    """
    geometry.check_site(site)
    row = geometry.neighbor_table[site]
    ck = int(states[site])
    if coupling.kind == "uniform":
        ssum = 0
        for j in row:
            ssum += int(states[j])
        return (2.0 * coupling.j) * (ck * ssum)
    slot_j = coupling.slot_values[site]
    h = 0.0
    for t in range(row.shape[0]):
        h += slot_j[t] * int(states[row[t]])
    return 2.0 * ck * h
