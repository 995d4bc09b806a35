"""Periodic Cartesian lattice geometry and agent configurations.

Agents sit on the sites of a d-dimensional periodic lattice (d = 1, 2, 3)
and hold a state of +1 (participates in corruption activity) or -1 (does
not).  Sites are indexed row-major with the last axis fastest; every site
has exactly 2d neighbor slots ordered (-axis0, +axis0, -axis1, +axis1, ...).
Axes of length 2 wrap both offsets onto the same site and keep both slots,
so the local interaction is always a fixed 2d-term sum.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidGeometryError, InvalidParamsError, InvalidSiteError
from .rng import Xoshiro256pp

CORRUPT = 1
HONEST = -1

INIT_MODES = ("all_corrupt", "all_honest", "random")


class LatticeGeometry:
    """Immutable lattice geometry with a precomputed neighbor table.

    Attributes:
        lengths: sites per axis, as a tuple.
        ndim: number of axes, 1..3.
        site_count: product of lengths.
        neighbor_table: int32 array of shape (site_count, 2*ndim); column
            2a is the -axis-a neighbor, column 2a+1 the +axis-a neighbor.
    """

    def __init__(self, lengths):
        lengths = tuple(int(n) for n in lengths)
        if not 1 <= len(lengths) <= 3:
            raise InvalidGeometryError(
                f"need 1 to 3 axis lengths, got {len(lengths)}"
            )
        if any(n < 2 for n in lengths):
            raise InvalidGeometryError(
                f"every axis length must be >= 2, got {lengths}"
            )
        self.lengths = lengths
        self.ndim = len(lengths)
        self.site_count = int(np.prod(lengths))
        # row-major strides, last axis fastest
        strides = [1] * self.ndim
        for a in range(self.ndim - 2, -1, -1):
            strides[a] = strides[a + 1] * lengths[a + 1]
        self.strides = tuple(strides)
        self.neighbor_table = self._build_neighbor_table()
        self.neighbor_table.setflags(write=False)

    def _build_neighbor_table(self) -> np.ndarray:
        m = self.site_count
        table = np.empty((m, 2 * self.ndim), dtype=np.int32)
        sites = np.arange(m, dtype=np.int64)
        for a, (length, stride) in enumerate(zip(self.lengths, self.strides)):
            coord = (sites // stride) % length
            down = (coord - 1) % length
            up = (coord + 1) % length
            table[:, 2 * a] = sites + (down - coord) * stride
            table[:, 2 * a + 1] = sites + (up - coord) * stride
        return table

    def encode(self, coords) -> int:
        """Row-major site index of a coordinate tuple."""
        coords = tuple(coords)
        if len(coords) != self.ndim:
            raise InvalidSiteError(f"expected {self.ndim} coordinates, got {coords}")
        site = 0
        for c, length, stride in zip(coords, self.lengths, self.strides):
            if not 0 <= c < length:
                raise InvalidSiteError(f"coordinate {coords} outside lattice {self.lengths}")
            site += c * stride
        return site

    def decode(self, site: int) -> tuple:
        self.check_site(site)
        return tuple((site // s) % n for s, n in zip(self.strides, self.lengths))

    def check_site(self, site: int) -> None:
        if not 0 <= site < self.site_count:
            raise InvalidSiteError(
                f"site {site} outside [0, {self.site_count})"
            )

    def neighbors(self, site: int) -> list:
        """The 2d neighbor sites of ``site``, ordered (-x, +x, -y, +y, -z, +z)."""
        self.check_site(site)
        return [int(j) for j in self.neighbor_table[site]]

    def __eq__(self, other):
        return isinstance(other, LatticeGeometry) and other.lengths == self.lengths

    def __hash__(self):
        return hash(self.lengths)

    def __repr__(self):
        return f"LatticeGeometry({list(self.lengths)})"


def build_geometry(lengths) -> LatticeGeometry:
    return LatticeGeometry(lengths)


def check_configuration(geometry: LatticeGeometry, states: np.ndarray) -> None:
    """Validate that ``states`` is a legal configuration for ``geometry``."""
    if states.shape != (geometry.site_count,):
        raise InvalidParamsError(
            f"configuration has shape {states.shape}, expected ({geometry.site_count},)"
        )
    if not np.all(np.abs(states) == 1):
        raise InvalidParamsError("configuration entries must be exactly +1 or -1")


def init_configuration(
    geometry: LatticeGeometry,
    mode: str,
    rng: Xoshiro256pp | None = None,
    p_corrupt: float = 0.5,
) -> np.ndarray:
    """Build an initial configuration (int8 array of +1/-1 site states).

    ``random`` mode sets each site to +1 with probability ``p_corrupt``,
    consuming exactly one uniform draw per site in site order.
    """
    m = geometry.site_count
    if mode == "all_corrupt":
        return np.full(m, CORRUPT, dtype=np.int8)
    if mode == "all_honest":
        return np.full(m, HONEST, dtype=np.int8)
    if mode == "random":
        if not 0.0 <= p_corrupt <= 1.0:
            raise InvalidParamsError(f"p_corrupt must be in [0, 1], got {p_corrupt}")
        if rng is None:
            raise InvalidParamsError("random initialization requires an rng")
        states = np.empty(m, dtype=np.int8)
        for i in range(m):
            states[i] = CORRUPT if rng.uniform() < p_corrupt else HONEST
        return states
    raise InvalidParamsError(f"unknown init mode {mode!r}; expected one of {INIT_MODES}")
