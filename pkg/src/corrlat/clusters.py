"""Connected clusters of corrupt agents.

A cluster is a maximal set of corrupt (+1) sites connected through the
same nearest-neighbor adjacency that drives the dynamics (2d neighbors,
periodic wrap).  Honest sites carry no label.  Cluster statistics are the
model's measure of the scale of corruption.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import InvalidParamsError
from .lattice import LatticeGeometry, check_configuration


@dataclass(frozen=True)
class ClusterReport:
    n_clusters: int
    sizes: np.ndarray = field(repr=False)  # size of cluster id k at index k
    largest: int
    mean_size: float
    size_weighted_mean: float

    @property
    def total_corrupt(self) -> int:
        return int(self.sizes.sum())


def label_clusters(geometry: LatticeGeometry, states: np.ndarray, core=None) -> np.ndarray:
    """Label corrupt sites with cluster ids 0..n-1; honest sites get -1.

    Ids are canonical: assigned in order of each cluster's smallest member
    site index, so labelings are comparable across cores and runs.
    """
    check_configuration(geometry, states)
    impl = core if core is not None else _core
    labels, _ = impl.label_corrupt(states, geometry.neighbor_table)
    return labels


def report(labeling: np.ndarray) -> ClusterReport:
    """Aggregate a labeling into cluster statistics."""
    labeled = labeling[labeling >= 0]
    if labeled.size == 0:
        return ClusterReport(
            n_clusters=0,
            sizes=np.zeros(0, dtype=np.int64),
            largest=0,
            mean_size=0.0,
            size_weighted_mean=0.0,
        )
    sizes = np.bincount(labeled).astype(np.int64)
    total = int(sizes.sum())
    return ClusterReport(
        n_clusters=int(sizes.size),
        sizes=sizes,
        largest=int(sizes.max()),
        mean_size=total / sizes.size,
        size_weighted_mean=float((sizes.astype(np.float64) ** 2).sum() / total),
    )


def size_histogram(rep: ClusterReport, bins: int):
    """Histogram of cluster sizes over [1, largest]; counts sum to n_clusters."""
    if bins < 1:
        raise InvalidParamsError(f"bins must be >= 1, got {bins}")
    if rep.n_clusters == 0:
        counts, edges = np.histogram(np.zeros(0), bins=bins, range=(1.0, 2.0))
        return counts, edges
    hi = max(rep.largest, 1)
    counts, edges = np.histogram(rep.sizes, bins=bins, range=(1.0, float(hi) if hi > 1 else 2.0))
    return counts, edges
