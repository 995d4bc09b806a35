"""Metropolis Monte Carlo simulator for corruption activity on periodic lattices.

Agents on a periodic Cartesian lattice (d = 1..3) decide between
participating in corruption (+1) and abstaining (-1).  Single-flip
Metropolis dynamics drive the social-interaction objective W; temperature
sets the social-economic activity level.  The package bundles the chain
engine (compiled kernel with a pure-Python fallback), scalar observables,
cluster statistics of corrupt agents, an exact-enumeration oracle for
small lattices, and a batch CLI.
"""

from ._core import CORE_NAME
from .lattice import LatticeGeometry, build_geometry, init_configuration
from .model import (
    BondCoupling,
    UniformCoupling,
    flip_delta,
    local_term,
    total_objective,
)
from .observables import Measurement, TimeSeries, mean_state, record, total_profit
from .clusters import ClusterReport, label_clusters, report, size_histogram
from .oracle import (
    ExactDistribution,
    enumerate_distribution,
    exact_expectation,
    observable_marginal,
    transition_matrix,
)
from .rng import Xoshiro256pp
from .sampler import (
    ChainParams,
    ChainState,
    RunResult,
    StepOutcome,
    acceptance_probability,
    metropolis_step,
    new_chain,
    run_chain,
)

__version__ = "0.1.0"

__all__ = [
    "CORE_NAME",
    "BondCoupling",
    "ChainParams",
    "ChainState",
    "ClusterReport",
    "ExactDistribution",
    "LatticeGeometry",
    "Measurement",
    "RunResult",
    "StepOutcome",
    "TimeSeries",
    "UniformCoupling",
    "Xoshiro256pp",
    "acceptance_probability",
    "build_geometry",
    "enumerate_distribution",
    "exact_expectation",
    "flip_delta",
    "init_configuration",
    "label_clusters",
    "local_term",
    "mean_state",
    "metropolis_step",
    "new_chain",
    "observable_marginal",
    "record",
    "report",
    "run_chain",
    "size_histogram",
    "total_objective",
    "total_profit",
    "transition_matrix",
]
