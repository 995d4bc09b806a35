import itertools

import numpy as np
import pytest

from corrlat import (
    BondCoupling,
    UniformCoupling,
    build_geometry,
    enumerate_distribution,
    exact_expectation,
    observable_marginal,
    transition_matrix,
)
from corrlat.errors import EnumerationTooLargeError, InvalidParamsError
from corrlat.oracle import config_from_index, index_of_config, observable_values

# frozen fixture: [2,2], J=1, beta=0.4 (verified against the in-test brute force)
EXPECTED_EW_22_BETA04 = -6.408670069765763

# frozen fixture generated by this oracle: [3,3], J=1, beta=0.5, marginal of U
U_MARGINAL_33_BETA05 = [
    0.3964717967908565,
    0.06535470833630032,
    0.020083622402211284,
    0.011347193469603367,
    0.006742679001028602,
    0.006742679001028601,
    0.011347193469603372,
    0.020083622402211284,
    0.06535470833630032,
    0.3964717967908565,
]


def brute_force_distribution(geo, coupling, beta):
    """Textual per-configuration enumeration with its own neighbor math."""
    m = geo.site_count
    bonds = []
    for site in range(m):
        nbrs = geo.neighbors(site)
        for slot in range(1, len(nbrs), 2):
            if coupling.kind == "uniform":
                bonds.append((site, nbrs[slot], coupling.j))
            else:
                bonds.append((site, nbrs[slot], coupling.bond_values[site, slot // 2]))
    ws = []
    for c in itertools.product((-1, 1), repeat=m):
        # itertools orders by the last site fastest; map onto bit order explicitly
        ws.append(-sum(j * c[a] * c[b] for a, b, j in bonds))
    ws = np.array(ws)
    weights = np.exp(-beta * (ws - ws.min()))
    p = weights / weights.sum()
    # reindex: tuple position k corresponds to site k as the bit
    idx = np.zeros(len(ws), dtype=int)
    for pos, c in enumerate(itertools.product((-1, 1), repeat=m)):
        idx[pos] = sum((1 << k) for k, v in enumerate(c) if v > 0)
    out_w = np.zeros_like(ws, dtype=float)
    out_p = np.zeros_like(p)
    out_w[idx] = ws
    out_p[idx] = p
    return out_w, out_p


def test_beta_zero_uniform():
    geo = build_geometry([2, 2])
    dist = enumerate_distribution(geo, UniformCoupling(1.0), 0.0)
    assert np.allclose(dist.probabilities, 1 / 16, atol=1e-15)


def test_large_beta_ground_states():
    geo = build_geometry([2, 2])
    dist = enumerate_distribution(geo, UniformCoupling(1.0), 10.0)
    p = dist.probabilities
    assert p[0] + p[15] > 0.999  # all -1 and all +1
    assert p[0] == pytest.approx(p[15], rel=1e-12)


def test_expectation_u_forced_by_symmetry():
    geo = build_geometry([3, 3])
    dist = enumerate_distribution(geo, UniformCoupling(1.0), 0.3)
    assert exact_expectation(dist, "U") == pytest.approx(4.5, abs=1e-12)


def test_expectation_m_zero_by_symmetry():
    geo = build_geometry([2, 3])
    for beta in (0.0, 0.5, 2.0):
        dist = enumerate_distribution(geo, UniformCoupling(1.0), beta)
        assert exact_expectation(dist, "m") == pytest.approx(0.0, abs=1e-13)


def test_u_marginal_binomial_at_beta_zero():
    geo = build_geometry([2, 2])
    values, masses = observable_marginal(
        enumerate_distribution(geo, UniformCoupling(1.0), 0.0), "U"
    )
    assert [int(v) for v in values] == [0, 1, 2, 3, 4]
    assert np.allclose(masses, np.array([1, 4, 6, 4, 1]) / 16, atol=1e-15)


def test_w_marginal_symmetric_support():
    geo = build_geometry([2, 2])
    values, masses = observable_marginal(
        enumerate_distribution(geo, UniformCoupling(1.0), 0.0), "W"
    )
    assert np.allclose(values, -values[::-1])
    assert masses.sum() == pytest.approx(1.0, abs=1e-12)


def test_frozen_u_marginal_fixture():
    geo = build_geometry([3, 3])
    values, masses = observable_marginal(
        enumerate_distribution(geo, UniformCoupling(1.0), 0.5), "U"
    )
    assert [int(v) for v in values] == list(range(10))
    assert np.allclose(masses, U_MARGINAL_33_BETA05, rtol=0, atol=1e-15)


def test_frozen_ew_fixture_and_brute_force():
    geo = build_geometry([2, 2])
    coup = UniformCoupling(1.0)
    dist = enumerate_distribution(geo, coup, 0.4)
    assert exact_expectation(dist, "W") == pytest.approx(EXPECTED_EW_22_BETA04, rel=1e-14)
    ws, ps = brute_force_distribution(geo, coup, 0.4)
    assert np.array_equal(ws, dist.w_values)
    assert np.allclose(ps, dist.probabilities, atol=1e-15)


def test_brute_force_agreement_per_bond():
    geo = build_geometry([2, 2, 2])
    coup = BondCoupling.random_interval(geo, -1.0, 1.5, seed=12)
    dist = enumerate_distribution(geo, coup, 0.7)
    ws, ps = brute_force_distribution(geo, coup, 0.7)
    assert np.allclose(ws, dist.w_values, rtol=1e-12)
    assert np.allclose(ps, dist.probabilities, atol=1e-14)


def test_normalization_and_flip_symmetry():
    geo = build_geometry([3, 3])
    dist = enumerate_distribution(geo, UniformCoupling(1.0), 0.8)
    assert abs(dist.probabilities.sum() - 1.0) < 1e-12
    full = (1 << geo.site_count) - 1
    for idx in (0, 3, 100, 300):
        assert dist.probabilities[idx] == pytest.approx(
            dist.probabilities[idx ^ full], rel=1e-12
        )


def test_enumeration_bound():
    with pytest.raises(EnumerationTooLargeError):
        enumerate_distribution(build_geometry([5, 5]), UniformCoupling(1.0), 1.0)


def test_transition_matrix_bound():
    with pytest.raises(EnumerationTooLargeError):
        transition_matrix(build_geometry([4, 4]), UniformCoupling(1.0), 1.0)


def test_transition_matrix_stochastic_and_stationary():
    geo = build_geometry([2, 2])
    coup = UniformCoupling(1.0)
    beta = 0.5
    matrix = transition_matrix(geo, coup, beta)
    assert np.allclose(matrix.sum(axis=1), 1.0, atol=1e-14)
    assert np.all(matrix >= 0)
    pi = enumerate_distribution(geo, coup, beta).probabilities
    assert np.max(np.abs(pi @ matrix - pi)) < 1e-12


def test_config_index_round_trip():
    geo = build_geometry([2, 3])
    for idx in range(1 << geo.site_count):
        assert index_of_config(config_from_index(geo, idx)) == idx


def test_observable_values_rejects_unknown():
    geo = build_geometry([2, 2])
    dist = enumerate_distribution(geo, UniformCoupling(1.0), 0.1)
    with pytest.raises(InvalidParamsError):
        observable_values(dist, "chi")
