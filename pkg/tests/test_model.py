import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrlat import (
    BondCoupling,
    UniformCoupling,
    build_geometry,
    flip_delta,
    init_configuration,
    local_term,
    total_objective,
)
from corrlat.errors import InvalidParamsError
from corrlat.model import bond_list, convention_factor
from corrlat.rng import Xoshiro256pp


def checkerboard(geo):
    states = np.empty(geo.site_count, dtype=np.int8)
    for site in range(geo.site_count):
        states[site] = 1 if sum(geo.decode(site)) % 2 == 0 else -1
    return states


def random_config(geo, seed):
    return init_configuration(geo, "random", Xoshiro256pp(seed))


def brute_force_w(geo, states, coupling):
    """Textual bond-by-bond summation, independent of the vectorized path."""
    w = 0.0
    for site in range(geo.site_count):
        for slot, j in enumerate(geo.neighbors(site)):
            if slot % 2 == 1:  # positive-direction slots enumerate each bond once
                if coupling.kind == "uniform":
                    strength = coupling.j
                else:
                    strength = coupling.bond_values[site, slot // 2]
                w -= strength * states[site] * states[j]
    return w


# --- local_term -------------------------------------------------------------


def test_local_term_aligned():
    geo = build_geometry([3, 3, 3])
    states = np.ones(27, dtype=np.int8)
    assert local_term(geo, states, UniformCoupling(1.0), 13) == -6.0


def test_local_term_checkerboard():
    geo = build_geometry([4, 4])
    states = checkerboard(geo)
    for site in (0, 5, 15):
        assert local_term(geo, states, UniformCoupling(1.0), site) == 4.0


def test_local_term_per_bond_matches_slot_sum():
    geo = build_geometry([3, 3])
    coupling = BondCoupling.random_sign(geo, 1.0, seed=17)
    states = random_config(geo, 3)
    for site in range(geo.site_count):
        expected = 0.0
        for slot, j in enumerate(geo.neighbors(site)):
            expected -= coupling.slot_values[site, slot] * states[site] * states[j]
        assert local_term(geo, states, coupling, site) == pytest.approx(expected, rel=1e-14)


# --- total_objective ---------------------------------------------------------


def test_objective_ground_state():
    geo = build_geometry([3, 3, 3])
    states = np.ones(27, dtype=np.int8)
    assert total_objective(geo, states, UniformCoupling(1.0)) == -81.0


def test_objective_checkerboard():
    geo = build_geometry([4, 4])
    assert total_objective(geo, checkerboard(geo), UniformCoupling(1.0)) == 32.0


def test_objective_matches_bond_enumeration_oracle():
    geo = build_geometry([3, 3, 3])
    coupling = UniformCoupling(1.0)
    for seed in range(100):
        states = random_config(geo, seed)
        assert total_objective(geo, states, coupling) == brute_force_w(geo, states, coupling)


def test_objective_per_bond_matches_oracle():
    geo = build_geometry([2, 3, 2])
    coupling = BondCoupling.random_interval(geo, -1.5, 2.0, seed=8)
    for seed in range(30):
        states = random_config(geo, seed)
        assert total_objective(geo, states, coupling) == pytest.approx(
            brute_force_w(geo, states, coupling), rel=1e-12
        )


def test_objective_is_half_of_phi_sum():
    geo = build_geometry([3, 3])
    coupling = BondCoupling.random_sign(geo, 1.0, seed=2)
    states = random_config(geo, 12)
    phi_sum = sum(local_term(geo, states, coupling, i) for i in range(geo.site_count))
    assert phi_sum == pytest.approx(2.0 * total_objective(geo, states, coupling), rel=1e-12)


# --- flip_delta ---------------------------------------------------------------


def test_flip_delta_aligned():
    geo = build_geometry([3, 3, 3])
    states = np.ones(27, dtype=np.int8)
    for site in (0, 13, 26):
        assert flip_delta(geo, states, UniformCoupling(1.0), site) == 12.0
        assert flip_delta(geo, states, UniformCoupling(-1.0), site) == -12.0


@pytest.mark.parametrize("coupling_seed", [None, 21])
def test_flip_delta_equals_full_recompute(coupling_seed):
    geo = build_geometry([4, 4, 4])
    if coupling_seed is None:
        coupling = UniformCoupling(1.0)
    else:
        coupling = BondCoupling.random_interval(geo, -1.0, 1.0, seed=coupling_seed)
    rng = Xoshiro256pp(100)
    for _ in range(1000):
        states = init_configuration(geo, "random", rng)
        site = rng.uniform_index(geo.site_count)
        before = total_objective(geo, states, coupling)
        delta = flip_delta(geo, states, coupling, site)
        states[site] = -states[site]
        after = total_objective(geo, states, coupling)
        if coupling_seed is None:
            assert delta == after - before  # exact for integer J
        else:
            assert delta == pytest.approx(after - before, rel=1e-12, abs=1e-12)


# --- invariants ----------------------------------------------------------------


@given(st.integers(min_value=0, max_value=2**16))
@settings(max_examples=60, deadline=None)
def test_global_flip_symmetry(bits):
    geo = build_geometry([4, 4])
    states = np.array([1 if (bits >> k) & 1 else -1 for k in range(16)], dtype=np.int8)
    for coupling in (UniformCoupling(1.0), BondCoupling.random_sign(geo, 1.0, seed=5)):
        assert total_objective(geo, states, coupling) == total_objective(
            geo, -states, coupling
        )


def test_objective_bound():
    geo = build_geometry([3, 3])
    coupling = BondCoupling.random_interval(geo, -2.0, 2.0, seed=3)
    _, _, strengths = bond_list(geo, coupling)
    bound = np.abs(strengths).sum()
    for seed in range(20):
        states = random_config(geo, seed)
        assert abs(total_objective(geo, states, coupling)) <= bound + 1e-12
    # equality at the aligned configuration for ferromagnetic J
    ones = np.ones(geo.site_count, dtype=np.int8)
    uniform = UniformCoupling(1.0)
    _, _, s_uni = bond_list(geo, uniform)
    assert total_objective(geo, ones, uniform) == -np.abs(s_uni).sum()


def test_translation_invariance_uniform():
    geo = build_geometry([4, 4])
    coupling = UniformCoupling(1.0)
    states = random_config(geo, 44)
    grid = states.reshape(4, 4)
    for shift in ((1, 0), (0, 2), (3, 3)):
        rolled = np.roll(grid, shift, axis=(0, 1)).reshape(-1)
        assert total_objective(geo, rolled, coupling) == total_objective(
            geo, states, coupling
        )


# --- coupling construction ------------------------------------------------------


def test_bond_coupling_symmetric_slots():
    geo = build_geometry([3, 3, 3])
    coupling = BondCoupling.random_sign(geo, 1.0, seed=1)
    # J_ij = J_ji: the slot view agrees across each bond's two endpoints
    for i in range(geo.site_count):
        for a in range(geo.ndim):
            j = geo.neighbor_table[i, 2 * a + 1]
            assert coupling.slot_values[i, 2 * a + 1] == coupling.slot_values[j, 2 * a]


def test_bond_coupling_counts():
    geo = build_geometry([2, 2])
    coupling = BondCoupling.random_sign(geo, 1.0, seed=9)
    _, _, strengths = bond_list(geo, coupling)
    assert strengths.shape == (geo.ndim * geo.site_count,)  # doubled bonds included
    assert set(np.unique(coupling.bond_values)) <= {-1.0, 1.0}


def test_bond_coupling_quenched_and_seeded():
    geo = build_geometry([3, 3])
    a = BondCoupling.random_interval(geo, -1.0, 1.0, seed=7)
    b = BondCoupling.random_interval(geo, -1.0, 1.0, seed=7)
    c = BondCoupling.random_interval(geo, -1.0, 1.0, seed=8)
    assert np.array_equal(a.bond_values, b.bond_values)
    assert not np.array_equal(a.bond_values, c.bond_values)
    assert np.all((a.bond_values >= -1.0) & (a.bond_values < 1.0))


def test_bond_coupling_rejects_bad_shape():
    geo = build_geometry([3, 3])
    with pytest.raises(InvalidParamsError):
        BondCoupling(geo, np.ones((9, 3)))
    with pytest.raises(InvalidParamsError):
        BondCoupling.random_interval(geo, 2.0, 1.0, seed=0)


def test_convention_factor():
    assert convention_factor("bond_once") == 1.0
    assert convention_factor("literal") == 2.0
    with pytest.raises(InvalidParamsError):
        convention_factor("thrice")
