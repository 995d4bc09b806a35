import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrlat import build_geometry, init_configuration
from corrlat.errors import InvalidGeometryError, InvalidParamsError, InvalidSiteError
from corrlat.rng import Xoshiro256pp


def test_full_scale_geometry():
    geo = build_geometry([60, 60, 60])
    assert geo.site_count == 216000
    assert geo.neighbor_table.shape == (216000, 6)


def test_small_geometry_product():
    assert build_geometry([2, 2]).site_count == 4


@pytest.mark.parametrize(
    "lengths",
    [[], [3, 1, 3], [1], [2, 2, 2, 2], [0, 4]],
)
def test_rejected_geometries(lengths):
    with pytest.raises(InvalidGeometryError):
        build_geometry(lengths)


def test_neighbors_periodic_wrap_origin():
    geo = build_geometry([3, 3, 3])
    site = geo.encode((0, 0, 0))
    coords = [geo.decode(j) for j in geo.neighbors(site)]
    # order is (-x, +x, -y, +y, -z, +z)
    assert coords == [(2, 0, 0), (1, 0, 0), (0, 2, 0), (0, 1, 0), (0, 0, 2), (0, 0, 1)]


def test_neighbors_length_two_multiset():
    geo = build_geometry([2])
    assert geo.neighbors(0) == [1, 1]
    assert geo.neighbors(1) == [0, 0]


def test_neighbors_interior_site():
    geo = build_geometry([4, 4])
    site = geo.encode((1, 1))
    coords = {geo.decode(j) for j in geo.neighbors(site)}
    assert coords == {(0, 1), (2, 1), (1, 0), (1, 2)}


def test_neighbors_out_of_range():
    geo = build_geometry([3, 3])
    with pytest.raises(InvalidSiteError):
        geo.neighbors(9)
    with pytest.raises(InvalidSiteError):
        geo.neighbors(-1)


@given(
    st.lists(st.integers(min_value=2, max_value=21), min_size=1, max_size=3).filter(
        lambda ls: np.prod(ls) <= 10_000
    )
)
@settings(max_examples=40, deadline=None)
def test_encode_decode_round_trip(lengths):
    geo = build_geometry(lengths)
    for site in range(geo.site_count):
        assert geo.encode(geo.decode(site)) == site


@pytest.mark.parametrize("lengths", [[2], [2, 2], [3, 3], [2, 2, 2], [3, 3, 3]])
def test_neighbor_symmetry_with_multiplicity(lengths):
    geo = build_geometry(lengths)
    for i in range(geo.site_count):
        for j in set(geo.neighbors(i)):
            assert geo.neighbors(i).count(j) == geo.neighbors(j).count(i)


@pytest.mark.parametrize("lengths", [[2], [5], [2, 2], [4, 6], [2, 3, 4], [3, 3, 3]])
def test_total_neighbor_slots(lengths):
    geo = build_geometry(lengths)
    total = sum(len(geo.neighbors(i)) for i in range(geo.site_count))
    assert total == 2 * geo.ndim * geo.site_count


def test_init_all_corrupt():
    geo = build_geometry([2, 2, 2])
    states = init_configuration(geo, "all_corrupt")
    assert states.dtype == np.int8
    assert np.all(states == 1) and states.shape == (8,)


def test_init_all_honest():
    states = init_configuration(build_geometry([2, 2]), "all_honest")
    assert np.all(states == -1) and states.shape == (4,)


def test_init_random_deterministic():
    geo = build_geometry([3, 3])
    a = init_configuration(geo, "random", Xoshiro256pp(42))
    b = init_configuration(geo, "random", Xoshiro256pp(42))
    assert np.array_equal(a, b)
    assert set(np.unique(a)) <= {-1, 1}


def test_init_random_fraction_matches_probability():
    # 10^4 seeded Bernoulli draws: corrupt fraction within 0.02 of 0.5
    geo = build_geometry([100, 100])
    states = init_configuration(geo, "random", Xoshiro256pp(42), p_corrupt=0.5)
    frac = np.count_nonzero(states == 1) / geo.site_count
    assert abs(frac - 0.5) < 0.02


def test_init_random_draw_accounting():
    # exactly one uniform draw per site, in site order
    geo = build_geometry([4, 4])
    ref_rng = Xoshiro256pp(5)
    expected = np.array(
        [1 if ref_rng.uniform() < 0.25 else -1 for _ in range(16)], dtype=np.int8
    )
    rng = Xoshiro256pp(5)
    states = init_configuration(geo, "random", rng, p_corrupt=0.25)
    assert np.array_equal(states, expected)
    assert rng.state == ref_rng.state


def test_init_rejects_bad_params():
    geo = build_geometry([2, 2])
    with pytest.raises(InvalidParamsError):
        init_configuration(geo, "random", Xoshiro256pp(0), p_corrupt=1.5)
    with pytest.raises(InvalidParamsError):
        init_configuration(geo, "mostly_corrupt", Xoshiro256pp(0))
    with pytest.raises(InvalidParamsError):
        init_configuration(geo, "random", None)
