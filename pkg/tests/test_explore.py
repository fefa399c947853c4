"""Exploration engine: sphere sizes against independent oracles, table
structure invariants, axes, budgets."""

import random

import pytest

from endslab.errors import BudgetExceeded, InvalidParameter, NoAxis
from endslab.explore import build_axis, explore, sphere_size_series, sphere_sizes
from endslab.groups import make_group

from oracles import free_sphere_count, l1_sphere_count, lamplighter2_sphere_counts


def test_z_line_spheres(z_table_30):
    assert all(z_table_30.sphere_size(r) == 2 for r in range(1, 31))
    assert z_table_30.ball_size(30) == 61


def test_z_pow2_spheres_vs_enumeration(z2_table_22):
    for r in range(9):
        assert z2_table_22.sphere_size(r) == l1_sphere_count(2, r)
    for r in range(1, 23):
        assert z2_table_22.sphere_size(r) == 4 * r


def test_z_pow3_spheres_vs_enumeration():
    table = explore(make_group({"family": "z_pow", "k": 3}), 6)
    for r in range(7):
        assert table.sphere_size(r) == l1_sphere_count(3, r)


def test_free2_spheres_vs_enumeration(f2_table_8):
    for r in range(6):
        assert f2_table_8.sphere_size(r) == free_sphere_count(2, r)
    for r in range(1, 9):
        assert f2_table_8.sphere_size(r) == 4 * 3 ** (r - 1)


def test_dihedral_is_a_line(dihedral_oracle):
    table = explore(dihedral_oracle, 100)
    assert all(table.sphere_size(r) == 2 for r in range(1, 101))


def test_lamplighter_spheres_vs_counting(lamp_oracle):
    table = explore(lamp_oracle, 12)
    expected = lamplighter2_sphere_counts(12)
    assert [table.sphere_size(r) for r in range(13)] == expected


def test_finite_group_completes():
    table = explore(make_group({"family": "cyclic_finite", "m": 5}), 10)
    assert table.complete_group
    assert table.ball_size(10) == 5
    assert sphere_sizes(table) == [(0, 1), (1, 2), (2, 2)] + [(r, 0) for r in range(3, 11)]


def test_product_matches_builtin_cross():
    prod = explore(make_group({"family": "product", "left": {"family": "z"},
                               "right": {"family": "cyclic_finite", "m": 3}}), 8)
    cross = explore(make_group({"family": "z_cross_cyclic", "m": 3}), 8)
    assert [prod.sphere_size(r) for r in range(9)] == [cross.sphere_size(r) for r in range(9)]


@pytest.mark.parametrize("spec,radius", [
    ({"family": "z"}, 40),
    ({"family": "z_pow", "k": 2}, 12),
    ({"family": "free", "k": 2}, 6),
    ({"family": "dihedral_inf"}, 40),
    ({"family": "z_cross_cyclic", "m": 5}, 10),
    ({"family": "lamplighter", "m": 2}, 10),
    ({"family": "lamplighter", "m": 3}, 8),
    ({"family": "cyclic_finite", "m": 12}, 9),
    ({"family": "trivial"}, 4),
], ids=str)
def test_lean_series_matches_full_tables(spec, radius):
    oracle = make_group(spec)
    table = explore(oracle, radius)
    series = sphere_size_series(oracle, radius)
    assert [series.sphere(r) for r in range(radius + 1)] == \
        [table.sphere_size(r) for r in range(radius + 1)]
    assert series.nodes == table.size


def test_layer_property(z2_table_22, f2_table_8):
    for table in (z2_table_22, f2_table_8):
        rng = random.Random(3)
        ids = rng.sample(range(table.size), 200)
        for u in ids:
            du = table.dist[u]
            for v in table.neighbors(u):
                assert abs(table.dist[v] - du) <= 1
            if du >= 1:
                assert any(table.dist[v] == du - 1 for v in table.neighbors(u))


def test_adjacency_symmetric_and_generator_edges(z2_table_22):
    table = z2_table_22
    oracle = table.oracle
    for u in range(0, table.size, 7):
        expected = {table.id_of(oracle.multiply(table.element(u), s))
                    for s in oracle.generators}
        expected.discard(None)  # neighbors past the truncation
        assert set(table.neighbors(u)) == expected
        for v in table.neighbors(u):
            assert u in set(table.neighbors(v))


def test_id_of_rejects_out_of_window_elements(z2_table_22):
    # packed lookups must not alias far-away elements onto table ids
    assert z2_table_22.id_of((1000000, -999999)) is None
    assert z2_table_22.id_of((0, 1)) == 3  # discovery order: e, +e1, -e1, +e2


def test_cross_cyclic_sizes_settle():
    series = sphere_size_series(make_group({"family": "z_cross_cyclic", "m": 3}), 50)
    assert all(series.sphere(r) == 6 for r in range(2, 51))


def test_monotone_ball_growth(lamp_oracle):
    table = explore(lamp_oracle, 10)
    sizes = [table.ball_size(r) for r in range(11)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_left_invariance_spot_check(z2_oracle, z2_table_22):
    # distance from g to h inside the table equals d(e, g^-1 h) from a fresh search
    table = z2_table_22
    rng = random.Random(11)
    half = [i for i in range(table.size) if table.dist[i] <= 11]
    fresh = explore(z2_oracle, 22)
    for _ in range(100):
        gu, gv = rng.choice(half), rng.choice(half)
        g, h = table.element(gu), table.element(gv)
        shifted = z2_oracle.multiply(z2_oracle.invert(g), h)
        expected = fresh.dist[fresh.id_of(shifted)]
        assert table.distance_between(gu, gv) == expected


def test_budget_exceeded_reports_radius():
    with pytest.raises(BudgetExceeded) as err:
        explore(make_group({"family": "free", "k": 2}), 10, budget=500)
    assert err.value.radius_reached < 10
    assert err.value.budget == 500
    with pytest.raises(BudgetExceeded):
        sphere_size_series(make_group({"family": "free", "k": 2}), 10, budget=500)


def test_explore_rejects_bad_radius(z_oracle):
    with pytest.raises(InvalidParameter):
        explore(z_oracle, -1)


def test_axis_families(z_table_30, z2_table_22, dihedral_oracle, lamp_oracle):
    axis = build_axis(z_table_30.oracle, z_table_30, 10)
    assert [axis.vertex(i) for i in (-2, -1, 0, 1, 2)] == [-2, -1, 0, 1, 2]

    axis2 = build_axis(z2_table_22.oracle, z2_table_22, 10)
    assert axis2.vertex(10) == (10, 0)
    assert axis2.vertex(-10) == (-10, 0)

    dt = explore(dihedral_oracle, 12)
    daxis = build_axis(dihedral_oracle, dt, 6)
    assert daxis.vertex(1) == (0, 1)      # s
    assert daxis.vertex(2) == (1, 0)      # st
    assert daxis.vertex(3) == (1, 1)      # sts
    assert daxis.vertex(-1) == (-1, 1)    # t
    for i in range(-6, 7):
        assert dt.dist[dt.id_of(daxis.vertex(i))] == abs(i)

    lt = explore(lamp_oracle, 8)
    laxis = build_axis(lamp_oracle, lt, 8)
    for i in range(-8, 9):
        assert laxis.vertex(i) == (i, 0, 0)  # cursor moves, no lamps

    ft = explore(make_group({"family": "free", "k": 2}), 6)
    faxis = build_axis(ft.oracle, ft, 6)
    assert faxis.vertex(3) == (1, 1, 1)
    assert faxis.vertex(-2) == (-1, -1)


def test_no_axis_for_finite_and_products():
    finite = make_group({"family": "cyclic_finite", "m": 5})
    with pytest.raises(NoAxis):
        build_axis(finite, explore(finite, 4), 2)
    prod = make_group({"family": "product", "left": {"family": "z"}, "right": {"family": "z"}})
    with pytest.raises(NoAxis):
        build_axis(prod, explore(prod, 4), 2)


def test_axis_extent_bound(z_table_30):
    with pytest.raises(InvalidParameter):
        build_axis(z_table_30.oracle, z_table_30, 31)


def test_csv_dump(tmp_path, z_table_30):
    path = tmp_path / "table.csv"
    z_table_30.dump_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "key,distance,neighbors"
    assert lines[1] == "0,0,2"
    assert len(lines) == z_table_30.size + 1


def test_entries_view(z_table_30):
    first = next(iter(z_table_30.entries()))
    assert first == ("0", 0, 0)
    assert z_table_30.id_of_key("5") == z_table_30.id_of(5)
