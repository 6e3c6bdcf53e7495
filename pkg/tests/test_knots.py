from __future__ import annotations

import itertools
import random

import pytest

from knotcomplex.knots import (
    OVERHAND,
    DegenerateProjection,
    PLCycle,
    brute_force_colorings,
    choose_generic_direction,
    fewest_crossings_direction,
    fox_colorings,
    is_certified_nontrivial,
    lattice_granny,
    lattice_trefoil,
    lattice_unknot,
    make_cycle,
    parametric_figure_eight,
    parametric_trefoil,
    project,
    projection_basis,
    rank_mod_p,
    simplify,
)


def test_plcycle_validation():
    with pytest.raises(ValueError):
        PLCycle(((0, 0, 0), (1, 0, 0)))
    with pytest.raises(ValueError):
        PLCycle(((0, 0, 0), (1, 0, 0), (0, 0, 0), (0, 1, 0)))


def test_simplify_drops_straight_points():
    pts = [(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0), (0, 1, 0)]
    assert simplify(pts) == [(0, 0, 0), (2, 0, 0), (2, 1, 0), (0, 1, 0)]
    # a point where the walk doubles back is kept
    assert len(simplify([(0, 0, 0), (2, 0, 0), (1, 0, 0), (1, 1, 0)])) == 4


@pytest.mark.parametrize("d", [(0, 0, 1), (1, 2, 3), (-4, 1, 7), (5, 0, 0)])
def test_projection_basis_is_orthogonal_and_positive(d):
    a, b = projection_basis(d)
    dot = lambda p, q: sum(x * y for x, y in zip(p, q))  # noqa: E731
    assert dot(a, d) == dot(b, d) == dot(a, b) == 0
    cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    assert dot(cross, d) > 0
    with pytest.raises(ValueError):
        projection_basis((0, 0, 0))


def test_unknot_square_has_no_crossings():
    dg = project(lattice_unknot(), (1, 2, 5))
    assert dg.crossings == []
    assert fox_colorings(dg, 3) == 3


def test_degenerate_directions_are_rejected():
    square = lattice_unknot()
    with pytest.raises(DegenerateProjection):
        project(square, (1, 0, 0))  # a segment projects to a point
    with pytest.raises(DegenerateProjection):
        project(square, (1, 1, 0))  # the whole square projects onto a line


def test_self_intersecting_polyline_is_rejected():
    # The vertex (1, 1, 0) lies on the first segment, so every projection touches.
    pts = [(0, 1, 0), (2, 1, 0), (2, 3, 1), (1, 3, 1), (1, 1, 0), (1, 0, 5), (0, 0, 5)]
    cyc = make_cycle(pts)
    for d in [(1, 2, 7), (3, 1, 11), (2, 5, 13)]:
        with pytest.raises(DegenerateProjection):
            project(cyc, d)


@pytest.mark.parametrize("factory,expected", [
    (lattice_unknot, 3),
    (lattice_trefoil, 9),
    (lattice_granny, 27),
    (parametric_trefoil, 9),
])
def test_coloring_counts_at_three_across_seeds(factory, expected):
    cyc = factory()
    for seed in range(3):
        cert = is_certified_nontrivial(cyc, seed=seed, p=3)
        assert cert.colorings == expected
        assert cert.nontrivial == (expected > 3)


@pytest.mark.parametrize("factory,expected", [(lattice_trefoil, 9), (lattice_granny, 27)])
def test_fox_count_matches_brute_force(factory, expected):
    cyc = factory()
    dg = project(cyc, fewest_crossings_direction(cyc))
    assert brute_force_colorings(dg, 3) == fox_colorings(dg, 3) == expected


def test_fox_count_matches_brute_force_on_random_directions():
    cyc = lattice_trefoil()
    for seed in range(5):
        dg = project(cyc, choose_generic_direction(cyc, seed))
        if dg.arcs <= 12:
            for p in (3, 5):
                assert brute_force_colorings(dg, p) == fox_colorings(dg, p)


def test_figure_eight_needs_p5():
    cyc = parametric_figure_eight()
    assert is_certified_nontrivial(cyc, seed=0, p=3).verdict == "Unknown"
    cert = is_certified_nontrivial(cyc, seed=0, p=5)
    assert cert.verdict == "Nontrivial"
    assert cert.colorings == 25


def test_gauss_code_visits_each_crossing_over_and_under():
    dg = project(lattice_trefoil(), fewest_crossings_direction(lattice_trefoil()))
    kinds = {}
    for k, kind, _ in dg.gauss_code:
        kinds.setdefault(k, []).append(kind)
    assert all(sorted(v) == ["over", "under"] for v in kinds.values())
    assert len(kinds) == len(dg.crossings) == dg.arcs
    assert dg.gauss_string().count("O") == len(dg.crossings)


def test_rank_mod_p_matches_enumeration():
    rng = random.Random(9)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        rows_n, cols = rng.randint(1, 4), rng.randint(1, 4)
        rows = [{c: rng.randrange(p) for c in range(cols)} for _ in range(rows_n)]
        kernel = sum(
            1 for x in itertools.product(range(p), repeat=cols)
            if all(sum(r.get(c, 0) * x[c] for c in range(cols)) % p == 0 for r in rows)
        )
        assert p ** (cols - rank_mod_p(rows, p)) == kernel


def test_even_or_composite_p_rejected():
    dg = project(lattice_trefoil(), fewest_crossings_direction(lattice_trefoil()))
    for p in (2, 4, 9):
        with pytest.raises(ValueError):
            fox_colorings(dg, p)


def test_certificate_json():
    cert = is_certified_nontrivial(lattice_trefoil())
    data = cert.to_json()
    assert data["verdict"] == "Nontrivial"
    assert data["colorings"] == 9
    assert len(data["direction"]) == 3


def test_overhand_polyline_is_the_lattice_trefoil():
    assert lattice_trefoil().points == tuple(simplify(OVERHAND))
