from __future__ import annotations

import itertools

import pytest
from conftest import expected_cuboid_link

from knotcomplex.complex import link_graph
from knotcomplex.cuboid import (
    BLACK,
    WHITE,
    build_cuboid,
    crossing_set,
    diagonal_graph,
    diagonals,
    slab,
    to_obj,
    to_off,
    two_color,
)
from knotcomplex.graphs import is_2_connected
from knotcomplex.planarity import is_isomorphic


def closed_form_counts(n1, n2, n3):
    v = (n1 + 1) * (n2 + 1) * (n3 + 1)
    e = n1 * (n2 + 1) * (n3 + 1) + n2 * (n1 + 1) * (n3 + 1) + n3 * (n1 + 1) * (n2 + 1)
    f = n1 * n2 * (n3 + 1) + n1 * n3 * (n2 + 1) + n2 * n3 * (n1 + 1)
    return v, e, f


def enumerated_counts(n1, n2, n3):
    """Count lattice points, unit segments and unit squares directly."""
    pts = list(itertools.product(range(n1 + 1), range(n2 + 1), range(n3 + 1)))
    inside = set(pts)
    unit = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    segs = sum(1 for p in pts for u in unit if tuple(a + b for a, b in zip(p, u)) in inside)
    sq = 0
    for p in pts:
        for u, w in itertools.combinations(unit, 2):
            q = tuple(a + b + c for a, b, c in zip(p, u, w))
            sq += q in inside
    return len(pts), segs, sq


def test_counts_of_two_cubed():
    assert build_cuboid(2, 2, 2).complex.counts() == (27, 54, 36)


def test_counts_at_n20():
    assert build_cuboid(41, 20, 20).complex.counts() == (18522, 53361, 51240)
    assert closed_form_counts(41, 20, 20) == (18522, 53361, 51240)


@pytest.mark.parametrize("dims", list(itertools.product(range(1, 4), repeat=3)))
def test_counts_match_enumeration(dims):
    c = build_cuboid(*dims).complex
    assert c.counts() == closed_form_counts(*dims) == enumerated_counts(*dims)


def test_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        build_cuboid(0, 1, 1)


def test_vertex_ids_round_trip():
    c = build_cuboid(3, 2, 4)
    for v, p in c.coords.items():
        assert c.vertex_id(*p) == v
        assert c.coords_of(v) == p


def test_links_by_degree_on_two_cubed():
    c = build_cuboid(2, 2, 2).complex
    seen = set()
    for v in c.vertices:
        lg = link_graph(c, v).graph
        deg = c.degree(v)
        assert is_isomorphic(lg, expected_cuboid_link(deg)) is not None, v
        assert is_2_connected(lg)
        seen.add(deg)
    assert seen == {3, 4, 5, 6}


def test_coloring_is_proper_on_edges():
    c = build_cuboid(3, 2, 2)
    col = two_color(c, (0, 0, 0), WHITE)
    for a, b in c.complex.edges.values():
        assert col.color(c, a) != col.color(c, b)
    assert col.flipped().color(c, 0) == BLACK


def test_two_color_rejects_outside_anchor():
    c = build_cuboid(1, 1, 1)
    with pytest.raises(ValueError):
        two_color(c, (5, 0, 0))


def test_each_face_has_one_diagonal_per_colour():
    c = build_cuboid(2, 2, 2)
    col = two_color(c, (0, 0, 0))
    white, black = diagonals(c, col, WHITE), diagonals(c, col, BLACK)
    assert len(white) == len(black) == len(c.face_squares)
    assert {d.face for d in white} == set(c.face_squares)


def test_crossing_set_pairs_diagonals_within_faces():
    c = build_cuboid(2, 2, 2)
    col = two_color(c, (0, 0, 0))
    black = diagonals(c, col, BLACK)[:5]
    cross = crossing_set(c, black)
    assert len(cross) == 5
    assert all(col.color(c, d.u) == WHITE for d in cross)
    assert {d.face for d in cross} == {d.face for d in black}


def test_white_diagonal_graph_is_connected():
    c = build_cuboid(3, 3, 3)
    assert diagonal_graph(c, two_color(c, (0, 0, 0)), WHITE).is_connected()


def test_slab_is_the_induced_subcomplex():
    c = build_cuboid(5, 2, 2)
    s = slab(c, 2, 3)
    assert s.complex.counts() == closed_form_counts(1, 2, 2)
    assert all(2 <= p[0] <= 3 for p in s.coords.values())
    assert set(s.complex.edges) <= set(c.complex.edges)
    with pytest.raises(ValueError):
        slab(c, 4, 7)


def test_off_header_and_split_faces():
    c = build_cuboid(1, 1, 2)
    text = to_off(c)
    lines = text.splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "12 11 20"  # V F E from the closed forms
    col = two_color(c, (0, 0, 0))
    dg = diagonals(c, col, WHITE)[0]
    split = to_off(c, {dg.face: dg}).splitlines()
    assert split[1] == "12 12 21"


def test_obj_records():
    c = build_cuboid(1, 1, 1)
    text = to_obj(c, polylines=[[0, 1, 3]])
    assert sum(1 for line in text.splitlines() if line.startswith("v ")) == 8
    assert sum(1 for line in text.splitlines() if line.startswith("f ")) == 6
    assert "l 1 2 4" in text
