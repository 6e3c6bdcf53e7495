from __future__ import annotations

import itertools
import random

import numpy as np

from knotcomplex.complex import TwoComplex, contract_edge_set, delete_edges
from knotcomplex.cuboid import build_cuboid
from knotcomplex.homology import euler_characteristic, h1_rank, sparse_rank


def test_sparse_rank_matches_numpy_on_random_matrices():
    rng = random.Random(2)
    for _ in range(300):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        m = np.array([[rng.choice([0, 0, 0, 1, -1, 2]) for _ in range(cols)] for _ in range(rows)])
        columns = [{r: int(m[r, c]) for r in range(rows) if m[r, c]} for c in range(cols)]
        assert sparse_rank(columns) == np.linalg.matrix_rank(m)


def test_h1_vanishes_on_every_cuboid_up_to_four_cubed():
    for dims in itertools.product(range(1, 5), repeat=3):
        cert = h1_rank(build_cuboid(*dims).complex)
        assert cert.rank == 0, dims


def test_h1_of_bare_cycle_is_one():
    c = TwoComplex([0, 1, 2], {0: (0, 1), 1: (1, 2), 2: (2, 0)}, {})
    assert h1_rank(c).rank == 1


def test_h1_of_cuboid_with_a_face_removed_from_a_tube():
    # The 1x1x3 cuboid minus the two end caps and the interior cross squares
    # is a tube around the long axis, with first Betti number 1.
    c = build_cuboid(1, 1, 3).complex
    keep = {f for f, w in c.faces.items() if _spans_long_axis(c, f)}
    tube = TwoComplex(c.vertices, c.edges, {f: c.faces[f] for f in keep}, c.coords)
    assert h1_rank(tube).rank == 1


def _spans_long_axis(c, f) -> bool:
    zs = {c.coords[v][2] for v in c.face_vertices(f)}
    return len(zs) == 2


def test_contraction_of_tree_keeps_h1():
    c = build_cuboid(2, 1, 1).complex
    # contract a path: homotopy equivalence
    cc = contract_edge_set(c, [e for e in sorted(c.edges)[:2]])
    assert h1_rank(cc).rank == 0
    assert euler_characteristic(cc) == euler_characteristic(c)


def test_cube_surface_minus_an_edge_and_its_faces_is_a_disk():
    c = build_cuboid(1, 1, 1).complex
    assert euler_characteristic(c) == 2
    d = delete_edges(c, [next(iter(c.edges))])
    assert d.counts() == (8, 11, 4)
    assert euler_characteristic(d) == 1
    assert h1_rank(d).rank == 0
