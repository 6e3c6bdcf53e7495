from __future__ import annotations

import random

import pytest

from knotcomplex.complex import TwoComplex, contract_edge_set, subdivide_faces
from knotcomplex.construction import build_pipeline
from knotcomplex.cuboid import build_cuboid


def random_small_complex(rng: random.Random) -> TwoComplex:
    """A small cuboid complex, randomly subdivided and partly contracted so
    that multi-edges, loops and repeated face traversals all occur."""
    dims = tuple(rng.randint(1, 2) for _ in range(3))
    c = build_cuboid(*dims).complex
    for _ in range(rng.randint(0, 2)):
        f = rng.choice(sorted(c.faces))
        verts = c.face_vertices(f)
        if len(set(verts)) < 4:
            continue
        i = rng.randrange(len(verts))
        j = (i + 2) % len(verts)
        c, _, _ = subdivide_faces(c, [(f, verts[i], verts[j])])
    for _ in range(rng.randint(0, 8)):
        e = rng.choice(sorted(c.edges))
        c = contract_edge_set(c, [e])
    return c


@pytest.fixture(scope="session")
def pipe20():
    return build_pipeline(20, 0)


def expected_cuboid_link(degree: int):
    """Link graph of a cuboid-complex vertex of the given degree: the double
    wheel, the double wheel minus a vertex, K4 minus an edge, or K3."""
    from knotcomplex.graphs import Multigraph, complete_graph
    from knotcomplex.planarity import make_double_wheel

    if degree == 6:
        return make_double_wheel()
    if degree == 5:
        w = make_double_wheel()
        return w.remove_vertices([w.vertices[0]])
    if degree == 4:
        k4 = complete_graph(4)
        return Multigraph(k4.vertices, dict(list(k4.edges.items())[1:]))
    if degree == 3:
        return complete_graph(3)
    raise ValueError(f"no cuboid vertex has degree {degree}")


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
