from __future__ import annotations

import random

import networkx as nx
import pytest

from knotcomplex.graphs import (
    Multigraph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    is_2_connected,
    vertex_sum,
)
from knotcomplex.planarity import (
    G13_K33_SCRIPT,
    brute_force_has_minor,
    classify_subdivision,
    compose_models,
    has_k33_minor_via,
    is_isomorphic,
    is_planar,
    k33_model_from_script,
    kuratowski_witness,
    make_double_wheel,
    make_G13,
    make_G14,
    verify_minor_model,
)


def petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Multigraph(range(10), outer + inner + spokes)


def subdivide_all(g: Multigraph) -> Multigraph:
    verts = list(g.vertices)
    edges = []
    for k, (a, b) in g.edges.items():
        m = ("mid", k)
        verts.append(m)
        edges += [(a, m), (m, b)]
    return Multigraph(verts, edges)


def to_nx(g: Multigraph) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges.values())
    return h


def test_g14_shape_and_planarity():
    g = make_G14()
    assert (len(g.vertices), len(g.edges)) == (14, 26)
    v = is_planar(g)
    assert v.planar and v.certified


def test_g13_nonplanar_with_k33_witness():
    g = make_G13()
    assert (len(g.vertices), len(g.edges)) == (13, 26)
    v = is_planar(g)
    assert not v.planar
    assert v.witness.kind == "K33"
    assert classify_subdivision(g, v.witness.edges).kind == "K33"


def test_contraction_script_certifies_k33_minor():
    g = make_G13()
    cert = has_k33_minor_via(g, G13_K33_SCRIPT)
    assert cert.ok, cert.reason
    model = k33_model_from_script(g, G13_K33_SCRIPT)
    assert verify_minor_model(g, complete_bipartite(3, 3), model).ok


def test_script_on_g14_does_not_give_k33():
    # Y31 and Y32 are separate in G14, so the right side misses Y3.
    script = dict(G13_K33_SCRIPT, right=["Y1", "Y2", "Y31"])
    assert not has_k33_minor_via(make_G14(), script).ok


def test_witness_kinds():
    assert kuratowski_witness(complete_graph(5)).kind == "K5"
    assert kuratowski_witness(complete_bipartite(3, 3)).kind == "K33"
    assert kuratowski_witness(subdivide_all(complete_graph(5))).kind == "K5"
    w = kuratowski_witness(petersen())
    assert w.kind == "K33"
    assert len(w.branch_vertices) == 6


def test_classify_rejects_non_subdivisions():
    g = complete_graph(5)
    assert classify_subdivision(g, list(g.edges)[:-1]) is None
    c = cycle_graph(6)
    assert classify_subdivision(c, list(c.edges)) is None


def test_planarity_agrees_with_networkx_on_random_multigraphs():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(3, 10)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(3, 25))]
        g = Multigraph(range(n), pairs)
        v = is_planar(g)
        assert v.planar == nx.check_planarity(nx.Graph(to_nx(g)))[0]
        if not v.planar:
            assert v.witness.kind in ("K5", "K33")


def test_minor_model_failures_are_reported():
    g = complete_graph(4)
    h = complete_graph(3)
    assert verify_minor_model(g, h, {0: {0}, 1: {1}, 2: {2, 3}}).ok
    assert "two branch sets" in verify_minor_model(g, h, {0: {0}, 1: {0}, 2: {2}}).reason
    assert "empty" in verify_minor_model(g, h, {0: set(), 1: {1}, 2: {2}}).reason
    path = Multigraph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert "disconnected" in verify_minor_model(path, h, {0: {0, 2}, 1: {1}, 2: {3}}).reason
    assert "not realized" in verify_minor_model(path, h, {0: {0}, 1: {1}, 2: {3}}).reason


def test_compose_models():
    # K33 in G13 composed with G13 in its own subdivision
    g13 = make_G13()
    sub = subdivide_all(g13)
    outer = {v: {v} | {("mid", k) for k, (a, b) in g13.edges.items() if a == v and a != b}
             for v in g13.vertices}
    assert verify_minor_model(sub, g13, outer).ok
    inner = k33_model_from_script(g13, G13_K33_SCRIPT)
    assert verify_minor_model(sub, complete_bipartite(3, 3), compose_models(outer, inner)).ok


@pytest.mark.parametrize("g,k5,k33", [
    (complete_graph(5), True, False),
    (complete_bipartite(3, 3), False, True),
    (complete_graph(4), False, False),
    (petersen(), True, True),
    (make_double_wheel(), False, False),
])
def test_brute_force_minors(g, k5, k33):
    assert brute_force_has_minor(g, "K5") is k5
    assert brute_force_has_minor(g, "K33") is k33


def test_wagner_on_random_small_graphs():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(5, 8)
        pairs = {tuple(sorted(rng.sample(range(n), 2))) for _ in range(rng.randint(6, 16))}
        g = Multigraph(range(n), sorted(pairs))
        minor = brute_force_has_minor(g, "K5") or brute_force_has_minor(g, "K33")
        assert minor == (not is_planar(g, certify=False).planar)


def test_isomorphism_agrees_with_networkx():
    rng = random.Random(6)
    for _ in range(150):
        n = rng.randint(3, 8)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(2, 12))]
        g1 = Multigraph(range(n), pairs)
        perm = list(range(n))
        rng.shuffle(perm)
        g2 = g1.relabeled(dict(enumerate(perm)))
        m = is_isomorphic(g1, g2)
        assert m is not None
        assert g1.relabeled(m).edge_multiset() == g2.edge_multiset()
        pairs3 = [(rng.randrange(n), rng.randrange(n)) for _ in range(len(pairs))]
        g3 = Multigraph(range(n), pairs3)
        assert (is_isomorphic(g1, g3) is not None) == nx.is_isomorphic(to_nx(g1), to_nx(g3))


def test_pinned_isomorphism_respects_pins():
    c = cycle_graph(5)
    m = is_isomorphic(c, c, pinned={0: 2})
    assert m[0] == 2
    k33 = complete_bipartite(3, 3)
    assert is_isomorphic(k33, k33, pinned={0: 0, 1: 3}) is None


def test_double_wheel_not_k33():
    assert is_isomorphic(make_double_wheel(modified=True), complete_bipartite(3, 3)) is None
    assert len(make_double_wheel(modified=True).edges) == 11


def _two_connected_with_hub(rng: random.Random, degree: int, tag: str) -> tuple[Multigraph, str]:
    m = degree + rng.randint(0, 3)
    ring = [f"{tag}{i}" for i in range(m)]
    hub = f"{tag}h"
    edges = [(ring[i], ring[(i + 1) % m]) for i in range(m)]
    edges += [(hub, r) for r in rng.sample(ring, degree)]
    edges += [tuple(rng.sample(ring, 2)) for _ in range(rng.randint(0, 3))]
    return Multigraph(ring + [hub], edges), hub


def test_vertex_sum_with_two_connected_graph_stays_nonplanar():
    rng = random.Random(52)
    for _ in range(200):
        base = rng.choice([complete_graph(5), complete_bipartite(3, 3), petersen()])
        g1 = base.relabeled({v: ("a", v) for v in base.vertices})
        v1 = rng.choice(g1.vertices)
        d = g1.degree(v1)
        g2, v2 = _two_connected_with_hub(rng, d, "b")
        assert is_2_connected(g2)
        ends1 = [k for k, _ in g1.incidence[v1]]
        ends2 = [k for k, _ in g2.incidence[v2]]
        rng.shuffle(ends2)
        s = vertex_sum(g1, v1, g2, v2, list(zip(ends1, ends2)))
        assert not is_planar(s, certify=False).planar
