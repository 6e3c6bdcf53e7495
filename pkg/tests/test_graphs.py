from __future__ import annotations

import random

import networkx as nx
import pytest

from knotcomplex.graphs import (
    Multigraph,
    articulation_points,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    degree_sequence,
    internal_vertex_sum,
    is_2_connected,
    path_graph,
    vertex_sum,
)


def test_named_graph_sizes():
    assert (len(complete_graph(5).vertices), len(complete_graph(5).edges)) == (5, 10)
    assert (len(complete_bipartite(3, 3).vertices), len(complete_bipartite(3, 3).edges)) == (6, 9)
    assert len(cycle_graph(7).edges) == 7
    assert len(path_graph(4).edges) == 3


def test_loops_and_parallel_edges_count_in_degree():
    g = Multigraph([0, 1], {"a": (0, 1), "b": (0, 1), "l": (0, 0)})
    assert g.degree(0) == 4
    assert g.degree(1) == 2
    assert len(g.incidence[0]) == 4


def test_rejects_unknown_endpoint():
    with pytest.raises(ValueError):
        Multigraph([0], {"a": (0, 1)})


def test_contract_drops_parallel_edges_between_pair():
    g = Multigraph([0, 1, 2], {"a": (0, 1), "b": (0, 1), "c": (1, 2)})
    h = g.contract(0, 1)
    assert sorted(h.vertices) == [0, 2]
    assert h.edges == {"c": (0, 2)}


def test_identify_turns_joining_edges_into_loops():
    g = Multigraph([0, 1], {"a": (0, 1)})
    assert g.identify(0, 1).edges == {"a": (0, 0)}


def test_articulation_points_agree_with_networkx():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(3, 9)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(2, 14))]
        g = Multigraph(range(n), pairs)
        h = nx.MultiGraph()
        h.add_nodes_from(range(n))
        h.add_edges_from((u, v) for u, v in pairs if u != v)
        assert articulation_points(g) == set(nx.articulation_points(nx.Graph(h)))


def test_two_connectivity():
    assert is_2_connected(cycle_graph(5))
    assert not is_2_connected(path_graph(4))
    with pytest.raises(ValueError):
        is_2_connected(path_graph(2))


def test_vertex_sum_of_two_wheels_by_darts():
    # Sum K4 and K4 at one vertex each: glue the three ends pairwise.
    g1 = Multigraph(["a", "b", "c", "x"], {1: ("a", "b"), 2: ("b", "c"), 3: ("c", "a"),
                                            4: ("x", "a"), 5: ("x", "b"), 6: ("x", "c")})
    g2 = Multigraph(["p", "q", "r", "y"], {11: ("p", "q"), 12: ("q", "r"), 13: ("r", "p"),
                                            14: ("y", "p"), 15: ("y", "q"), 16: ("y", "r")})
    s = vertex_sum(g1, "x", g2, "y", [(4, 14), (5, 15), (6, 16)])
    assert sorted(s.vertices) == ["a", "b", "c", "p", "q", "r"]
    assert len(s.edges) == 9
    pairs = {frozenset(uv) for uv in s.edges.values()}
    assert {frozenset(("a", "p")), frozenset(("b", "q")), frozenset(("c", "r"))} <= pairs


def test_vertex_sum_needs_equal_degrees():
    g1 = Multigraph([0, 1, 2], {1: (0, 1), 2: (0, 2)})
    g2 = Multigraph([5, 6], {3: (5, 6)})
    with pytest.raises(ValueError):
        vertex_sum(g1, 0, g2, 5, [(1, 3)])


def test_vertex_sum_follows_chains_through_the_sum_vertices():
    # An edge x-y in a graph summed with itself would be a chain; here a
    # parallel pair at x paired to a loop at y closes into a cycle and vanishes.
    g1 = Multigraph(["x", "a"], {1: ("x", "a"), 2: ("x", "a")})
    g2 = Multigraph(["y"], {3: ("y", "y")})
    s = vertex_sum(g1, "x", g2, "y", [((1, 0), (3, 0)), ((2, 0), (3, 1))])
    assert list(s.vertices) == ["a"]
    assert s.degree("a") == 2


def test_internal_vertex_sum_matches_identify_then_delete():
    # Wheel-like: x and y both adjacent to a, b, c; pair ends by neighbour.
    g = Multigraph(["x", "y", "a", "b", "c"],
                   {1: ("x", "a"), 2: ("x", "b"), 3: ("x", "c"), 4: ("y", "a"), 5: ("y", "b"),
                    6: ("y", "c"), 7: ("x", "y")})
    s = internal_vertex_sum(g, "x", "y", [(1, 5), (2, 6), (3, 4)])
    assert sorted(s.vertices) == ["a", "b", "c"]
    assert sorted(degree_sequence(s)) == [2, 2, 2]


def test_to_dot_lists_every_edge():
    dot = complete_graph(4).to_dot("K4", highlight_edges=[0])
    assert dot.startswith("graph K4 {")
    assert dot.count(" -- ") == 6
    assert "color=\"red\"" in dot
