from __future__ import annotations

import json
import random

import pytest

from knotcomplex.construction import TreeEdge, build_spine, fundamental_cycle
from knotcomplex.cuboid import WHITE, build_cuboid, two_color
from knotcomplex.verify import (
    CheckResult,
    VerificationReport,
    VerifyConfig,
    check_tree_edges,
    contract_cycle,
    negative_checks,
    one_edge_per_segment,
    parse_scope,
    random_black_forest,
    realize_cycle_geometry,
    run_verification,
    sample_edges,
    unit_cube_black_triangle,
    verify_Cpp_contractions,
    verify_G14,
    verify_white_graph_connected,
    verify_routing,
    verify_tree,
    white_minus_crossings_connected,
)


def test_parse_scope():
    assert parse_scope("full") is None
    assert parse_scope("sampled:7") == 7
    for bad in ("sampled:0", "sampled:x", "some", ""):
        with pytest.raises(ValueError):
            parse_scope(bad)


def test_report_serialization():
    rep = VerificationReport({"n": 20})
    rep.add(CheckResult("a", "full", True, seconds=0.5))
    rep.add(CheckResult("b", "sampled:3", False, counterexample={"edge": 4}, seed=11))
    assert not rep.passed
    data = json.loads(json.dumps(rep.to_json()))
    assert data["schema"] == "knotcomplex.report/1"
    assert [c["name"] for c in data["checks"]] == ["a", "b"]
    lines = rep.to_tsv().splitlines()
    assert lines[0].split("\t") == ["name", "scope", "seed", "passed", "seconds", "counterexample"]
    assert lines[2].split("\t")[:4] == ["b", "sampled:3", "11", "0"]
    assert json.loads(lines[2].split("\t")[5]) == {"edge": 4}


def test_check_tree_edges_witnesses():
    path = [TreeEdge(0, 1, "edge", 0), TreeEdge(1, 2, "edge", 1)]
    assert check_tree_edges([0, 1, 2], path)[0]
    ok, witness, _ = check_tree_edges([0, 1, 2], path + [TreeEdge(0, 2, "edge", 2)])
    assert not ok and witness
    ok, witness, _ = check_tree_edges([0, 1, 2, 3], path)
    assert not ok


def test_sample_edges_is_seeded(pipe20):
    a = sample_edges(pipe20, 10, 5)
    assert a == sample_edges(pipe20, 10, 5)
    assert a != sample_edges(pipe20, 10, 6)
    assert len(set(a)) == 10


def test_tree_and_routing_pass(pipe20):
    assert verify_tree(pipe20).passed
    r = verify_routing(pipe20, "sampled:30", seed=1, cross_check=30)
    assert r.passed, r.counterexample


def test_realized_cycle_is_the_walk(pipe20):
    e = pipe20.non_tree_edges[100]
    cyc = fundamental_cycle(pipe20, e)
    geom = realize_cycle_geometry(pipe20, cyc)
    assert len(geom.points) <= len(cyc.vertices)
    assert set(geom.points) <= {pipe20.cuboid.coords_of(v) for v in cyc.vertices}


def test_g14_on_both_overhand_paths(pipe20):
    edges = one_edge_per_segment(pipe20)
    r = verify_G14(pipe20, edges)
    assert r.passed, r.counterexample
    assert r.details["segments"] == ["P2", "P4"]


def test_one_cycle_contraction(pipe20):
    res = contract_cycle(pipe20, sample_edges(pipe20, 1, 2)[0])
    assert res.lw_2_connected and res.sum_consistent
    assert not res.verdict_planar
    assert res.witness_kind in ("K33", "K5")
    assert res.k33_ok


def test_one_cdoubleprime_contraction(pipe20):
    r = verify_Cpp_contractions(pipe20, sample_edges(pipe20, 1, 3))
    assert r.passed, r.counterexample


def test_white_graph_small_run():
    r = verify_white_graph_connected(trials=50, seed=1, max_size=3)
    assert r.passed, r.counterexample


def test_cyclic_black_forest_is_rejected():
    c = build_cuboid(2, 2, 2)
    col = two_color(c, (0, 0, 0), WHITE)
    with pytest.raises(ValueError):
        white_minus_crossings_connected(c, col, unit_cube_black_triangle(c, col))
    forest = random_black_forest(c, col, random.Random(0), 1.0)
    assert white_minus_crossings_connected(c, col, forest)


def test_negative_injections_all_fail(pipe20):
    results = negative_checks(pipe20)
    assert [r.name for r in results] == [
        "inject_tree_deleted_edge",
        "inject_tree_added_edge",
        "inject_unknotted_cycle",
        "inject_non_collinear_triple",
    ]
    for r in results:
        assert not r.passed
        assert r.counterexample is not None


def test_small_run_verification(pipe20):
    cfg = VerifyConfig(scope="sampled:20", knot_samples=5, contraction_samples=1,
                       forest_trials=20, rotation_samples=30)
    rep = run_verification(pipe20, cfg)
    assert rep.passed, [(c.name, c.counterexample) for c in rep.checks if not c.passed]
    names = [c.name for c in rep.checks]
    assert "entangled_canonical" in names and "Cpp_contraction_nonplanar" in names
    seeds = [c.seed for c in rep.checks if c.seed is not None]
    assert len(seeds) >= 4
    # the same plan across two worker processes reports identically
    cfg.jobs = 2
    par = run_verification(pipe20, cfg)
    key = lambda r: [(c.name, c.scope, c.seed, c.passed) for c in r.checks]  # noqa: E731
    assert key(par) == key(rep)


def test_spine_needs_room():
    with pytest.raises(ValueError):
        build_spine(19)
