"""End-to-end checks of the construction, each producing a report entry with
a concrete counterexample on failure."""

from __future__ import annotations

import json
import random
import time
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import asdict, dataclass, field

from .complex import (
    TwoComplex,
    contract_edge_set,
    link_graph,
    merged_vertex,
    predicted_link_after_contraction,
    star,
)
from .construction import (
    CollinearTriple,
    FundamentalCycle,
    Pipeline,
    TreeEdge,
    build_Gb_centre,
    contains_subpath,
    expected_segment,
    find_collinear_triple,
    fundamental_cycle,
    routing_labels,
    validate_spine,
)
from .cuboid import BLACK, WHITE, build_cuboid, crossing_set, diagonals, two_color
from .graphs import Multigraph, complete_bipartite, is_2_connected
from .knots import PLCycle, is_certified_nontrivial, make_cycle
from .planarity import (
    G13_K33_SCRIPT,
    compose_models,
    is_isomorphic,
    is_planar,
    k33_model_from_script,
    make_G13,
    make_G14,
    verify_minor_model,
)
from .rotation import genus_of_rotation, induced_link_rotation, restrict_rotation, rotation_from_geometry

REPORT_SCHEMA = "knotcomplex.report/1"


@dataclass
class CheckResult:
    name: str
    scope: str
    passed: bool
    counterexample: object = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)
    seed: int | None = None


@dataclass
class VerificationReport:
    params: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "params": self.params,
            "checks": [asdict(c) for c in self.checks],
            "passed": self.passed,
        }

    def to_tsv(self) -> str:
        lines = ["name\tscope\tseed\tpassed\tseconds\tcounterexample"]
        for c in self.checks:
            ce = "" if c.counterexample is None else json.dumps(c.counterexample, default=str)
            seed = "" if c.seed is None else c.seed
            lines.append(f"{c.name}\t{c.scope}\t{seed}\t{int(c.passed)}\t{c.seconds:.3f}\t{ce}")
        return "\n".join(lines) + "\n"


def timed(name: str, scope: str, fn: Callable[[], tuple[bool, object, dict]],
          seed: int | None = None) -> CheckResult:
    t0 = time.perf_counter()
    passed, counterexample, details = fn()
    return CheckResult(name, scope, bool(passed), None if passed else counterexample,
                       round(time.perf_counter() - t0, 3), details, seed)


def sample_edges(pipe: Pipeline, k: int, seed: int) -> list[int]:
    edges = pipe.non_tree_edges
    if k >= len(edges):
        return list(edges)
    return sorted(random.Random(seed).sample(edges, k))


def parse_scope(scope: str) -> int | None:
    """``full`` -> None; ``sampled:K`` -> K."""
    if scope == "full":
        return None
    if scope.startswith("sampled:"):
        k = int(scope.split(":", 1)[1])
        if k < 1:
            raise ValueError("sample size must be positive")
        return k
    raise ValueError(f"unknown scope {scope!r}")


# ---------------------------------------------------------------------------
# Tree and routing
# ---------------------------------------------------------------------------


def _find_path(adj: dict, a, b) -> list:
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for w in adj.get(u, ()):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def check_tree_edges(vertices: Sequence[int], edges: Sequence[TreeEdge]) -> tuple[bool, object, dict]:
    """Acyclic and spanning, with exactly two complex edges."""
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: dict = {}
    for t in edges:
        ra, rb = find(t.u), find(t.v)
        if ra == rb:
            cycle = _find_path(adj, t.u, t.v)
            return False, {"reason": "cycle", "closing_edge": asdict(t), "cycle_vertices": cycle}, {}
        parent[ra] = rb
        adj.setdefault(t.u, []).append(t.v)
        adj.setdefault(t.v, []).append(t.u)
    roots = {}
    for v in vertices:
        roots.setdefault(find(v), []).append(v)
    if len(roots) != 1:
        smallest = min(roots.values(), key=len)
        return False, {"reason": "not spanning", "components": len(roots),
                       "smallest_component": smallest[:50]}, {}
    complex_edges = [asdict(t) for t in edges if t.kind == "edge"]
    if len(complex_edges) != 2:
        return False, {"reason": "complex edge count", "complex_edges": complex_edges}, {}
    return True, None, {"edges": len(edges), "complex_edges": complex_edges}


def verify_tree(pipe: Pipeline, edges: Sequence[TreeEdge] | None = None) -> CheckResult:
    plan = pipe.plan
    edges = list(plan.tree_edges if edges is None else edges)

    def run():
        ok, ce, det = check_tree_edges(pipe.cprime.vertices, edges)
        if not ok:
            return ok, ce, det
        spine_refs = {(t.kind, t.ref) for t in plan.parts["P"]}
        have = {(t.kind, t.ref) for t in edges}
        if not spine_refs <= have:
            return False, {"reason": "spine not contained"}, det
        crossing = {(d.face, d.u, d.v) for d in plan.crossing}
        bad = [t.ref for t in edges if t.kind == "diag"
               and (t.ref, min(t.u, t.v), max(t.u, t.v)) in crossing]
        if bad:
            return False, {"reason": "white tree diagonal crosses the black tree", "faces": bad[:10]}, det
        det["crossing_set"] = len(plan.crossing)
        return True, None, det

    return timed("tree_spanning", "full", run)


def verify_spine(pipe: Pipeline) -> CheckResult:
    plan = pipe.plan

    def run():
        problems = validate_spine(plan.cuboid, plan.coloring, plan.spine)
        c = plan.cuboid
        markers = {k: c.coords_of(v) for k, v in plan.spine.markers.items()}
        det = {"markers": markers, "lengths": {k: len(s) for k, s in plan.spine.segments.items()},
               "triples": plan.triples}
        return not problems, {"problems": problems}, det

    return timed("spine", "full", run)


def verify_routing(pipe: Pipeline, scope: str = "full", seed: int = 0, cross_check: int = 200) -> CheckResult:
    """Every fundamental cycle contains the overhand path the slab rule names."""
    k = parse_scope(scope)

    def run():
        labels = {name: routing_labels(pipe, name) for name in ("P2", "P4")}

        def by_labels(e: int, name: str) -> bool:
            lab, s, t = labels[name]
            a, b = pipe.cprime.edges[e]
            return {lab[a], lab[b]} == {s, t} and s != t

        checked = 0
        if k is None:
            for e in pipe.non_tree_edges:
                name = expected_segment(pipe, e)
                checked += 1
                if not by_labels(e, name):
                    return False, {"edge": e, "expected": name}, {}
            sample = sample_edges(pipe, cross_check, seed)
        else:
            sample = sample_edges(pipe, k, seed)
        for e in sample:
            name = expected_segment(pipe, e)
            cyc = fundamental_cycle(pipe, e)
            explicit = contains_subpath(cyc, pipe.spine_edge_ids(name))
            if explicit != by_labels(e, name):
                return False, {"edge": e, "reason": "label shortcut disagrees with explicit cycle"}, {}
            if not explicit:
                return False, {"edge": e, "expected": name, "cycle_length": len(cyc.edges)}, {}
        return True, None, {"swept": checked, "explicit_cycles": len(sample),
                            "non_tree_edges": len(pipe.non_tree_edges)}

    return timed("routing", scope, run, seed)


# ---------------------------------------------------------------------------
# Knots
# ---------------------------------------------------------------------------


def realize_cycle_geometry(pipe: Pipeline, cycle: FundamentalCycle) -> PLCycle:
    coords = pipe.cprime.coords
    pts = []
    for v in cycle.vertices:
        if v not in coords:
            raise ValueError(f"vertex {v} has no coordinates")
        pts.append(coords[v])
    return make_cycle(pts)


def verify_entangled_canonical(pipe: Pipeline, scope: str = "sampled:100", seed: int = 0, p: int = 3,
                               extra_cycles: Sequence[tuple[str, PLCycle]] = ()) -> CheckResult:
    """Each selected fundamental cycle has more than p Fox colourings
    (at least 9 at p = 3) in the canonical embedding."""
    k = parse_scope(scope)

    def run():
        edges = pipe.non_tree_edges if k is None else sample_edges(pipe, k, seed)
        items = [(f"edge {e}", None, e) for e in edges] + [(name, cyc, None) for name, cyc in extra_cycles]
        dist: dict[int, int] = {}
        for label, geom, e in items:
            if geom is None:
                geom = realize_cycle_geometry(pipe, fundamental_cycle(pipe, e))
            cert = is_certified_nontrivial(geom, seed=seed, p=p)
            dist[cert.colorings] = dist.get(cert.colorings, 0) + 1
            if not cert.nontrivial or cert.colorings < p * p:
                return False, {"cycle": label, "certificate": cert.to_json()}, {}
        return True, None, {"cycles": len(items), "colorings_histogram": dist, "p": p}

    return timed("entangled_canonical", scope, run, seed)


# ---------------------------------------------------------------------------
# Links under contraction
# ---------------------------------------------------------------------------


def _end_at(c: TwoComplex, e: int, v: int) -> tuple[int, int]:
    a, b = c.edges[e]
    if a == b:
        raise ValueError("loop")
    return (e, 0 if a == v else 1)


@dataclass
class CycleContraction:
    """Everything derived from contracting one fundamental cycle."""

    cycle: FundamentalCycle
    triple: CollinearTriple
    g14_map: dict | None
    sum_consistent: bool
    lw_2_connected: bool
    link: Multigraph
    verdict_planar: bool
    witness_kind: str | None
    g13_model: dict | None
    k33_model: dict | None
    k33_ok: bool


def g14_mapping(c: TwoComplex, triple: CollinearTriple) -> tuple[dict | None, Multigraph, bool]:
    """Isomorphism G14 -> link at the merged vertex after contracting e2.

    Y31 and Y32 are pinned to the ends of e1 and e3 at the merged vertex.
    Also reports whether the link equals the vertex sum of the two links.
    """
    st = star(c, triple.vertices[1:3])
    c2 = contract_edge_set(st, [triple.e2])
    u = merged_vertex(st, [triple.e2])
    lu = link_graph(c2, u).graph
    predicted = predicted_link_after_contraction(st, triple.e2)
    consistent = is_isomorphic(predicted, lu) is not None
    g14 = make_G14()
    y1 = _end_at(c, triple.e1, triple.vertices[1])
    y3 = _end_at(c, triple.e3, triple.vertices[2])
    mapping = None
    if y1 in lu.vertex_set and y3 in lu.vertex_set:
        mapping = (is_isomorphic(g14, lu, pinned={"Y31": y1, "Y32": y3})
                   or is_isomorphic(g14, lu, pinned={"Y31": y3, "Y32": y1}))
    return mapping, lu, consistent


def contract_cycle(pipe: Pipeline, e: int, triple: CollinearTriple | None = None,
                   certify: bool = True) -> CycleContraction:
    """Contract a fundamental cycle: the path outside the triple, then e2, e1, e3."""
    c = pipe.cprime
    cyc = fundamental_cycle(pipe, e)
    triple = triple or find_collinear_triple(pipe, cyc)
    g14_map, _, consistent = g14_mapping(c, triple)
    st = star(c, cyc.vertices)
    rest = [x for x in cyc.edges if x not in (triple.e1, triple.e2, triple.e3)]
    c1 = contract_edge_set(st, rest)
    w = merged_vertex(st, rest)
    lw = link_graph(c1, w).graph
    lw_ok = is_2_connected(lw)
    cur = c1
    for x in (triple.e2, triple.e1, triple.e3):
        cur = contract_edge_set(cur, [x])
    o = merged_vertex(st, cyc.edges)
    link = link_graph(cur, o).graph
    verdict = is_planar(link, certify=certify)
    g13_model = k33_model = None
    k33_ok = False
    if g14_map is not None:
        g13 = make_G13()
        singles = {z: {g14_map[z]} for z in g13.vertices if z != "Y3"}
        used = {x for s in singles.values() for x in s}
        g13_model = dict(singles)
        g13_model["Y3"] = {x for x in link.vertices if x not in used}
        if verify_minor_model(link, g13, g13_model).ok:
            k33_model = compose_models(g13_model, k33_model_from_script(g13, G13_K33_SCRIPT))
            k33_ok = verify_minor_model(link, complete_bipartite(3, 3), k33_model).ok
    return CycleContraction(cyc, triple, g14_map, consistent, lw_ok, link, verdict.planar,
                            verdict.witness.kind if verdict.witness else None, g13_model, k33_model, k33_ok)


def verify_G14(pipe: Pipeline, edges: Sequence[int], triples: dict | None = None) -> CheckResult:
    """Link at the merged vertex of C'/e2 is G14 for each cycle's triple."""

    def run():
        seen = {}
        segments = set()
        for e in edges:
            cyc = fundamental_cycle(pipe, e)
            tr = (triples or {}).get(e) or find_collinear_triple(pipe, cyc)
            key = (tr.e1, tr.e2, tr.e3)
            if key not in seen:
                mapping, lu, consistent = g14_mapping(pipe.cprime, tr)
                seen[key] = (mapping is not None, consistent, len(lu.vertices), len(lu.edges))
            iso, consistent, nv, ne = seen[key]
            if not iso or not consistent:
                return False, {"edge": e, "triple": asdict(tr), "link_size": [nv, ne],
                               "isomorphic": iso, "vertex_sum_consistent": consistent}, {}
            segments.add(tr.path)
        return True, None, {"cycles": len(edges), "distinct_triples": len(seen), "segments": sorted(segments)}

    return timed("G14_link", f"sampled:{len(edges)}", run)


def verify_cycle_contraction_nonplanar(pipe: Pipeline, edges: Sequence[int]) -> CheckResult:
    def run():
        sizes = []
        for e in edges:
            res = contract_cycle(pipe, e)
            sizes.append(len(res.link.vertices))
            ok = (not res.verdict_planar and res.witness_kind in ("K33", "K5") and res.lw_2_connected
                  and res.g14_map is not None and res.k33_ok and res.sum_consistent)
            if not ok:
                return False, {"edge": e, "planar": res.verdict_planar, "witness": res.witness_kind,
                               "Lw_2_connected": res.lw_2_connected, "G14": res.g14_map is not None,
                               "K33_model": res.k33_ok}, {}
        return True, None, {"cycles": len(edges), "link_sizes": sizes}

    return timed("cycle_contraction_nonplanar", f"sampled:{len(edges)}", run)


def hanging_branch_sets(pipe: Pipeline, cyc: FundamentalCycle, link_vertices: Iterable) -> dict:
    """Minor model of L(C'/o) inside L(C''/e'').

    A link vertex that is the end of a non-tree edge maps to itself. The end
    of a tree edge t hanging off the cycle maps to all ends of non-tree edges
    at vertices beyond t: contracting that subtree replaces the vertex by a
    connected graph on exactly those ends.
    """
    c = pipe.cprime
    on_cycle = set(cyc.vertices)
    cyc_edges = set(cyc.edges)
    adj: dict[int, list[tuple[int, int]]] = {}
    for t in pipe.tree_ids:
        if t in cyc_edges:
            continue
        a, b = c.edges[t]
        adj.setdefault(a, []).append((b, t))
        adj.setdefault(b, []).append((a, t))
    hang: dict[int, int] = {}
    queue = deque()
    for v in cyc.vertices:
        for w, t in adj.get(v, ()):
            if w not in on_cycle and w not in hang:
                hang[w] = t
                queue.append(w)
    while queue:
        u = queue.popleft()
        for w, _ in adj.get(u, ()):
            if w not in on_cycle and w not in hang:
                hang[w] = hang[u]
                queue.append(w)
    tree = pipe.tree_id_set
    sets: dict = {}
    for x in link_vertices:
        g, end = x
        if g not in tree:
            sets[x] = {x}
        else:
            sets[x] = set()
    for g, (a, b) in c.edges.items():
        if g in tree or g == cyc.edge:
            continue
        for end, v in ((0, a), (1, b)):
            t = hang.get(v)
            if t is not None:
                at = c.edges[t]
                root_end = 0 if at[0] in on_cycle else 1
                key = (t, root_end)
                if key in sets:
                    sets[key].add((g, end))
    return sets


def verify_Cpp_contractions(pipe: Pipeline, edges: Sequence[int], certify_witness: bool = True) -> CheckResult:
    """The link of C''/e'' at its vertex is nonplanar (LR test), and a K3,3
    minor model built through L(C'/o) and G13 verifies on it."""

    def run():
        cpp = pipe.cdoubleprime
        (v0,) = cpp.vertices
        info = []
        for e in edges:
            cc = contract_edge_set(cpp, [e])
            link = link_graph(cc, v0).graph
            planar = is_planar(link, certify=False).planar
            k33_ok = None
            if certify_witness:
                res = contract_cycle(pipe, e, certify=False)
                if res.k33_model is None:
                    k33_ok = False
                else:
                    outer = hanging_branch_sets(pipe, res.cycle, res.link.vertices)
                    model = compose_models(outer, res.k33_model)
                    k33_ok = verify_minor_model(link, complete_bipartite(3, 3), model).ok
            info.append({"edge": e, "link_vertices": len(link.vertices), "link_edges": len(link.edges)})
            if planar or k33_ok is False:
                return False, {"edge": e, "planar": planar, "K33_model": k33_ok}, {}
        return True, None, {"edges": len(edges), "links": info[:3]}

    return timed("Cpp_contraction_nonplanar", f"sampled:{len(edges)}", run)


def verify_cpp_rotation_planar(pipe: Pipeline) -> CheckResult:
    """The canonical face orders make the single link of C'' planar."""

    def run():
        rot = rotation_from_geometry(pipe.cprime)
        cpp = pipe.cdoubleprime
        (v0,) = cpp.vertices
        r2 = restrict_rotation(cpp, rot)
        lg = link_graph(cpp, v0).graph
        g = genus_of_rotation(lg, induced_link_rotation(cpp, r2, v0))
        return g["planar"], {"euler": g["euler"][:5], "components": g["components"]}, \
            {"link_vertices": len(lg.vertices), "faces": g["faces"]}

    return timed("Cpp_link_rotation_planar", "full", run)


def verify_cprime_rotations(pipe: Pipeline, k: int | None = None, seed: int = 0) -> CheckResult:
    """Every (or a sample of) vertex of C' has a planar induced link rotation."""

    def run():
        c = pipe.cprime
        verts = list(c.vertices) if k is None else random.Random(seed).sample(list(c.vertices), k)
        edges = {e for v in verts for e, _ in c.vertex_ends[v]}
        rot = rotation_from_geometry(c, sorted(edges))
        for v in verts:
            lg = link_graph(c, v).graph
            if not genus_of_rotation(lg, induced_link_rotation(c, rot, v))["planar"]:
                return False, {"vertex": v, "coords": c.coords[v]}, {}
        return True, None, {"vertices": len(verts)}

    return timed("Cprime_link_rotations_planar", "full" if k is None else f"sampled:{k}", run,
                 None if k is None else seed)


# ---------------------------------------------------------------------------
# Diagonal-graph connectivity
# ---------------------------------------------------------------------------


def random_black_forest(c, coloring, rng: random.Random, density: float) -> list:
    """A random forest of black diagonals (Kruskal over a random order)."""
    black = diagonals(c, coloring, BLACK)
    rng.shuffle(black)
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    out = []
    for dg in black:
        if rng.random() > density:
            continue
        ra, rb = find(dg.u), find(dg.v)
        if ra != rb:
            parent[ra] = rb
            out.append(dg)
    return out


def white_minus_crossings_connected(c, coloring, forest) -> bool:
    """Whether white diagonals not crossing the forest connect all white vertices.

    Raises ValueError if the given black diagonals contain a cycle.
    """
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for d in forest:
        ra, rb = find(d.u), find(d.v)
        if ra == rb:
            raise ValueError(f"black diagonals contain a cycle through {d.u}-{d.v}")
        parent[ra] = rb
    cross = {d.face for d in crossing_set(c, forest)}
    verts = [v for v, p in c.coords.items() if coloring.color_of_point(p) == WHITE]
    edges = {d.face: (d.u, d.v) for d in diagonals(c, coloring, WHITE) if d.face not in cross}
    return Multigraph(verts, edges).is_connected()


def unit_cube_black_triangle(c, coloring) -> list:
    """Three black diagonals of the cube at the origin forming a triangle."""
    cube = [d for d in diagonals(c, coloring, BLACK)
            if all(0 <= x <= 1 for v in (d.u, d.v) for x in c.coords_of(v))]
    by_pair = {frozenset((d.u, d.v)): d for d in cube}
    verts = sorted({v for d in cube for v in (d.u, d.v)})
    a, b, x = verts[:3]
    return [by_pair[frozenset(p)] for p in ((a, b), (b, x), (a, x))]


def verify_white_graph_connected(trials: int = 1000, seed: int = 0, max_size: int = 4) -> CheckResult:
    """Random black forests never disconnect the white diagonal graph; the
    empty forest is fine and a black triangle is rejected as cyclic."""

    def run():
        rng = random.Random(seed)
        boxes = {}
        for t in range(trials):
            dims = tuple(rng.randint(1, max_size) for _ in range(3))
            if dims not in boxes:
                c = build_cuboid(*dims)
                boxes[dims] = (c, two_color(c, (0, 0, 0), WHITE))
            c, col = boxes[dims]
            forest = random_black_forest(c, col, rng, rng.random())
            if not white_minus_crossings_connected(c, col, forest):
                return False, {"trial": t, "dims": dims, "forest": [(d.u, d.v, d.face) for d in forest]}, {}
        c = build_cuboid(max_size, max_size, max_size)
        col = two_color(c, (0, 0, 0), WHITE)
        if not white_minus_crossings_connected(c, col, []):
            return False, {"reason": "empty forest disconnects"}, {}
        try:
            white_minus_crossings_connected(c, col, unit_cube_black_triangle(c, col))
        except ValueError:
            pass
        else:
            return False, {"reason": "cyclic black input accepted"}, {}
        return True, None, {"trials": trials, "boxes": len(boxes)}

    return timed("white_graph_connected", f"sampled:{trials}", run, seed)


def verify_Gb_centre(pipe: Pipeline) -> CheckResult:
    def run():
        plan = pipe.plan
        c, n = plan.cuboid, plan.n
        g = build_Gb_centre(c, plan.coloring, plan.spine)
        vid = c.vertex_id
        need = [(vid(n, 0, 0), vid(n + 1, 1, 0)), (vid(n + 1, 1, 0), vid(n, 1, 1))]
        pairs = {frozenset(ab) for ab in g.edges.values()}
        missing = [p for p in need if frozenset(p) not in pairs]
        connected = g.is_connected()
        return connected and not missing, {"connected": connected, "missing": missing}, \
            {"vertices": len(g.vertices), "edges": len(g.edges)}

    return timed("Gb_centre_connected", "full", run)


# ---------------------------------------------------------------------------
# Negative injections
# ---------------------------------------------------------------------------


def negative_checks(pipe: Pipeline) -> list[CheckResult]:
    """Deliberately broken inputs; every one of these must fail."""
    plan = pipe.plan
    edges = list(plan.tree_edges)
    out = [verify_tree(pipe, edges[:-1])]
    out[-1].name = "inject_tree_deleted_edge"
    c = plan.cuboid
    extra = next(e for e in sorted(c.complex.edges) if e in set(pipe.non_tree_edges))
    a, b = c.complex.edges[extra]
    out.append(verify_tree(pipe, edges + [TreeEdge(a, b, "edge", extra)]))
    out[-1].name = "inject_tree_added_edge"
    square = make_cycle([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    r = verify_entangled_canonical(pipe, "sampled:1", 0, extra_cycles=[("unknotted square", square)])
    r.name = "inject_unknotted_cycle"
    out.append(r)
    seg = plan.spine.segments["P2"]
    ids = pipe.spine_edge_ids("P2")
    v = seg.vertices
    wrong = CollinearTriple(ids[0], ids[1], ids[2], (v[0], v[1], v[2], v[3]), "P2")
    e = pipe.non_tree_edges[0]
    r = verify_G14(pipe, [e], {e: wrong})
    r.name = "inject_non_collinear_triple"
    out.append(r)
    return out


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


@dataclass
class VerifyConfig:
    n: int = 20
    seed: int = 0
    scope: str = "sampled:100"
    knot_samples: int = 100
    contraction_samples: int = 10
    p: int = 3
    forest_trials: int = 1000
    inject_negative: bool = False
    rotation_samples: int | None = 500
    jobs: int = 1


def one_edge_per_segment(pipe: Pipeline) -> list[int]:
    """The smallest non-tree edge routed through P2 and through P4."""
    out = {}
    for e in pipe.non_tree_edges:
        out.setdefault(expected_segment(pipe, e), e)
        if len(out) == 2:
            break
    return [out[k] for k in sorted(out)]


def _white_graph_task(pipe: Pipeline, trials: int, seed: int) -> CheckResult:
    return verify_white_graph_connected(trials, seed)


def _negative_task(pipe: Pipeline) -> list[CheckResult]:
    return negative_checks(pipe)


TASKS: dict[str, Callable] = {
    "spine": verify_spine,
    "tree": verify_tree,
    "Gb_centre": verify_Gb_centre,
    "routing": verify_routing,
    "entangled": verify_entangled_canonical,
    "G14": verify_G14,
    "cycle_contraction": verify_cycle_contraction_nonplanar,
    "Cpp_contraction": verify_Cpp_contractions,
    "Cpp_rotation": verify_cpp_rotation_planar,
    "Cprime_rotations": verify_cprime_rotations,
    "white_graph": _white_graph_task,
    "negative": _negative_task,
}


@dataclass(frozen=True)
class Task:
    kind: str
    args: tuple = ()
    seed: int | None = None  # recorded on the result when the check itself does not


def plan_tasks(pipe: Pipeline, cfg: VerifyConfig) -> list[Task]:
    """Every check with its arguments fixed. All sampling draws from one
    generator seeded by ``cfg.seed``, so a plan reproduces from (n, seed)."""
    k = parse_scope(cfg.scope)
    rng = random.Random(cfg.seed)

    def subseed() -> int:
        return rng.getrandbits(63)

    routing_seed, knot_seed, s1, s2, rot_seed, forest_seed = (subseed() for _ in range(6))
    knot_scope = "full" if k is None else f"sampled:{min(k, cfg.knot_samples)}"
    cyc_edges = sample_edges(pipe, cfg.contraction_samples, s1)
    g14_edges = sorted(set(cyc_edges) | set(one_edge_per_segment(pipe)))
    tasks = [
        Task("spine"),
        Task("tree"),
        Task("Gb_centre"),
        Task("routing", (cfg.scope, routing_seed)),
        Task("entangled", (knot_scope, knot_seed, cfg.p)),
        Task("G14", (g14_edges,), s1),
        Task("cycle_contraction", (cyc_edges,), s1),
        Task("Cpp_contraction", (sample_edges(pipe, cfg.contraction_samples, s2),), s2),
        Task("Cpp_rotation"),
        Task("Cprime_rotations", (None if k is None else cfg.rotation_samples, rot_seed)),
        Task("white_graph", (cfg.forest_trials, forest_seed)),
    ]
    if cfg.inject_negative:
        tasks.append(Task("negative"))
    return tasks


def run_task(pipe: Pipeline, task: Task) -> list[CheckResult]:
    out = TASKS[task.kind](pipe, *task.args)
    results = out if isinstance(out, list) else [out]
    for r in results:
        if r.seed is None:
            r.seed = task.seed
    return results


_WORKER_PIPES: dict[tuple[int, int], Pipeline] = {}


def _worker(n: int, seed: int, task: Task) -> list[CheckResult]:
    """Process-pool entry point; each worker rebuilds the pipeline once."""
    from .construction import build_pipeline

    key = (n, seed)
    if key not in _WORKER_PIPES:
        _WORKER_PIPES[key] = build_pipeline(n, seed)
    return run_task(_WORKER_PIPES[key], task)


def run_verification(pipe: Pipeline, cfg: VerifyConfig, log: Callable[[str], None] = lambda s: None) -> VerificationReport:
    """Run every planned check, in this process or across ``cfg.jobs`` worker
    processes. Results are reported in plan order either way."""
    report = VerificationReport({"n": cfg.n, "seed": cfg.seed, "scope": cfg.scope, "p": cfg.p})
    tasks = plan_tasks(pipe, cfg)

    def add(results: list[CheckResult]) -> None:
        for r in results:
            report.add(r)
            log(f"{'PASS' if r.passed else 'FAIL'} {r.name} [{r.scope}] {r.seconds:.1f}s")

    if cfg.jobs <= 1:
        for t in tasks:
            add(run_task(pipe, t))
        return report
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        futures = [pool.submit(_worker, pipe.plan.n, pipe.plan.seed, t) for t in tasks]
        for f in futures:
            add(f.result())
    return report
