"""The spine, the entangled spanning tree T', and the complexes C' and C''.

The ambient complex is the cuboid complex of size (2n+1) x n x n. Paths are
built on lattice coordinates; tree edges are either diagonals (recorded with
their host face) or edges of the cuboid complex.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .complex import TwoComplex, contract_edge_set, subdivide_faces
from .cuboid import (
    BLACK,
    WHITE,
    Coloring,
    CuboidComplex,
    Diagonal,
    build_cuboid,
    crossing_set,
    two_color,
)
from .graphs import Multigraph

N_MIN = 20

Point = tuple[int, int, int]


class ConstructionError(RuntimeError):
    """A construction step could not be carried out."""


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One step of a path: a diagonal (ref = host face) or a complex edge
    (ref = edge id), walked from u to v."""

    u: int
    v: int
    kind: str
    ref: int


@dataclass
class FacialPath:
    vertices: list[int]
    steps: list[Step]

    def __len__(self) -> int:
        return len(self.steps)

    def diagonal_steps(self) -> list[Step]:
        return [s for s in self.steps if s.kind == "diag"]


def _step(c: CuboidComplex, u: int, v: int) -> Step:
    dg = c.diagonal_between(u, v)
    if dg is not None:
        return Step(u, v, "diag", dg.face)
    e = c.edge_between(u, v)
    if e is not None:
        return Step(u, v, "edge", e)
    raise ConstructionError(f"{c.coords_of(u)} and {c.coords_of(v)} share no face")


def path_from_points(c: CuboidComplex, points: Sequence[Point]) -> FacialPath:
    for p in points:
        if not c.contains(p):
            raise ConstructionError(f"point {p} lies outside the box")
    ids = [c.vertex_id(*p) for p in points]
    return FacialPath(ids, [_step(c, a, b) for a, b in zip(ids, ids[1:])])


def starting_segment(c: CuboidComplex, v: Point) -> FacialPath:
    """Three diagonals and one complex edge (the third step) from v."""
    x, y, z = v
    pts = [(x, y, z), (x + 1, y + 1, z), (x + 1, y, z + 1), (x + 2, y, z + 1), (x + 3, y + 1, z + 1)]
    return path_from_points(c, pts)


def ending_segment(c: CuboidComplex, v: Point) -> FacialPath:
    """Three diagonals and one complex edge (the second step) from v."""
    x, y, z = v
    pts = [(x, y, z), (x + 1, y + 1, z), (x + 2, y + 1, z), (x + 2, y, z + 1), (x + 3, y + 1, z + 1)]
    return path_from_points(c, pts)


def overhand_waypoints(side: str, n: int) -> list[Point]:
    """Axis-parallel polylines whose facial approximations are P2 and P4."""
    if n < N_MIN:
        raise ValueError(f"n must be at least {N_MIN}")
    if side == "right":
        return [
            (n + 2, 1, 1), (n + 6, 1, 1), (n + 6, 5, 1), (n + 10, 5, 1), (n + 10, 5, 13),
            (n + 10, 13, 13), (n + 6, 13, 13), (n + 6, 13, 5), (n + 6, 1, 5), (n + 14, 1, 5),
            (n + 14, 1, 9), (n + 14, 9, 9), (n + 2, 9, 9),
        ]
    if side == "left":
        return [
            (n - 1, 9, 6), (n - 13, 9, 6), (n - 13, 17, 6), (n - 13, 17, 10), (n - 5, 17, 10),
            (n - 5, 5, 10), (n - 5, 5, 2), (n - 9, 5, 2), (n - 9, 13, 2), (n - 9, 13, 14),
            (n - 5, 13, 14), (n - 5, 17, 14), (n - 1, 17, 14),
        ]
    raise ValueError("side must be 'right' or 'left'")


_DIAG_DIRS = tuple(
    d
    for d in (
        (a, b, 0) for a in (1, -1) for b in (1, -1)
    )
) + tuple((a, 0, b) for a in (1, -1) for b in (1, -1)) + tuple((0, a, b) for a in (1, -1) for b in (1, -1))


def _in_tube(p: Point, a: Point, b: Point) -> bool:
    """Chebyshev distance at most 1 from the axis-parallel segment ab."""
    for i in range(3):
        lo, hi = min(a[i], b[i]), max(a[i], b[i])
        if not (lo - 1 <= p[i] <= hi + 1):
            return False
    return True


def approximate_facial_path(
    c: CuboidComplex,
    coloring: Coloring,
    waypoints: Sequence[Point],
    allowed: Callable[[Point], bool] = lambda p: True,
) -> FacialPath:
    """Facial path of diagonals staying within distance 1 of a polyline.

    Dijkstra over (vertex, segment index, last direction), minimising the
    number of steps and then the number of direction changes. Fewer turns
    means diagonal corners are cut by collinear runs. ``allowed`` restricts
    interior vertices (endpoints are exempt).
    """
    if len(waypoints) < 2:
        raise ValueError("need at least two waypoints")
    colors = {coloring.color_of_point(w) for w in waypoints}
    if len(colors) != 1:
        raise ValueError("waypoints must share a colour")
    for a, b in zip(waypoints, waypoints[1:]):
        if sum(1 for i in range(3) if a[i] != b[i]) != 1:
            raise ValueError(f"waypoints {a} and {b} are not axis-aligned")
    segs = list(zip(waypoints, waypoints[1:]))
    start, goal = tuple(waypoints[0]), tuple(waypoints[-1])
    last = len(segs) - 1

    def ok(p: Point, k: int) -> bool:
        if not c.contains(p) or not _in_tube(p, *segs[k]):
            return False
        return p == goal or p == start or allowed(p)

    start_state = (start, 0, -1)
    dist = {start_state: (0, 0)}
    pred: dict = {}
    heap = [(0, 0, 0, start_state)]
    counter = 1
    found = None
    while heap:
        steps, turns, _, state = heapq.heappop(heap)
        if dist.get(state) != (steps, turns):
            continue
        p, k, ld = state
        if p == goal and k == last:
            found = state
            break
        nexts = []
        if k < last and _in_tube(p, *segs[k + 1]):
            nexts.append(((p, k + 1, ld), steps, turns))
        for di, d in enumerate(_DIAG_DIRS):
            q = (p[0] + d[0], p[1] + d[1], p[2] + d[2])
            if q == start or not ok(q, k):
                continue
            nexts.append(((q, k, di), steps + 1, turns + (1 if ld not in (-1, di) else 0)))
        for ns, s2, t2 in nexts:
            if (s2, t2) < dist.get(ns, (1 << 60, 0)):
                dist[ns] = (s2, t2)
                pred[ns] = state
                heapq.heappush(heap, (s2, t2, counter, ns))
                counter += 1
    if found is None:
        raise ConstructionError(f"no facial path within the tube from {start} to {goal}")
    pts = []
    state = found
    while True:
        if not pts or pts[-1] != state[0]:
            pts.append(state[0])
        if state == start_state:
            break
        state = pred[state]
    pts.reverse()
    if len(set(pts)) != len(pts):
        raise ConstructionError("approximating path repeats a vertex")
    return path_from_points(c, pts)


def build_P3(c: CuboidComplex, n: int) -> FacialPath:
    """Three collinear diagonals in the plane y = 9 from B to A'."""
    if n < N_MIN:
        raise ValueError(f"n must be at least {N_MIN}")
    return path_from_points(c, [(n + 2, 9, 9), (n + 1, 9, 8), (n, 9, 7), (n - 1, 9, 6)])


# ---------------------------------------------------------------------------
# Spine
# ---------------------------------------------------------------------------


@dataclass
class Spine:
    n: int
    segments: dict[str, FacialPath]
    markers: dict[str, int]

    @cached_property
    def vertices(self) -> list[int]:
        out = list(self.segments["P1"].vertices)
        for name in ("P2", "P3", "P4", "P5"):
            out += self.segments[name].vertices[1:]
        return out

    @cached_property
    def steps(self) -> list[Step]:
        return [s for name in ("P1", "P2", "P3", "P4", "P5") for s in self.segments[name].steps]


def _concat_ok(a: FacialPath, b: FacialPath) -> bool:
    return a.vertices[-1] == b.vertices[0]


def collinear_triples(c: CuboidComplex, path: FacialPath) -> list[int]:
    """Indices i such that steps i, i+1, i+2 are diagonals with one direction."""
    out = []
    pts = [c.coords_of(v) for v in path.vertices]
    dirs = [tuple(q[j] - p[j] for j in range(3)) for p, q in zip(pts, pts[1:])]
    for i in range(len(path.steps) - 2):
        if all(path.steps[i + j].kind == "diag" for j in range(3)) and dirs[i] == dirs[i + 1] == dirs[i + 2]:
            out.append(i)
    return out


def build_spine(n: int, c: CuboidComplex | None = None, coloring: Coloring | None = None) -> Spine:
    """Starting segment, two overhand facial paths joined by P3, ending segment."""
    if n < N_MIN:
        raise ValueError(f"n must be at least {N_MIN}")
    c = c or build_cuboid(2 * n + 1, n, n)
    coloring = coloring or two_color(c, (n - 1, 0, 0), WHITE)
    p1 = starting_segment(c, (n - 1, 0, 0))
    p2 = approximate_facial_path(c, coloring, overhand_waypoints("right", n), lambda p: p[0] >= n + 3)
    p3 = build_P3(c, n)
    p4 = approximate_facial_path(c, coloring, overhand_waypoints("left", n), lambda p: p[0] <= n - 2)
    p5 = ending_segment(c, (n - 1, 17, 14))
    segs = {"P1": p1, "P2": p2, "P3": p3, "P4": p4, "P5": p5}
    vid = c.vertex_id
    markers = {
        "O": vid(n, 0, 1),
        "A": vid(n + 2, 1, 1),
        "B": vid(n + 2, 9, 9),
        "A'": vid(n - 1, 9, 6),
        "B'": vid(n - 1, 17, 14),
        "O'": vid(n + 1, 18, 14),
    }
    spine = Spine(n, segs, markers)
    problems = validate_spine(c, coloring, spine)
    if problems:
        raise ConstructionError("invalid spine: " + "; ".join(problems))
    return spine


def validate_spine(c: CuboidComplex, coloring: Coloring, spine: Spine) -> list[str]:
    """All spine invariants; returns a list of violated conditions."""
    n = spine.n
    segs = spine.segments
    m = spine.markers
    problems = []
    order = ["P1", "P2", "P3", "P4", "P5"]
    for a, b in zip(order, order[1:]):
        if not _concat_ok(segs[a], segs[b]):
            problems.append(f"{a} does not end where {b} starts")
    verts = spine.vertices
    if len(set(verts)) != len(verts):
        problems.append("spine repeats a vertex")
    if segs["P1"].vertices[-1] != m["A"] or segs["P2"].vertices[0] != m["A"]:
        problems.append("A misplaced")
    if segs["P2"].vertices[-1] != m["B"] or segs["P4"].vertices[0] != m["A'"]:
        problems.append("B or A' misplaced")
    if segs["P4"].vertices[-1] != m["B'"]:
        problems.append("B' misplaced")
    if m["O"] not in segs["P1"].vertices or m["O'"] not in segs["P5"].vertices:
        problems.append("O or O' not on the end segments")
    for name in ("P2", "P3", "P4"):
        seg = segs[name]
        if any(s.kind != "diag" for s in seg.steps):
            problems.append(f"{name} uses a complex edge")
        if {coloring.color(c, v) for v in seg.vertices} != {BLACK}:
            problems.append(f"{name} is not all black")
    for name in ("P1", "P5"):
        if sum(1 for s in segs[name].steps if s.kind == "edge") != 1:
            problems.append(f"{name} must contain exactly one complex edge")
    # Slab conditions on the doubly knotted part P2 P3 P4.
    dk = segs["P2"].vertices + segs["P3"].vertices[1:] + segs["P4"].vertices[1:]
    iA, iB = 0, len(segs["P2"].vertices) - 1
    iA2 = iB + len(segs["P3"].vertices) - 1
    iB2 = len(dk) - 1
    xs = [c.coords_of(v)[0] for v in dk]
    if [i for i, x in enumerate(xs) if x >= n + 2] != list(range(iA, iB + 1)):
        problems.append("half-space x >= n+2 does not meet the path exactly in A..B")
    if [i for i, x in enumerate(xs) if x <= n - 1] != list(range(iA2, iB2 + 1)):
        problems.append("half-space x <= n-1 does not meet the path exactly in A'..B'")
    if [i for i, x in enumerate(xs) if n - 1 < x < n + 2] != list(range(iB + 1, iA2)):
        problems.append("strip n-1 < x < n+2 does not meet the path exactly inside B..A'")
    if any(x < n + 3 for x in xs[iA + 1:iB]):
        problems.append("P2 interior has abscissa below n+3")
    if any(x > n - 2 for x in xs[iA2 + 1:iB2]):
        problems.append("P4 interior has abscissa above n-2")
    for name in ("P2", "P4"):
        if not collinear_triples(c, segs[name]):
            problems.append(f"{name} has no three collinear diagonals")
    # No two non-consecutive spine vertices at distance 1.
    pos = {c.coords_of(v): i for i, v in enumerate(verts)}
    for p, i in pos.items():
        for d in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            q = (p[0] + d[0], p[1] + d[1], p[2] + d[2])
            j = pos.get(q)
            if j is not None and abs(i - j) != 1:
                problems.append(f"spine vertices {p} and {q} are at distance 1")
    return problems


# ---------------------------------------------------------------------------
# Spanning trees
# ---------------------------------------------------------------------------


def extend_forest_to_spanning_tree(
    g: Multigraph,
    forest: Iterable,
    seed: int = 0,
    deprioritize: Iterable = (),
) -> list:
    """Spanning tree of g containing the given forest (edge ids).

    Remaining edges are added greedily in order of their endpoint pairs, the
    order shuffled by ``seed`` when it is nonzero. Edges touching a vertex in
    ``deprioritize`` are tried last.
    """
    parent: dict = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for k in forest:
        a, b = g.edges[k]
        ra, rb = find(a), find(b)
        if ra == rb:
            raise ValueError(f"forest contains a cycle through edge {k!r}")
        parent[ra] = rb
        tree.append(k)
    fset = set(tree)
    rest = sorted((k for k in g.edges if k not in fset), key=lambda k: (tuple(sorted(g.edges[k])), repr(k)))
    if seed:
        random.Random(seed).shuffle(rest)
    late = set(deprioritize)
    if late:
        rest = [k for k in rest if not (set(g.edges[k]) & late)] + [k for k in rest if set(g.edges[k]) & late]
    for k in rest:
        a, b = g.edges[k]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append(k)
            if len(tree) == len(g.vertices) - 1:
                break
    if len(tree) != max(len(g.vertices) - 1, 0):
        raise ValueError("graph is disconnected; no spanning tree exists")
    return tree


@dataclass(frozen=True)
class TreeEdge:
    u: int
    v: int
    kind: str  # "diag" (ref = host face) or "edge" (ref = complex edge id)
    ref: int


def _diag_graph(c: CuboidComplex, coloring: Coloring, color: str, keep: Callable[[Point], bool],
                drop_vertices: Iterable[int] = (), drop_faces: Iterable[int] = ()) -> Multigraph:
    """Diagonal graph of one colour on the vertices accepted by ``keep``."""
    dv, df = set(drop_vertices), set(drop_faces)
    verts = [v for v, p in c.coords.items() if coloring.color_of_point(p) == color and keep(p) and v not in dv]
    vs = set(verts)
    edges = {}
    for f in c.face_squares:
        if f in df:
            continue
        for dg in c.diagonals_of_face(f):
            if dg.u in vs and dg.v in vs:
                edges[f] = (dg.u, dg.v)
    return Multigraph(verts, edges)


def build_Gb_centre(c: CuboidComplex, coloring: Coloring, spine: Spine) -> Multigraph:
    """Black diagonals in the slab n <= x <= n+1, minus the first and last black
    spine vertices and the two black diagonals crossing white spine steps there."""
    n = spine.n
    black_spine = [v for v in spine.vertices if coloring.color(c, v) == BLACK]
    drop_v = [black_spine[0], black_spine[-1]]
    white_steps = [s for s in spine.steps if s.kind == "diag" and coloring.color(c, s.u) == WHITE]
    drop_f = []
    for s in white_steps:
        xs = {c.coords_of(s.u)[0], c.coords_of(s.v)[0]}
        if xs <= {n, n + 1}:
            drop_f.append(s.ref)
    return _diag_graph(c, coloring, BLACK, lambda p: n <= p[0] <= n + 1, drop_v, drop_f)


@dataclass
class SpanningTreePlan:
    n: int
    seed: int
    cuboid: CuboidComplex
    coloring: Coloring
    spine: Spine
    parts: dict[str, list[TreeEdge]]
    crossing: set[Diagonal]
    triples: dict[str, list[int]] = field(default_factory=dict)

    @cached_property
    def tree_edges(self) -> list[TreeEdge]:
        seen = {}
        for name in ("P", "Tb1", "Tb2", "Tb3", "Tw1", "Tw2"):
            for t in self.parts[name]:
                seen.setdefault((t.kind, t.ref), t)
        return list(seen.values())

    def diagonal_edges(self) -> list[TreeEdge]:
        return [t for t in self.tree_edges if t.kind == "diag"]

    def complex_edges(self) -> list[TreeEdge]:
        return [t for t in self.tree_edges if t.kind == "edge"]


def _tree_edges_from_faces(g: Multigraph, faces: Iterable[int]) -> list[TreeEdge]:
    out = []
    for f in faces:
        a, b = g.edges[f]
        out.append(TreeEdge(min(a, b), max(a, b), "diag", f))
    return out


def _path_faces(path: FacialPath) -> list[int]:
    return [s.ref for s in path.steps if s.kind == "diag"]


def triple_middle_vertices(c: CuboidComplex, path: FacialPath) -> list[int]:
    """Middle vertices of the first collinear triple of diagonals on path."""
    idx = collinear_triples(c, path)
    if not idx:
        return []
    i = idx[0]
    return [path.vertices[i + 1], path.vertices[i + 2]]


def build_tree(n: int, seed: int = 0, exact_triple_links: bool = True) -> SpanningTreePlan:
    """The spanning tree T' = P + T^b + T^w1 + T^w2.

    With ``exact_triple_links`` the extension avoids extra tree diagonals at
    the middle vertices of the first collinear triples of P2 and P4, so that
    contracting the middle diagonal gives a link exactly equal to G14.
    """
    if n < N_MIN:
        raise ValueError(f"n must be at least {N_MIN}")
    c = build_cuboid(2 * n + 1, n, n)
    coloring = two_color(c, (n - 1, 0, 0), WHITE)
    spine = build_spine(n, c, coloring)
    segs = spine.segments
    mid2 = triple_middle_vertices(c, segs["P2"]) if exact_triple_links else []
    mid4 = triple_middle_vertices(c, segs["P4"]) if exact_triple_links else []

    gb_right = _diag_graph(c, coloring, BLACK, lambda p: p[0] >= n + 2)
    gb_left = _diag_graph(c, coloring, BLACK, lambda p: p[0] <= n - 1)
    gb_centre = build_Gb_centre(c, coloring, spine)
    try:
        tb1 = extend_forest_to_spanning_tree(gb_right, _path_faces(segs["P2"]), seed, mid2)
        tb2 = extend_forest_to_spanning_tree(gb_left, _path_faces(segs["P4"]), seed, mid4)
        tb3 = extend_forest_to_spanning_tree(gb_centre, [_path_faces(segs["P3"])[1]], seed)
    except ValueError as exc:
        raise ConstructionError(f"black tree extension failed: {exc}") from exc

    spine_edges = []
    for s in spine.steps:
        if s.kind == "diag":
            dg = c.diagonals_of_face(s.ref)
            d = dg[0] if {dg[0].u, dg[0].v} == {s.u, s.v} else dg[1]
            spine_edges.append(TreeEdge(d.u, d.v, "diag", s.ref))
        else:
            spine_edges.append(TreeEdge(min(s.u, s.v), max(s.u, s.v), "edge", s.ref))
    parts = {
        "P": spine_edges,
        "Tb1": _tree_edges_from_faces(gb_right, tb1),
        "Tb2": _tree_edges_from_faces(gb_left, tb2),
        "Tb3": _tree_edges_from_faces(gb_centre, tb3),
    }
    black_faces = {t.ref for name in ("Tb1", "Tb2", "Tb3") for t in parts[name]}
    black_faces |= {t.ref for t in spine_edges if t.kind == "diag" and coloring.color(c, t.u) == BLACK}
    tb_diagonals = []
    for f in sorted(black_faces):
        d1, d2 = c.diagonals_of_face(f)
        tb_diagonals.append(d1 if coloring.color(c, d1.u) == BLACK else d2)
    crossing = crossing_set(c, tb_diagonals)
    crossing_faces = {d.face for d in crossing}

    gw_right = _diag_graph(c, coloring, WHITE, lambda p: p[0] >= n + 1, drop_faces=crossing_faces)
    gw_left = _diag_graph(c, coloring, WHITE, lambda p: p[0] <= n, drop_faces=crossing_faces)
    p5w = [s.ref for s in segs["P5"].steps if s.kind == "diag"][-2:]
    p1w = [s.ref for s in segs["P1"].steps if s.kind == "diag"][:2]
    try:
        tw1 = extend_forest_to_spanning_tree(gw_right, p5w, seed)
        tw2 = extend_forest_to_spanning_tree(gw_left, p1w, seed)
    except ValueError as exc:
        raise ConstructionError(f"white tree extension failed: {exc}") from exc
    parts["Tw1"] = _tree_edges_from_faces(gw_right, tw1)
    parts["Tw2"] = _tree_edges_from_faces(gw_left, tw2)
    plan = SpanningTreePlan(n, seed, c, coloring, spine, parts, crossing)
    plan.triples = {
        "P2": collinear_triples(c, segs["P2"]),
        "P4": collinear_triples(c, segs["P4"]),
    }
    return plan


# ---------------------------------------------------------------------------
# C', C'' and fundamental cycles
# ---------------------------------------------------------------------------


@dataclass
class Pipeline:
    """T' together with C' and the tree expressed in C' edge ids."""

    plan: SpanningTreePlan
    cprime: TwoComplex
    diag_edge: dict[int, int]  # host face id -> C' edge id of the diagonal
    tree_ids: list[int]

    @property
    def cuboid(self) -> CuboidComplex:
        return self.plan.cuboid

    @cached_property
    def tree_id_set(self) -> frozenset[int]:
        return frozenset(self.tree_ids)

    @cached_property
    def non_tree_edges(self) -> list[int]:
        return sorted(e for e in self.cprime.edges if e not in self.tree_id_set)

    @cached_property
    def rooted(self) -> tuple[dict, dict, dict]:
        """(parent vertex, parent edge, depth) of T' rooted at A."""
        root = self.plan.spine.markers["A"]
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.cprime.vertices}
        for e in self.tree_ids:
            a, b = self.cprime.edges[e]
            adj[a].append((b, e))
            adj[b].append((a, e))
        parent = {root: None}
        pedge = {root: None}
        depth = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, e in adj[u]:
                if w not in parent:
                    parent[w] = u
                    pedge[w] = e
                    depth[w] = depth[u] + 1
                    queue.append(w)
        return parent, pedge, depth

    @cached_property
    def cdoubleprime(self) -> TwoComplex:
        return build_Cdoubleprime(self)

    def spine_edge_ids(self, name: str) -> list[int]:
        return [self._step_id(s) for s in self.plan.spine.segments[name].steps]

    def _step_id(self, s: Step) -> int:
        return self.diag_edge[s.ref] if s.kind == "diag" else s.ref


def build_Cprime(plan: SpanningTreePlan) -> Pipeline:
    """Subdivide every face hosting a tree diagonal along that diagonal."""
    c = plan.cuboid
    diags = plan.diagonal_edges()
    faces = [t.ref for t in diags]
    if len(set(faces)) != len(faces):
        raise ConstructionError("a face hosts two tree diagonals")
    cprime, new_edges, _ = subdivide_faces(c.complex, [(t.ref, t.u, t.v) for t in diags])
    diag_edge = {t.ref: e for t, e in zip(diags, new_edges)}
    tree_ids = [diag_edge[t.ref] if t.kind == "diag" else t.ref for t in plan.tree_edges]
    return Pipeline(plan, cprime, diag_edge, tree_ids)


def build_Cdoubleprime(pipe: Pipeline) -> TwoComplex:
    """C'' = C' / T': one vertex, every edge a loop."""
    return contract_edge_set(pipe.cprime, pipe.tree_ids)


def build_pipeline(n: int, seed: int = 0) -> Pipeline:
    return build_Cprime(build_tree(n, seed))


@dataclass
class FundamentalCycle:
    edge: int
    vertices: list[int]  # closed: vertices[i] -> vertices[i+1], last -> first via `edge`
    edges: list[int]  # edges[i] joins vertices[i] and vertices[i+1 mod len]


def fundamental_cycle(pipe: Pipeline, e: int) -> FundamentalCycle:
    """The edge e followed by the tree path back to its start."""
    if e in pipe.tree_id_set:
        raise ValueError(f"edge {e} belongs to the tree")
    if e not in pipe.cprime.edges:
        raise KeyError(f"unknown edge {e}")
    parent, pedge, depth = pipe.rooted
    x, y = pipe.cprime.edges[e]
    # tree path from y to x
    left, right = [y], [x]
    le, re_ = [], []
    a, b = y, x
    while depth[a] > depth[b]:
        le.append(pedge[a])
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        re_.append(pedge[b])
        b = parent[b]
        right.append(b)
    while a != b:
        le.append(pedge[a])
        a = parent[a]
        left.append(a)
        re_.append(pedge[b])
        b = parent[b]
        right.append(b)
    # x, then y up to the common ancestor, then back down to x
    verts = ([x] + left + list(reversed(right[:-1])))[:-1]
    edges = [e] + le + list(reversed(re_))
    if len(verts) != len(edges):
        raise AssertionError("fundamental cycle bookkeeping failed")
    return FundamentalCycle(e, verts, edges)


def contains_subpath(cycle: FundamentalCycle, path_edges: Sequence[int]) -> bool:
    """Whether the cycle's edge set contains every edge of the path."""
    es = set(cycle.edges)
    return all(p in es for p in path_edges)


@dataclass(frozen=True)
class CollinearTriple:
    e1: int
    e2: int
    e3: int
    vertices: tuple[int, int, int, int]  # e1-, e1+ = e2-, e2+ = e3-, e3+
    path: str


def find_collinear_triple(pipe: Pipeline, cycle: FundamentalCycle) -> CollinearTriple:
    """First collinear triple of an overhand path the cycle contains."""
    c = pipe.cuboid
    for name in ("P2", "P4"):
        ids = pipe.spine_edge_ids(name)
        if not contains_subpath(cycle, ids):
            continue
        seg = pipe.plan.spine.segments[name]
        idx = collinear_triples(c, seg)
        if idx:
            i = idx[0]
            v = seg.vertices
            return CollinearTriple(ids[i], ids[i + 1], ids[i + 2], (v[i], v[i + 1], v[i + 2], v[i + 3]), name)
    raise ValueError(f"cycle of edge {cycle.edge} contains no collinear diagonal triple")


def collinear_triple_in_walk(c: CuboidComplex, cx: TwoComplex, vertices: Sequence[int],
                             edges: Sequence[int]) -> CollinearTriple | None:
    """Scan a closed walk for three consecutive edges in one diagonal direction."""
    m = len(vertices)
    pts = [c.coords_of(v) for v in vertices]
    dirs = [tuple(pts[(i + 1) % m][j] - pts[i][j] for j in range(3)) for i in range(m)]
    for i in range(m):
        d = dirs[i]
        if sum(1 for x in d if x) == 2 and d == dirs[(i + 1) % m] == dirs[(i + 2) % m]:
            vs = tuple(vertices[(i + k) % m] for k in range(4))
            return CollinearTriple(edges[i], edges[(i + 1) % m], edges[(i + 2) % m], vs, "walk")
    return None


def routing_labels(pipe: Pipeline, name: str) -> tuple[dict, int, int]:
    """Component labels of T' with the edges of one spine segment removed,
    plus the labels of the segment's two end components."""
    removed = set(pipe.spine_edge_ids(name))
    adj: dict[int, list[int]] = {v: [] for v in pipe.cprime.vertices}
    for e in pipe.tree_ids:
        if e in removed:
            continue
        a, b = pipe.cprime.edges[e]
        adj[a].append(b)
        adj[b].append(a)
    label: dict[int, int] = {}
    for s in pipe.cprime.vertices:
        if s in label:
            continue
        label[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in label:
                    label[w] = s
                    stack.append(w)
    seg = pipe.plan.spine.segments[name]
    return label, label[seg.vertices[0]], label[seg.vertices[-1]]


def expected_segment(pipe: Pipeline, e: int) -> str:
    """Which overhand path the routing rule promises for a non-tree edge."""
    c = pipe.cuboid
    n = pipe.plan.n
    a, b = pipe.cprime.edges[e]
    white = [v for v in (a, b) if pipe.plan.coloring.color(c, v) == WHITE]
    if len(white) != 1:
        raise AssertionError(f"non-tree edge {e} does not join the two colours")
    x = c.coords_of(white[0])[0]
    return "P4" if x >= n + 1 else "P2"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

SPINE_SCHEMA = "knotcomplex.spine/1"
TREE_SCHEMA = "knotcomplex.tree/1"


def _step_json(s: Step | TreeEdge) -> list:
    return [s.u, s.v, s.kind, s.ref]


def spine_to_json(c: CuboidComplex, spine: Spine) -> dict:
    return {
        "schema": SPINE_SCHEMA,
        "n": spine.n,
        "markers": {k: {"vertex": v, "coords": list(c.coords_of(v))} for k, v in spine.markers.items()},
        "segments": {
            name: {"vertices": list(p.vertices), "steps": [_step_json(s) for s in p.steps]}
            for name, p in spine.segments.items()
        },
    }


def spine_from_json(data: dict) -> Spine:
    if data.get("schema") != SPINE_SCHEMA:
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    segments = {
        name: FacialPath(list(p["vertices"]), [Step(*s) for s in p["steps"]])
        for name, p in data["segments"].items()
    }
    return Spine(data["n"], segments, {k: m["vertex"] for k, m in data["markers"].items()})


def tree_to_json(plan: SpanningTreePlan) -> dict:
    """Tree edges by construction part, plus the deduplicated union."""
    return {
        "schema": TREE_SCHEMA,
        "n": plan.n,
        "seed": plan.seed,
        "parts": {name: [_step_json(t) for t in plan.parts[name]] for name in sorted(plan.parts)},
        "edges": [_step_json(t) for t in plan.tree_edges],
        "edge_count": len(plan.tree_edges),
        "crossing_faces": sorted(d.face for d in plan.crossing),
    }


def tree_edges_from_json(data: dict) -> list[TreeEdge]:
    if data.get("schema") != TREE_SCHEMA:
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    return [TreeEdge(*t) for t in data["edges"]]
