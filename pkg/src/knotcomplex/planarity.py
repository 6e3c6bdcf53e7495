"""Planarity with self-checking witnesses, minor certificates, small-graph
isomorphism, and the named graphs G14, G13 and the double wheels."""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .graphs import Multigraph, complete_bipartite, complete_graph, is_2_connected  # noqa: F401
from .rotation import genus_of_rotation

# ---------------------------------------------------------------------------
# Named graphs
# ---------------------------------------------------------------------------

G14_VERTICES = (
    "X1", "X2", "X3", "Y1", "Y2", "Y31", "Y32", "K", "L", "M", "N", "Q", "R", "S",
)
G14_EDGES = (
    ("X1", "Y1"), ("X1", "Y2"), ("X2", "Y1"), ("X2", "Y2"), ("X3", "Y1"),
    ("X3", "Y2"), ("X1", "Y31"), ("X3", "K"), ("K", "Y31"), ("X2", "L"),
    ("L", "M"), ("M", "Y32"), ("Y2", "K"), ("Y1", "K"), ("X1", "X2"),
    ("X3", "S"), ("L", "Q"), ("L", "N"), ("M", "Q"), ("M", "N"),
    ("R", "Y32"), ("R", "Q"), ("R", "N"), ("R", "S"), ("S", "Q"), ("S", "N"),
)

# Contracting X2-L, X2-M and X3-K in G13 leaves every X-Y edge present.
G13_K33_SCRIPT = {
    "contract": [("X2", "L"), ("X2", "M"), ("X3", "K")],
    "left": ["X1", "X2", "X3"],
    "right": ["Y1", "Y2", "Y3"],
}


def make_G14() -> Multigraph:
    return Multigraph.from_labeled_edges(G14_VERTICES, G14_EDGES)


def make_G13() -> Multigraph:
    """G14 with Y31 and Y32 identified into Y3."""
    return make_G14().identify("Y31", "Y32", new_label="Y3").relabeled({"Y31": "Y3"})


def make_double_wheel(modified: bool = False) -> Multigraph:
    """Octahedron (K6 minus a perfect matching); ``modified`` drops one edge."""
    names = [f"w{i}" for i in range(6)]
    pairs = [(names[i], names[j]) for i, j in combinations(range(6), 2) if j != i + 3]
    if modified:
        pairs = pairs[1:]
    return Multigraph.from_labeled_edges(names, pairs)


# ---------------------------------------------------------------------------
# Kuratowski subdivisions
# ---------------------------------------------------------------------------


@dataclass
class KuratowskiWitness:
    """A subdivision of K5 or K3,3: the graph's edge ids that form it."""

    kind: str
    edges: list
    branch_vertices: list
    paths: list = field(default_factory=list)


def classify_subdivision(g: Multigraph, edge_ids: Iterable) -> KuratowskiWitness | None:
    """Return the witness if the edges form a subdivision of K5 or K3,3."""
    edge_ids = list(dict.fromkeys(edge_ids))
    sub = g.edge_subgraph(edge_ids)
    if any(a == b for a, b in sub.edges.values()):
        return None
    deg = {v: sub.degree(v) for v in sub.vertices}
    if any(d < 2 for d in deg.values()):
        return None
    branch = [v for v, d in deg.items() if d >= 3]
    bset = set(branch)
    paths = []
    used = set()
    for b in branch:
        for k, side in sub.incidence[b]:
            if k in used:
                continue
            path = [k]
            used.add(k)
            cur = sub.edges[k][1 - side]
            prev = k
            while cur not in bset:
                nxt = [kk for kk, _ in sub.incidence[cur] if kk != prev]
                if len(nxt) != 1:
                    return None
                prev = nxt[0]
                used.add(prev)
                path.append(prev)
                a, c = sub.edges[prev]
                cur = c if a == cur else a
            paths.append((b, cur, path))
    if len(used) != len(edge_ids):
        return None  # a cycle of degree-2 vertices hangs off
    pairs = Counter(frozenset((a, b)) for a, b, _ in paths)
    if any(len(p) != 2 or m != 1 for p, m in pairs.items()):
        return None
    if len(branch) == 5 and len(pairs) == 10:
        kind = "K5"
    elif len(branch) == 6 and len(pairs) == 9 and all(deg[v] == 3 for v in branch):
        adj = {v: set() for v in branch}
        for p in pairs:
            a, b = tuple(p)
            adj[a].add(b)
            adj[b].add(a)
        side = adj[branch[0]]
        other = set(branch) - side
        if len(side) != 3 or any(adj[v] != other for v in side) or any(adj[v] != side for v in other):
            return None
        kind = "K33"
    else:
        return None
    return KuratowskiWitness(kind, edge_ids, branch, paths)


# ---------------------------------------------------------------------------
# Planarity test
# ---------------------------------------------------------------------------


@dataclass
class PlanarityVerdict:
    planar: bool
    rotation: dict | None = None
    witness: KuratowskiWitness | None = None
    certified: bool = False


def _simple_nx(g: Multigraph) -> tuple[nx.Graph, dict]:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    rep = {}
    for k, (a, b) in g.edges.items():
        if a == b:
            continue
        key = frozenset((a, b))
        if key not in rep:
            rep[key] = k
            h.add_edge(a, b)
    return h, rep


def _rotation_from_embedding(g: Multigraph, emb: nx.PlanarEmbedding) -> dict:
    parallel: dict = {}
    loops: dict = {}
    for k, (a, b) in g.edges.items():
        if a == b:
            loops.setdefault(a, []).append(k)
        else:
            parallel.setdefault(frozenset((a, b)), []).append(k)
    order = {v: i for i, v in enumerate(g.vertices)}
    rot = {}
    for v in g.vertices:
        darts = []
        for w in (emb.neighbors_cw_order(v) if v in emb else []):
            ks = sorted(parallel[frozenset((v, w))], key=repr)
            if order[v] > order[w]:
                ks.reverse()
            for k in ks:
                a, _ = g.edges[k]
                darts.append((k, 0 if a == v else 1))
        for k in loops.get(v, []):
            darts += [(k, 0), (k, 1)]
        rot[v] = darts
    return rot


def _series_reduce(edges: list) -> list:
    """Reduce a graph given as super-edges ``(a, b, path)``.

    Deletes loops, parallel copies (keeping the first), degree <= 1 vertices,
    and suppresses degree-2 vertices by concatenating paths. Planarity is
    unchanged and every Kuratowski subgraph of the result expands to one of
    the input.
    """
    adj: dict = {}
    store: dict = {}
    for i, (a, b, path) in enumerate(edges):
        if a == b or b in adj.get(a, {}):
            continue
        adj.setdefault(a, {})[b] = i
        adj.setdefault(b, {})[a] = i
        store[i] = (a, b, path)
    nid = len(edges)
    queue = deque(v for v in adj if len(adj[v]) <= 2)
    while queue:
        v = queue.popleft()
        if v not in adj or len(adj[v]) > 2:
            continue
        nbrs = list(adj.pop(v).items())
        paths = []
        for w, k in nbrs:
            del adj[w][v]
            paths.append(store.pop(k)[2])
        if len(nbrs) == 2:
            (a, _), (b, _) = nbrs
            if b not in adj[a]:
                store[nid] = (a, b, paths[0] + paths[1])
                adj[a][b] = nid
                adj[b][a] = nid
                nid += 1
        queue.extend(w for w, _ in nbrs)
    return list(store.values())


def _nonplanar_super(edges: list) -> bool:
    h = nx.Graph()
    h.add_edges_from((a, b) for a, b, _ in edges)
    return not nx.check_planarity(h)[0]


def _minimal_nonplanar(edges: list) -> list:
    """Shrink a nonplanar super-edge graph to a minimal nonplanar one.

    Chunks of super-edges are deleted whenever the rest stays nonplanar, and
    the graph is series-reduced after each deletion; the chunk size halves
    when no chunk can go. The end result has minimum degree 3 and every edge
    essential, so it is K5 or K3,3.
    """
    cur = _series_reduce(edges)
    chunk = max(len(cur) // 2, 1)
    while True:
        i = 0
        removed = False
        while i < len(cur):
            trial = _series_reduce(cur[:i] + cur[i + chunk:])
            if trial and _nonplanar_super(trial):
                cur = trial
                removed = True
            else:
                i += chunk
        if chunk == 1 and not removed:
            return cur
        if not removed:
            chunk = max(chunk // 2, 1)
        else:
            chunk = max(min(chunk, len(cur) // 2), 1)


def kuratowski_witness(g: Multigraph) -> KuratowskiWitness | None:
    """Find a Kuratowski subdivision inside a nonplanar multigraph."""
    supers = [(a, b, [k]) for k, (a, b) in g.edges.items() if a != b]
    core = _minimal_nonplanar(supers)
    return classify_subdivision(g, [k for _, _, path in core for k in path])


def is_planar(g: Multigraph, certify: bool = True) -> PlanarityVerdict:
    """Planarity of a multigraph with a self-checked witness.

    A planar verdict carries a rotation system that passes the Euler check; a
    nonplanar one carries a Kuratowski subdivision. ``certify=False`` skips
    witness construction for very large graphs.
    """
    h, _ = _simple_nx(g)
    planar, emb = nx.check_planarity(h)
    if not certify:
        return PlanarityVerdict(planar)
    if planar:
        rot = _rotation_from_embedding(g, emb)
        if not genus_of_rotation(g, rot)["planar"]:
            raise AssertionError("embedding failed the Euler check")
        return PlanarityVerdict(True, rotation=rot, certified=True)
    wit = kuratowski_witness(g)
    if wit is None:
        raise AssertionError("nonplanar graph without a verifiable Kuratowski subdivision")
    return PlanarityVerdict(False, witness=wit, certified=True)


# ---------------------------------------------------------------------------
# Minor certificates
# ---------------------------------------------------------------------------


@dataclass
class MinorCertificate:
    ok: bool
    reason: str = ""
    branch_sets: dict | None = None


def verify_minor_model(g: Multigraph, h: Multigraph, branch_sets: Mapping) -> MinorCertificate:
    """Check that disjoint connected branch sets realize every edge of h."""
    owner = {}
    for x in h.vertices:
        bs = branch_sets.get(x)
        if not bs:
            return MinorCertificate(False, f"empty branch set for {x!r}")
        for v in bs:
            if v not in g.vertex_set:
                return MinorCertificate(False, f"unknown vertex {v!r}")
            if v in owner:
                return MinorCertificate(False, f"vertex {v!r} in two branch sets")
            owner[v] = x
    adj = g.adjacency
    for x in h.vertices:
        bs = set(branch_sets[x])
        start = next(iter(bs))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in bs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(bs):
            return MinorCertificate(False, f"branch set of {x!r} is disconnected")
    realized = set()
    for a, b in g.edges.values():
        oa, ob = owner.get(a), owner.get(b)
        if oa is not None and ob is not None and oa != ob:
            realized.add(frozenset((oa, ob)))
    for a, b in h.edges.values():
        if a != b and frozenset((a, b)) not in realized:
            return MinorCertificate(False, f"edge {a!r}-{b!r} not realized")
    return MinorCertificate(True, branch_sets=dict(branch_sets))


def compose_models(outer: Mapping, inner: Mapping) -> dict:
    """Branch sets in G from a model of M in G (outer) and of H in M (inner)."""
    return {x: {v for m in ms for v in outer[m]} for x, ms in inner.items()}


def k33_model_from_script(g: Multigraph, script: Mapping) -> dict:
    """Branch sets for K3,3 from a contraction script over vertex ids."""
    sets = {v: {v} for v in g.vertices}
    for u, v in script["contract"]:
        su = next(k for k, s in sets.items() if u in s)
        sv = next(k for k, s in sets.items() if v in s)
        if su == sv:
            raise ValueError(f"{u!r} and {v!r} already merged")
        sets[su] |= sets.pop(sv)
    model = {}
    for i, x in enumerate(list(script["left"]) + list(script["right"])):
        key = next(k for k, s in sets.items() if x in s)
        model[i] = sets[key]
    return model


def has_k33_minor_via(g: Multigraph, script: Mapping) -> MinorCertificate:
    """Run a contraction script and check for all nine X-Y edges.

    ``script`` has ``contract`` (pairs of adjacent vertices, the first one
    survives), ``left`` and ``right`` (three vertex ids each).
    """
    cur = g
    for u, v in script["contract"]:
        if u not in cur.vertex_set or v not in cur.vertex_set:
            raise ValueError(f"script references missing vertex {u!r} or {v!r}")
        if v not in cur.adjacency[u]:
            raise ValueError(f"{u!r} and {v!r} are not adjacent")
        cur = cur.contract(u, v)
    left, right = list(script["left"]), list(script["right"])
    if len(left) != 3 or len(right) != 3:
        raise ValueError("K3,3 sides must have three vertices each")
    missing = [(a, b) for a in left for b in right if b not in cur.adjacency.get(a, ())]
    if missing:
        return MinorCertificate(False, f"missing edges {missing}")
    model = k33_model_from_script(g, script)
    target = complete_bipartite(3, 3)
    cert = verify_minor_model(g, target, model)
    if cert.ok and is_planar(g, certify=False).planar:
        raise AssertionError("planar graph with a K3,3 minor certificate")
    return cert


def _reduce_simple(edges: set) -> set:
    """Delete degree <= 1 vertices and suppress degree-2 vertices."""
    edges = set(edges)
    while True:
        deg: Counter = Counter()
        nbr: dict = {}
        for e in edges:
            for v in e:
                deg[v] += 1
                nbr.setdefault(v, []).append(e)
        v = next((v for v, d in deg.items() if d <= 2), None)
        if v is None:
            return edges
        es = nbr[v]
        edges -= set(es)
        if len(es) == 2:
            (a,) = es[0] - {v}
            (b,) = es[1] - {v}
            if a != b:
                edges.add(frozenset((a, b)))


def _nonplanar_edges(edges) -> bool:
    h = nx.Graph()
    h.add_edges_from(tuple(e) for e in edges)
    return not nx.check_planarity(h)[0]


def _is_target(edges: set, target: str) -> bool:
    verts = {v for e in edges for v in e}
    if target == "K5":
        return len(verts) == 5 and len(edges) == 10
    if len(verts) != 6 or len(edges) < 9:
        return False
    vl = sorted(verts, key=repr)
    for side in combinations(vl[1:], 2):
        left = {vl[0], *side}
        right = verts - left
        if all(frozenset((a, b)) in edges for a in left for b in right):
            return True
    return False


def brute_force_has_minor(g: Multigraph, target: str, max_vertices: int = 16) -> bool:
    """Exhaustive deletion/contraction search for a K5 or K3,3 minor."""
    if target not in ("K5", "K33"):
        raise ValueError("target must be 'K5' or 'K33'")
    if len(g.vertices) > max_vertices:
        raise ValueError(f"brute-force minor search is limited to {max_vertices} vertices")
    start = {frozenset(e) for e in g.edges.values() if e[0] != e[1]}
    tv, te = (5, 10) if target == "K5" else (6, 9)
    memo: dict = {}

    def search(edges: frozenset) -> bool:
        edges = frozenset(_reduce_simple(edges))
        if edges in memo:
            return memo[edges]
        verts = {v for e in edges for v in e}
        if len(verts) < tv or len(edges) < te or not _nonplanar_edges(edges):
            memo[edges] = False
            return False
        if len(verts) == tv and _is_target(edges, target):
            memo[edges] = True
            return True
        if len(verts) == tv:
            memo[edges] = False
            return False
        result = False
        for e in sorted(edges, key=lambda e: sorted(map(repr, e))):
            if search(edges - {e}):
                result = True
                break
            a, b = sorted(e, key=repr)
            merged = set()
            for f in edges - {e}:
                f2 = frozenset(a if x == b else x for x in f)
                if len(f2) == 2:
                    merged.add(f2)
            if search(frozenset(merged)):
                result = True
                break
        memo[edges] = result
        return result

    return search(frozenset(start))


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


def _multiplicities(g: Multigraph) -> dict:
    m: dict = {v: Counter() for v in g.vertices}
    for a, b in g.edges.values():
        m[a][b] += 1
        if a != b:
            m[b][a] += 1
    return m


def _refine(graphs: Sequence[Multigraph], seeds: Sequence[Mapping]) -> list[dict]:
    """Joint colour refinement so colours are comparable across graphs."""
    mults = [_multiplicities(g) for g in graphs]
    colors = [{v: (seed.get(v), g.degree(v), mm[v][v]) for v in g.vertices}
              for g, mm, seed in zip(graphs, mults, seeds)]
    for _ in range(max(len(g.vertices) for g in graphs) + 1):
        sigs = []
        for g, mm, col in zip(graphs, mults, colors):
            sigs.append({v: (col[v], tuple(sorted((repr(col[w]), k) for w, k in mm[v].items())))
                         for v in g.vertices})
        palette = {s: i for i, s in enumerate(sorted({repr(s) for sig in sigs for s in sig.values()}))}
        new = [{v: palette[repr(s)] for v, s in sig.items()} for sig in sigs]
        if all(len(set(n.values())) == len(set(c.values())) for n, c in zip(new, colors)):
            return new
        colors = new
    return colors


def is_isomorphic(
    g1: Multigraph,
    g2: Multigraph,
    pinned: Mapping | None = None,
    max_vertices: int = 64,
) -> dict | None:
    """Multigraph isomorphism by backtracking; returns a vertex map or None.

    ``pinned`` fixes images of some vertices of g1.
    """
    if max(len(g1.vertices), len(g2.vertices)) > max_vertices:
        raise ValueError(f"isomorphism is limited to {max_vertices} vertices")
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    pinned = dict(pinned or {})
    seed1 = {v: i for i, v in enumerate(pinned)}
    seed2 = {w: i for i, w in enumerate(pinned.values())}
    c1, c2 = _refine([g1, g2], [seed1, seed2])
    if sorted(c1.values()) != sorted(c2.values()):
        return None
    m1, m2 = _multiplicities(g1), _multiplicities(g2)
    by_color: dict = {}
    for w in g2.vertices:
        by_color.setdefault(c2[w], []).append(w)
    # Order g1 vertices: pinned first, then BFS preferring rare colours.
    rarity = Counter(c1.values())
    order = list(pinned)
    placed = set(order)
    rest = sorted((v for v in g1.vertices if v not in placed), key=lambda v: (rarity[c1[v]], repr(v)))
    while rest:
        frontier = [v for v in rest if any(w in placed for w in m1[v])]
        v = frontier[0] if frontier else rest[0]
        order.append(v)
        placed.add(v)
        rest.remove(v)
    mapping: dict = {}
    used: set = set()

    def consistent(v, w) -> bool:
        if m1[v][v] != m2[w][w]:
            return False
        for x, k in m1[v].items():
            if x in mapping and x != v and m2[w][mapping[x]] != k:
                return False
        cnt = sum(1 for x in m1[v] if x in mapping and x != v)
        cnt2 = sum(1 for y in m2[w] if y in used and y != w)
        return cnt == cnt2

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        cands = [pinned[v]] if v in pinned else by_color.get(c1[v], [])
        for w in cands:
            if w in used or c1[v] != c2.get(w):
                continue
            if not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None
