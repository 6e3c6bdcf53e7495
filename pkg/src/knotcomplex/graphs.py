"""Multigraphs with loops and parallel edges, plus the gluing operations
used to describe link graphs under edge contraction (vertex sums and
internal vertex sums)."""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from collections.abc import Hashable, Iterable, Mapping, Sequence
from functools import cached_property

Vertex = Hashable
EdgeId = Hashable
# An endpoint slot of an edge: (edge id, 0 or 1).
Dart = tuple


class Multigraph:
    """Undirected multigraph. Loops and parallel edges are allowed.

    Instances are treated as immutable: every operation returns a new graph.
    """

    __slots__ = ("vertices", "edges", "labels", "__dict__")

    def __init__(
        self,
        vertices: Iterable[Vertex] = (),
        edges: Mapping[EdgeId, tuple[Vertex, Vertex]] | Iterable[tuple[Vertex, Vertex]] = (),
        labels: Mapping[Vertex, str] | None = None,
    ) -> None:
        self.vertices: tuple = tuple(dict.fromkeys(vertices))
        if isinstance(edges, Mapping):
            self.edges: dict = {k: (u, v) for k, (u, v) in edges.items()}
        else:
            self.edges = {i: (u, v) for i, (u, v) in enumerate(edges)}
        vset = self.vertex_set
        for k, (u, v) in self.edges.items():
            if u not in vset or v not in vset:
                raise ValueError(f"edge {k!r} has an endpoint outside the vertex set")
        self.labels = dict(labels) if labels else None
        if self.labels is not None:
            if len(set(self.labels.values())) != len(self.labels):
                raise ValueError("vertex labels must be unique")
            if any(v not in vset for v in self.labels):
                raise ValueError("label for unknown vertex")

    @classmethod
    def from_labeled_edges(cls, names: Sequence[str], pairs: Iterable[tuple[str, str]]) -> Multigraph:
        """Build a graph whose vertex ids are the given names (labels = ids)."""
        return cls(names, list(pairs), labels={v: v for v in names})

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def incidence(self) -> dict[Vertex, list[Dart]]:
        """Darts at each vertex; a loop contributes two darts."""
        inc: dict[Vertex, list[Dart]] = {v: [] for v in self.vertices}
        for k, (u, v) in self.edges.items():
            inc[u].append((k, 0))
            inc[v].append((k, 1))
        return inc

    @cached_property
    def adjacency(self) -> dict[Vertex, set[Vertex]]:
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in self.vertices}
        for u, v in self.edges.values():
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def degree(self, v: Vertex) -> int:
        return len(self.incidence[v])

    def other_end(self, dart: Dart) -> Vertex:
        k, side = dart
        return self.edges[k][1 - side]

    def label(self, v: Vertex) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Multigraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def edge_multiset(self) -> Counter:
        """Endpoint pairs as a multiset, independent of edge ids."""
        return Counter(_pair_key(u, v) for u, v in self.edges.values())

    def same_labeled_graph(self, other: Multigraph) -> bool:
        return self.vertex_set == other.vertex_set and self.edge_multiset() == other.edge_multiset()

    def subgraph(self, keep: Iterable[Vertex]) -> Multigraph:
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        edges = {k: (u, v) for k, (u, v) in self.edges.items() if u in keep and v in keep}
        labels = {v: l for v, l in self.labels.items() if v in keep} if self.labels else None
        return Multigraph(verts, edges, labels)

    def remove_vertices(self, drop: Iterable[Vertex]) -> Multigraph:
        drop = set(drop)
        return self.subgraph(v for v in self.vertices if v not in drop)

    def edge_subgraph(self, edge_ids: Iterable[EdgeId]) -> Multigraph:
        edges = {k: self.edges[k] for k in edge_ids}
        verts = {x for uv in edges.values() for x in uv}
        return Multigraph([v for v in self.vertices if v in verts], edges, self._labels_for(verts))

    def _labels_for(self, verts) -> dict | None:
        if not self.labels:
            return None
        return {v: l for v, l in self.labels.items() if v in verts}

    def components(self) -> list[list[Vertex]]:
        seen: set = set()
        comps = []
        adj = self.adjacency
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def simple_edges(self) -> dict[tuple, EdgeId]:
        """One representative edge id per adjacent pair; loops dropped."""
        rep: dict[tuple, EdgeId] = {}
        for k, (u, v) in self.edges.items():
            if u != v:
                rep.setdefault(_pair_key(u, v), k)
        return rep

    def relabeled(self, mapping: Mapping[Vertex, Vertex]) -> Multigraph:
        verts = [mapping.get(v, v) for v in self.vertices]
        edges = {k: (mapping.get(u, u), mapping.get(v, v)) for k, (u, v) in self.edges.items()}
        labels = None
        if self.labels:
            labels = {mapping.get(v, v): l for v, l in self.labels.items()}
        return Multigraph(verts, edges, labels)

    def identify(self, keep: Vertex, drop: Vertex, new_label: str | None = None) -> Multigraph:
        """Identify two vertices; edges between them become loops."""
        if keep not in self.vertex_set or drop not in self.vertex_set:
            raise KeyError("unknown vertex")
        edges = {}
        for k, (u, v) in self.edges.items():
            edges[k] = (keep if u == drop else u, keep if v == drop else v)
        labels = None
        if self.labels:
            labels = {v: l for v, l in self.labels.items() if v != drop}
            if new_label is not None:
                labels[keep] = new_label
        return Multigraph([v for v in self.vertices if v != drop], edges, labels)

    def contract(self, u: Vertex, v: Vertex) -> Multigraph:
        """Contract all u-v edges: identify v into u and drop the u-v edges."""
        if v not in self.adjacency.get(u, ()):
            raise ValueError(f"{u!r} and {v!r} are not adjacent")
        between = self._between(u, v)
        g = self.identify(u, v)
        edges = {k: uv for k, uv in g.edges.items() if k not in between}
        return Multigraph(g.vertices, edges, g.labels)

    def _between(self, u: Vertex, v: Vertex) -> set:
        key = _pair_key(u, v)
        return {k for k, (a, b) in self.edges.items() if _pair_key(a, b) == key}

    def to_dot(self, name: str = "G", highlight_edges: Iterable[EdgeId] = (),
               highlight_vertices: Iterable[Vertex] = ()) -> str:
        hv = set(highlight_vertices)
        he = set(highlight_edges)
        index = {v: i for i, v in enumerate(self.vertices)}
        lines = [f"graph {name} {{"]
        for v, i in index.items():
            attrs = [f'label="{_dot_escape(self.label(v))}"']
            if v in hv:
                attrs.append('color="red"')
                attrs.append("penwidth=2")
            lines.append(f"  n{i} [{', '.join(attrs)}];")
        for k, (u, v) in self.edges.items():
            attr = ' [color="red", penwidth=2]' if k in he else ""
            lines.append(f"  n{index[u]} -- n{index[v]}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _pair_key(u, v) -> tuple:
    try:
        return (u, v) if u <= v else (v, u)
    except TypeError:
        return (u, v) if repr(u) <= repr(v) else (v, u)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def complete_graph(k: int) -> Multigraph:
    return Multigraph(range(k), [(i, j) for i in range(k) for j in range(i + 1, k)])


def complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(k: int) -> Multigraph:
    return Multigraph(range(k), [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Multigraph:
    return Multigraph(range(k), [(i, i + 1) for i in range(k - 1)])


# ---------------------------------------------------------------------------
# Vertex sums
# ---------------------------------------------------------------------------


def _as_dart(g: Multigraph, v: Vertex, ref) -> Dart:
    """Accept a dart (edge id, side) or a bare edge id of a non-loop edge."""
    if isinstance(ref, tuple) and len(ref) == 2 and ref[0] in g.edges and ref[1] in (0, 1) \
            and g.edges[ref[0]][ref[1]] == v:
        return ref
    if ref in g.edges:
        a, b = g.edges[ref]
        if a == b:
            raise ValueError(f"loop edge {ref!r} must be given as a dart")
        if a == v:
            return (ref, 0)
        if b == v:
            return (ref, 1)
    raise ValueError(f"{ref!r} is not an edge end at {v!r}")


def _glue(
    slots: dict[Dart, Vertex],
    partner: dict[Dart, Dart],
    removed: set,
) -> list[tuple[Vertex, Vertex, tuple]]:
    """Follow chains of edges through removed vertices.

    `slots` maps every dart of every participating edge to its vertex; darts at
    removed vertices are connected pairwise by `partner`. Returns the glued
    edges as (end, end, chain of edge ids). Closed chains disappear.
    """
    out = []
    done: set[Dart] = set()
    for start, v0 in slots.items():
        if v0 in removed or start in done:
            continue
        k, side = start
        chain = [k]
        other = (k, 1 - side)
        while slots[other] in removed:
            nxt = partner[other]
            k2, s2 = nxt
            chain.append(k2)
            other = (k2, 1 - s2)
        done.add(start)
        done.add(other)
        out.append((v0, slots[other], tuple(chain)))
    return out


def vertex_sum(
    g1: Multigraph,
    v1: Vertex,
    g2: Multigraph,
    v2: Vertex,
    pairing: Sequence[tuple],
) -> Multigraph:
    """Vertex sum of two vertex-disjoint graphs at v1 and v2.

    `pairing` lists (end at v1, end at v2) pairs; an end is an edge id or a dart
    (edge id, side). Edges not touching v1/v2 are inherited with their ids;
    the new edges get fresh integer ids following the inherited ones.
    """
    if g1.vertex_set & g2.vertex_set:
        raise ValueError("vertex_sum requires vertex-disjoint graphs")
    if v1 not in g1.vertex_set or v2 not in g2.vertex_set:
        raise KeyError("unknown sum vertex")
    if g1.degree(v1) != g2.degree(v2):
        raise ValueError(f"degree mismatch: {g1.degree(v1)} != {g2.degree(v2)}")
    darts1 = set(g1.incidence[v1])
    darts2 = set(g2.incidence[v2])
    partner: dict[Dart, Dart] = {}
    for a, b in pairing:
        d1 = ("L", *_as_dart(g1, v1, a))
        d2 = ("R", *_as_dart(g2, v2, b))
        if d1 in partner or d2 in partner:
            raise ValueError("an end is paired twice")
        partner[d1] = d2
        partner[d2] = d1
    if len(partner) != len(darts1) + len(darts2):
        raise ValueError("incomplete bijection between the ends at v1 and v2")

    # Tag edge ids by side so the two graphs cannot collide.
    slots: dict = {}
    for tag, g, v in (("L", g1, v1), ("R", g2, v2)):
        for k, (a, b) in g.edges.items():
            if a == v or b == v:
                slots[((tag, k), 0)] = a if a != v else ("__removed", tag)
                slots[((tag, k), 1)] = b if b != v else ("__removed", tag)
    removed = {("__removed", "L"), ("__removed", "R")}
    part = {((d[0], d[1]), d[2]): ((p[0], p[1]), p[2]) for d, p in partner.items()}
    glued = _glue(slots, part, removed)

    edges: dict = {}
    for g, v in ((g1, v1), (g2, v2)):
        for k, (a, b) in g.edges.items():
            if a != v and b != v:
                edges[len(edges)] = (a, b)
    for a, b, _ in glued:
        edges[len(edges)] = (a, b)
    verts = [x for x in g1.vertices if x != v1] + [x for x in g2.vertices if x != v2]
    labels = None
    if g1.labels or g2.labels:
        labels = {**(g1._labels_for(verts) or {}), **(g2._labels_for(verts) or {})}
    return Multigraph(verts, edges, labels)


def internal_vertex_sum(g: Multigraph, x: Vertex, y: Vertex, pairing: Sequence[tuple]) -> Multigraph:
    """Glue x to y inside one graph.

    Deletes every x-y edge, then adds an edge x'y' for each paired (xx', yy'),
    then deletes x and y. Ends are edge ids (or darts) of non-(x,y) edges.
    """
    if x == y:
        raise ValueError("x and y must differ")
    for v in (x, y):
        if v not in g.vertex_set:
            raise KeyError(f"unknown vertex {v!r}")
    xy = {k for k, (a, b) in g.edges.items() if {a, b} == {x, y}}
    for k, (a, b) in g.edges.items():
        if a == b and a in (x, y):
            raise ValueError("loops at the summed vertices are not supported")
    ends_x = {d for d in g.incidence[x] if d[0] not in xy}
    ends_y = {d for d in g.incidence[y] if d[0] not in xy}
    seen_x, seen_y = set(), set()
    new_edges = []
    for a, b in pairing:
        dx = _as_dart(g, x, a)
        dy = _as_dart(g, y, b)
        if dx not in ends_x or dy not in ends_y:
            raise ValueError("pairing references a missing end")
        if dx in seen_x or dy in seen_y:
            raise ValueError("an end is paired twice")
        seen_x.add(dx)
        seen_y.add(dy)
        new_edges.append((g.other_end(dx), g.other_end(dy)))
    edges: dict = {}
    for k, (a, b) in g.edges.items():
        if a not in (x, y) and b not in (x, y):
            edges[len(edges)] = (a, b)
    for a, b in new_edges:
        edges[len(edges)] = (a, b)
    verts = [v for v in g.vertices if v not in (x, y)]
    return Multigraph(verts, edges, g._labels_for(set(verts)))


# ---------------------------------------------------------------------------
# Connectivity
# ---------------------------------------------------------------------------


def articulation_points(g: Multigraph) -> set:
    """Cut vertices (iterative Tarjan); loops and parallel edges are harmless."""
    adj = g.adjacency
    disc: dict = {}
    low: dict = {}
    cut: set = set()
    t = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        children = 0
        stack = [(root, None, iter(adj[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[u] = min(low[u], disc[w])
                else:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, u, iter(adj[w])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[u])
                if parent == root:
                    children += 1
                elif low[u] >= disc[parent]:
                    cut.add(parent)
        if children > 1:
            cut.add(root)
    return cut


def is_2_connected(g: Multigraph) -> bool:
    """At least three vertices, connected, and no cut vertex."""
    if len(g.vertices) < 3:
        raise ValueError("2-connectivity needs at least 3 vertices")
    return g.is_connected() and not articulation_points(g)


def degree_sequence(g: Multigraph) -> list[int]:
    return sorted((g.degree(v) for v in g.vertices), reverse=True)


def neighbor_multiset(g: Multigraph) -> dict[Vertex, Counter]:
    out: dict = defaultdict(Counter)
    for u, v in g.edges.values():
        out[u][v] += 1
        if u != v:
            out[v][u] += 1
    return out
