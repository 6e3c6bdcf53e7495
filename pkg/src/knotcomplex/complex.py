"""2-complexes whose faces are closed edge walks, and the contraction calculus
on them: link graphs, edge contraction, face subdivision."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .graphs import Multigraph, internal_vertex_sum, vertex_sum

# A traversal of an edge inside a face walk: (edge id, +1 or -1).
Traversal = tuple[int, int]


def tail_end(direction: int) -> int:
    return 0 if direction == 1 else 1


def head_end(direction: int) -> int:
    return 1 if direction == 1 else 0


class TwoComplex:
    """Vertices, edges (loops allowed) and faces stored as closed walks.

    Faces are tuples of ``(edge id, direction)``: direction +1 walks the edge
    from its endpoint 0 to its endpoint 1. ``coords`` optionally carries an
    integer embedding for (some of) the vertices.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Mapping[int, tuple[int, int]],
        faces: Mapping[int, Sequence[Traversal]],
        coords: Mapping[int, tuple[int, int, int]] | None = None,
        validate: bool = True,
    ) -> None:
        self.vertices: tuple[int, ...] = tuple(vertices)
        self.edges: dict[int, tuple[int, int]] = dict(edges)
        self.faces: dict[int, tuple[Traversal, ...]] = {f: tuple(w) for f, w in faces.items()}
        self.coords: dict[int, tuple[int, int, int]] = dict(coords) if coords else {}
        if validate:
            self.validate()

    def validate(self) -> None:
        vset = self.vertex_set
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for e, (a, b) in self.edges.items():
            if a not in vset or b not in vset:
                raise ValueError(f"edge {e} has an endpoint outside the vertex set")
        for f, walk in self.faces.items():
            if not walk:
                raise ValueError(f"face {f} has an empty walk")
            for e, d in walk:
                if e not in self.edges:
                    raise ValueError(f"face {f} uses unknown edge {e}")
                if d not in (1, -1):
                    raise ValueError(f"face {f} has a bad direction {d}")
            for i, (e, d) in enumerate(walk):
                e2, d2 = walk[(i + 1) % len(walk)]
                if self.head(e, d) != self.tail(e2, d2):
                    raise ValueError(f"face {f} is not a closed walk at position {i}")

    # -- basic accessors -------------------------------------------------

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def tail(self, e: int, d: int) -> int:
        return self.edges[e][tail_end(d)]

    def head(self, e: int, d: int) -> int:
        return self.edges[e][head_end(d)]

    def face_vertices(self, f: int) -> list[int]:
        """Vertex sequence of a face walk (tail of each traversal)."""
        return [self.tail(e, d) for e, d in self.faces[f]]

    @cached_property
    def vertex_ends(self) -> dict[int, list[tuple[int, int]]]:
        """Edge ends at each vertex as (edge id, end index)."""
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for e, (a, b) in self.edges.items():
            out[a].append((e, 0))
            out[b].append((e, 1))
        return out

    @cached_property
    def traversals(self) -> dict[int, list[tuple[int, int]]]:
        """For each edge, the (face id, position) pairs at which faces walk it."""
        out: dict[int, list[tuple[int, int]]] = {e: [] for e in self.edges}
        for f, walk in self.faces.items():
            for i, (e, _) in enumerate(walk):
                out[e].append((f, i))
        return out

    def degree(self, v: int) -> int:
        return len(self.vertex_ends[v])

    def is_loop(self, e: int) -> bool:
        a, b = self.edges[e]
        return a == b

    def __repr__(self) -> str:
        return f"TwoComplex(|V|={len(self.vertices)}, |E|={len(self.edges)}, |F|={len(self.faces)})"

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.faces)

    def same_as(self, other: TwoComplex) -> bool:
        return (
            self.vertex_set == other.vertex_set
            and self.edges == other.edges
            and self.faces == other.faces
        )


# ---------------------------------------------------------------------------
# Link graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinkGraphResult:
    """Link graph at a vertex.

    Vertex ids of ``graph`` are edge ends ``(edge id, end index)`` and edge ids
    are face corners ``(face id, position)``; the corner at position i sits
    between traversal i and traversal i+1 of the face walk.
    """

    vertex: int
    graph: Multigraph
    vertex_origin: dict
    edge_origin: dict


def corner_ends(c: TwoComplex, f: int, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
    walk = c.faces[f]
    e1, d1 = walk[i]
    e2, d2 = walk[(i + 1) % len(walk)]
    return (e1, head_end(d1)), (e2, tail_end(d2))


def corners_at(c: TwoComplex, v: int) -> list[tuple[int, int]]:
    seen: set[tuple[int, int]] = set()
    out = []
    for e, _ in c.vertex_ends[v]:
        for f, i in c.traversals[e]:
            n = len(c.faces[f])
            for j in (i, (i - 1) % n):
                if (f, j) in seen:
                    continue
                ed, dd = c.faces[f][j]
                if c.head(ed, dd) == v:
                    seen.add((f, j))
                    out.append((f, j))
    out.sort()
    return out


def link_graph(c: TwoComplex, v: int) -> LinkGraphResult:
    """One link vertex per edge end at v, one link edge per face corner at v."""
    if v not in c.vertex_set:
        raise KeyError(f"unknown vertex {v}")
    ends = sorted(c.vertex_ends[v])
    edges = {}
    for f, i in corners_at(c, v):
        edges[(f, i)] = corner_ends(c, f, i)
    graph = Multigraph(ends, edges)
    return LinkGraphResult(
        vertex=v,
        graph=graph,
        vertex_origin={x: x for x in ends},
        edge_origin={k: k for k in edges},
    )


# ---------------------------------------------------------------------------
# Contraction, deletion and subdivision
# ---------------------------------------------------------------------------


def contract_edge_set(c: TwoComplex, edges: Iterable[int]) -> TwoComplex:
    """Contract a set of edges at once.

    Endpoints of the contracted edges are identified (the smallest id in each
    class survives), the edges are deleted and every face walk loses its
    traversals of them. Faces left with an empty walk are deleted. The result
    is the same as contracting the edges one at a time in any order.
    """
    edges = list(dict.fromkeys(edges))
    drop = set(edges)
    for e in drop:
        if e not in c.edges:
            raise KeyError(f"unknown edge {e}")
    if not drop:
        return c
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    for e in edges:
        a, b = c.edges[e]
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            parent[hi] = lo
    merged = {v for v in parent}
    vertices = [v for v in c.vertices if find(v) == v]
    new_edges = {}
    for e, (a, b) in c.edges.items():
        if e in drop:
            continue
        new_edges[e] = (find(a), find(b)) if (a in merged or b in merged) else (a, b)
    touched = {f for e in drop for f, _ in c.traversals[e]}
    faces = {}
    for f, walk in c.faces.items():
        if f in touched:
            walk = tuple(t for t in walk if t[0] not in drop)
            if not walk:
                continue
        faces[f] = walk
    # merged vertices have no single position
    roots = set(parent.values())
    coords = {v: p for v, p in c.coords.items() if v not in merged and v not in roots}
    return TwoComplex(vertices, new_edges, faces, coords, validate=False)


def contract_edge(c: TwoComplex, e: int) -> TwoComplex:
    if e not in c.edges:
        raise KeyError(f"unknown edge {e}")
    return contract_edge_set(c, [e])


def merged_vertex(c: TwoComplex, edges: Iterable[int]) -> int:
    """Id of the vertex that the endpoints of a connected edge set collapse to."""
    return min(v for e in edges for v in c.edges[e])


def delete_edges(c: TwoComplex, edges: Iterable[int]) -> TwoComplex:
    """Delete edges together with every face whose walk uses one of them."""
    drop = set(edges)
    faces = {f: w for f, w in c.faces.items() if not any(e in drop for e, _ in w)}
    new_edges = {e: ab for e, ab in c.edges.items() if e not in drop}
    return TwoComplex(c.vertices, new_edges, faces, c.coords, validate=False)


def subdivide_faces(
    c: TwoComplex, requests: Sequence[tuple[int, int, int]]
) -> tuple[TwoComplex, list[int], list[tuple[int, int]]]:
    """Split faces along new edges.

    Each request ``(f, u, w)`` names a face and two non-adjacent vertices on
    its boundary. Returns the new complex, the new edge ids (oriented u -> w)
    and the ids of the two faces replacing each request's face.
    """
    next_edge = max(c.edges, default=-1) + 1
    next_face = max(c.faces, default=-1) + 1
    edges = dict(c.edges)
    faces = dict(c.faces)
    new_edge_ids = []
    new_face_ids = []
    for f, u, w in requests:
        if f not in faces:
            raise KeyError(f"face {f} does not exist")
        walk = faces[f]
        verts = [c.tail(e, d) if e in c.edges else _tail(edges, e, d) for e, d in walk]
        if verts.count(u) != 1 or verts.count(w) != 1:
            raise ValueError(f"vertices {u}, {w} must each occur once on face {f}")
        a, b = verts.index(u), verts.index(w)
        k = len(walk)
        if (a - b) % k in (1, k - 1) or a == b:
            raise ValueError(f"vertices {u} and {w} are adjacent on face {f}")
        ne = next_edge
        next_edge += 1
        edges[ne] = (u, w)
        if a < b:
            first = walk[a:b]
            second = walk[b:] + walk[:a]
        else:
            first = walk[a:] + walk[:b]
            second = walk[b:a]
        del faces[f]
        f1, f2 = next_face, next_face + 1
        next_face += 2
        faces[f1] = tuple(first) + ((ne, -1),)
        faces[f2] = tuple(second) + ((ne, 1),)
        new_edge_ids.append(ne)
        new_face_ids.append((f1, f2))
    return TwoComplex(c.vertices, edges, faces, c.coords, validate=False), new_edge_ids, new_face_ids


def _tail(edges: dict, e: int, d: int) -> int:
    return edges[e][tail_end(d)]


def subdivide_face(c: TwoComplex, f: int, u: int, w: int) -> tuple[TwoComplex, int]:
    """Split one face along a new edge u-w; returns the complex and the edge id."""
    out, new_edges, _ = subdivide_faces(c, [(f, u, w)])
    return out, new_edges[0]


def star(c: TwoComplex, vertices: Iterable[int]) -> TwoComplex:
    """Subcomplex of all faces and edges touching the given vertices.

    Link graphs at the given vertices, and at anything they get merged into by
    contracting edges among them, are the same as in ``c``.
    """
    vs = set(vertices)
    edge_ids = {e for v in vs for e, _ in c.vertex_ends[v]}
    face_ids = {f for e in edge_ids for f, _ in c.traversals[e]}
    edge_ids |= {e for f in face_ids for e, _ in c.faces[f]}
    edges = {e: c.edges[e] for e in sorted(edge_ids)}
    verts = sorted({x for ab in edges.values() for x in ab} | vs)
    faces = {f: c.faces[f] for f in sorted(face_ids)}
    coords = {v: c.coords[v] for v in verts if v in c.coords}
    return TwoComplex(verts, edges, faces, coords, validate=False)


# ---------------------------------------------------------------------------
# Link graphs under contraction
# ---------------------------------------------------------------------------


def _traversal_corners(c: TwoComplex, f: int, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Corners before and after traversal i of face f."""
    n = len(c.faces[f])
    return (f, (i - 1) % n), (f, i)


def face_pairing(c: TwoComplex, e: int) -> list[tuple[tuple, tuple]]:
    """Pairs of link-graph darts joined when e is contracted.

    Each traversal of e has a corner at its tail and one at its head; the two
    darts (at the tail-end and head-end link vertices of e) are paired.
    Darts are ``(corner, side)`` with side 0/1 indexing the corner's ends.
    """
    pairs = []
    for f, i in c.traversals[e]:
        _, d = c.faces[f][i]
        before, after = _traversal_corners(c, f, i)
        # e's tail end is the second end of the corner before it,
        # e's head end is the first end of the corner after it.
        tail_dart = (before, 1)
        head_dart = (after, 0)
        if d == 1:
            pairs.append((tail_dart, head_dart))
        else:
            pairs.append((head_dart, tail_dart))
    return pairs


def predicted_link_after_contraction(c: TwoComplex, e: int) -> Multigraph:
    """Link graph at the merged vertex of C/e computed from links of C.

    For a non-loop edge this is the vertex sum of the two endpoint links over
    the face-induced pairing; for a loop, the internal vertex sum.
    """
    a, b = c.edges[e]
    if a != b:
        la = link_graph(c, a).graph
        lb = link_graph(c, b).graph
        # Corners of faces through e occur in both links; tag b's copies.
        lb_tagged = Multigraph(lb.vertices, {("b", k): uv for k, uv in lb.edges.items()})
        la_tagged = Multigraph(la.vertices, {("a", k): uv for k, uv in la.edges.items()})
        pairing = []
        for d0, d1 in face_pairing(c, e):
            # d0 is the dart at end 0 of e (vertex a), d1 at end 1 (vertex b)
            pairing.append(((("a", d0[0]), d0[1]), (("b", d1[0]), d1[1])))
        # Link vertices of e itself exist on both sides with the same id.
        x, y = (e, 0), (e, 1)
        g = vertex_sum(la_tagged, x, lb_tagged, y, pairing)
        return g
    lg = link_graph(c, a).graph
    x, y = (e, 0), (e, 1)
    pairing = []
    for d0, d1 in face_pairing(c, e):
        k0, k1 = d0[0], d1[0]
        if set(lg.edges[k0]) == {x, y} or set(lg.edges[k1]) == {x, y}:
            continue
        pairing.append((d0, d1))
    return internal_vertex_sum(lg, x, y, pairing)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

COMPLEX_SCHEMA = "knotcomplex.complex/1"


def complex_to_json(c: TwoComplex) -> dict:
    """JSON-ready dict: vertices, edges as endpoint pairs, faces as signed
    walks ``[edge, direction]``, optional coordinates."""
    out = {
        "schema": COMPLEX_SCHEMA,
        "vertices": list(c.vertices),
        "edges": [[e, a, b] for e, (a, b) in sorted(c.edges.items())],
        "faces": [[f, [[e, d] for e, d in w]] for f, w in sorted(c.faces.items())],
    }
    if c.coords:
        out["coords"] = [[v, *p] for v, p in sorted(c.coords.items())]
    return out


def complex_from_json(data: Mapping) -> TwoComplex:
    if data.get("schema") != COMPLEX_SCHEMA:
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    edges = {e: (a, b) for e, a, b in data["edges"]}
    faces = {f: tuple((e, d) for e, d in w) for f, w in data["faces"]}
    coords = {v: (x, y, z) for v, x, y, z in data.get("coords", [])}
    return TwoComplex(data["vertices"], edges, faces, coords)
