"""Rotation systems: cyclic face orders around edges of an embedded 2-complex,
the rotation they induce on link graphs, and genus via face tracing."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from functools import cmp_to_key

from .complex import TwoComplex, head_end, tail_end
from .graphs import Multigraph

# Incidence of a face with an edge: (face id, k) meaning the k-th traversal of
# the edge in that face's walk. Stable under contraction of other edges.
Incidence = tuple[int, int]
RotationSystem = dict[int, tuple[Incidence, ...]]


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _dot(p, q) -> int:
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _cross(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _half(x: int, y: int) -> int:
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(p: tuple[int, int], q: tuple[int, int]) -> int:
    hp, hq = _half(*p), _half(*q)
    if hp != hq:
        return hp - hq
    cr = p[0] * q[1] - p[1] * q[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _perpendicular_unit(d) -> tuple[int, int, int]:
    """An integer vector perpendicular to the nonzero vector d."""
    for axis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        u = _cross(d, axis)
        if u != (0, 0, 0):
            return u
    raise ValueError("zero direction")


def occurrence_index(c: TwoComplex, e: int) -> dict[tuple[int, int], Incidence]:
    """Map (face, position) traversals of e to (face, k) incidences."""
    out = {}
    count: dict[int, int] = {}
    for f, i in sorted(c.traversals[e]):
        k = count.get(f, 0)
        count[f] = k + 1
        out[(f, i)] = (f, k)
    return out


def position_of(c: TwoComplex, e: int, inc: Incidence) -> int:
    f, k = inc
    seen = 0
    for i, (e2, _) in enumerate(c.faces[f]):
        if e2 == e:
            if seen == k:
                return i
            seen += 1
    raise KeyError(f"face {f} has no traversal {k} of edge {e}")


def rotation_from_geometry(c: TwoComplex, edges: Sequence[int] | None = None) -> RotationSystem:
    """Counterclockwise order of faces around each edge, seen from the edge's
    end 1 looking back along it (right-hand rule about the edge direction).

    Needs integer coordinates for every vertex of each face touching the
    edge; faces must be planar polygons whose vertex average lies inside them.
    Raises if two faces leave an edge in the same direction.
    """
    out: RotationSystem = {}
    for e in (c.edges if edges is None else edges):
        a, b = c.edges[e]
        pa, pb = c.coords[a], c.coords[b]
        d = _sub(pb, pa)
        if d == (0, 0, 0):
            raise ValueError(f"edge {e} has zero length")
        u = _perpendicular_unit(d)
        w = _cross(d, u)
        occ = occurrence_index(c, e)
        keyed = []
        for (f, i), inc in occ.items():
            verts = list(dict.fromkeys(c.face_vertices(f)))
            k = len(verts)
            s = [0, 0, 0]
            for v in verts:
                p = c.coords[v]
                s[0] += p[0]
                s[1] += p[1]
                s[2] += p[2]
            off = (s[0] - k * pa[0], s[1] - k * pa[1], s[2] - k * pa[2])
            dd = _dot(d, d)
            od = _dot(off, d)
            perp = (dd * off[0] - od * d[0], dd * off[1] - od * d[1], dd * off[2] - od * d[2])
            if perp == (0, 0, 0):
                raise ValueError(f"face {f} is degenerate along edge {e}")
            keyed.append(((_dot(perp, u), _dot(perp, w)), inc))
        keyed.sort(key=cmp_to_key(lambda x, y: _angle_cmp(x[0], y[0])))
        for (p, _), (q, _) in zip(keyed, keyed[1:]):
            if _angle_cmp(p, q) == 0:
                raise ValueError(f"two faces leave edge {e} in the same direction")
        out[e] = tuple(inc for _, inc in keyed)
    return out


def restrict_rotation(c: TwoComplex, rotation: Mapping[int, Sequence[Incidence]]) -> RotationSystem:
    """Rotation system of a complex obtained by contraction: drop incidences of
    faces that no longer exist and edges that were contracted."""
    out: RotationSystem = {}
    for e in c.edges:
        cyc = tuple(inc for inc in rotation[e] if inc[0] in c.faces)
        out[e] = cyc
    return out


def induced_link_rotation(
    c: TwoComplex, rotation: Mapping[int, Sequence[Incidence]], v: int
) -> dict[tuple[int, int], list[tuple[tuple[int, int], int]]]:
    """Rotation system on the link graph at v induced by the face orders.

    Returns, for each link vertex ``(edge, end)``, its darts ``(corner, side)``
    in cyclic order. At the end 0 of an edge the order is the edge's face
    order; at the end 1 it is reversed.
    """
    out = {}
    for e, end in c.vertex_ends[v]:
        cyc = list(rotation[e])
        if end == 1:
            cyc.reverse()
        darts = []
        for inc in cyc:
            f = inc[0]
            i = position_of(c, e, inc)
            _, d = c.faces[f][i]
            n = len(c.faces[f])
            if head_end(d) == end:
                darts.append(((f, i), 0))
            else:
                assert tail_end(d) == end
                darts.append(((f, (i - 1) % n), 1))
        out[(e, end)] = darts
    return out


def genus_of_rotation(
    g: Multigraph, rotation: Mapping[object, Sequence[tuple[object, int]]]
) -> dict:
    """Trace faces of a rotation system on a multigraph.

    ``rotation[v]`` lists the darts ``(edge id, side)`` at v in cyclic order.
    Returns a dict with the face count, per-component Euler genus data and
    ``planar`` (every component has V - E + F = 2).
    """
    for v in g.vertices:
        given = list(rotation.get(v, ()))
        if sorted(map(repr, given)) != sorted(map(repr, g.incidence[v])):
            raise ValueError(f"rotation at {v!r} does not list exactly its darts")
    succ = {}
    for v in g.vertices:
        cyc = list(rotation.get(v, ()))
        for i, dart in enumerate(cyc):
            succ[dart] = cyc[(i + 1) % len(cyc)]
    comp_of = {}
    comps = g.components()
    for idx, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = idx
    faces = [0] * len(comps)
    seen = set()
    for k in g.edges:
        for side in (0, 1):
            start = (k, side)
            if start in seen:
                continue
            dart = start
            while dart not in seen:
                seen.add(dart)
                kk, ss = dart
                dart = succ[(kk, 1 - ss)]
            faces[comp_of[g.edges[k][side]]] += 1
    nv = [len(cmp) for cmp in comps]
    ne = [0] * len(comps)
    for k, (a, _) in g.edges.items():
        ne[comp_of[a]] += 1
    for i in range(len(comps)):
        if ne[i] == 0:
            faces[i] = 1
    euler = [nv[i] - ne[i] + faces[i] for i in range(len(comps))]
    genus = [(2 - x) // 2 for x in euler]
    return {
        "faces": sum(faces),
        "components": len(comps),
        "euler": euler,
        "genus": genus,
        "planar": all(x == 2 for x in euler),
    }


def link_genus(c: TwoComplex, rotation: Mapping[int, Sequence[Incidence]], v: int) -> dict:
    """Genus data of the link at v under the induced rotation system."""
    from .complex import link_graph

    lg = link_graph(c, v).graph
    return genus_of_rotation(lg, induced_link_rotation(c, rotation, v))
