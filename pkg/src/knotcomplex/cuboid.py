"""Cuboid lattice complexes: every unit square of an integer box is a face.

Vertex ids are lexicographic in (x, y, z) over the ambient box, so slabs keep
the ids of the complex they were cut from.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

from .complex import TwoComplex
from .graphs import Multigraph

BLACK = "black"
WHITE = "white"

# Axis pairs spanning the three square orientations.
_PLANES = ((0, 1), (0, 2), (1, 2))
_UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class Diagonal:
    """A segment joining opposite corners of a square face; u < v."""

    u: int
    v: int
    face: int

    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass
class CuboidComplex:
    """A cuboid complex with canonical coordinates.

    ``dims`` are the ambient box sizes (n1, n2, n3); ``box`` gives the
    inclusive coordinate ranges actually present (a slab restricts x).
    """

    dims: tuple[int, int, int]
    box: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    complex: TwoComplex
    face_squares: dict[int, tuple[int, int, int, int]] = field(repr=False)

    def vertex_id(self, x: int, y: int, z: int) -> int:
        _, n2, n3 = self.dims
        return (x * (n2 + 1) + y) * (n3 + 1) + z

    def coords_of(self, v: int) -> tuple[int, int, int]:
        _, n2, n3 = self.dims
        z = v % (n3 + 1)
        y = (v // (n3 + 1)) % (n2 + 1)
        x = v // ((n3 + 1) * (n2 + 1))
        return (x, y, z)

    def contains(self, p: tuple[int, int, int]) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(p, self.box))

    @property
    def coords(self) -> dict[int, tuple[int, int, int]]:
        return self.complex.coords

    @cached_property
    def edge_lookup(self) -> dict[tuple[int, int], int]:
        return {(min(a, b), max(a, b)): e for e, (a, b) in self.complex.edges.items()}

    def edge_between(self, u: int, v: int) -> int | None:
        return self.edge_lookup.get((min(u, v), max(u, v)))

    @cached_property
    def diagonal_lookup(self) -> dict[tuple[int, int], Diagonal]:
        out = {}
        for f, (a, b, c, d) in self.face_squares.items():
            for p, q in ((a, c), (b, d)):
                dg = Diagonal(min(p, q), max(p, q), f)
                out[dg.key()] = dg
        return out

    def diagonal_between(self, u: int, v: int) -> Diagonal | None:
        return self.diagonal_lookup.get((min(u, v), max(u, v)))

    def diagonals_of_face(self, f: int) -> tuple[Diagonal, Diagonal]:
        a, b, c, d = self.face_squares[f]
        return (Diagonal(min(a, c), max(a, c), f), Diagonal(min(b, d), max(b, d), f))


def _face_id_base(dims) -> int:
    n1, n2, n3 = dims
    return (n1 + 1) * (n2 + 1) * (n3 + 1)


def build_cuboid(n1: int, n2: int, n3: int) -> CuboidComplex:
    """The complex on all integer points of [0,n1]x[0,n2]x[0,n3]."""
    for n in (n1, n2, n3):
        if not isinstance(n, int) or n < 1:
            raise ValueError("cuboid dimensions must be positive integers")
    dims = (n1, n2, n3)
    return _build_box(dims, ((0, n1), (0, n2), (0, n3)))


def _build_box(dims, box) -> CuboidComplex:
    _, n2, n3 = dims
    (x0, x1), (y0, y1), (z0, z1) = box

    def vid(x, y, z):
        return (x * (n2 + 1) + y) * (n3 + 1) + z

    vertices = []
    coords = {}
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            for z in range(z0, z1 + 1):
                v = vid(x, y, z)
                vertices.append(v)
                coords[v] = (x, y, z)
    hi = (x1, y1, z1)
    # Edge id = 3 * lower vertex id + axis, so ids agree between a box and its slabs.
    edges = {}
    for v in vertices:
        p = coords[v]
        for axis in range(3):
            if p[axis] < hi[axis]:
                q = list(p)
                q[axis] += 1
                edges[3 * v + axis] = (v, vid(*q))
    faces = {}
    squares = {}
    for v in vertices:
        p = coords[v]
        for k, (i, j) in enumerate(_PLANES):
            if p[i] < hi[i] and p[j] < hi[j]:
                a = v
                pb = list(p)
                pb[i] += 1
                b = vid(*pb)
                pc = list(pb)
                pc[j] += 1
                c = vid(*pc)
                pd = list(p)
                pd[j] += 1
                d = vid(*pd)
                f = 3 * v + k
                faces[f] = (
                    (3 * a + i, 1),
                    (3 * b + j, 1),
                    (3 * d + i, -1),
                    (3 * a + j, -1),
                )
                squares[f] = (a, b, c, d)
    cx = TwoComplex(vertices, edges, faces, coords, validate=False)
    return CuboidComplex(dims, box, cx, squares)


def slab(c: CuboidComplex, a: int, b: int) -> CuboidComplex:
    """Induced subcomplex on the vertices with a <= x <= b."""
    lo, hi = c.box[0]
    if not (lo <= a <= b <= hi):
        raise ValueError(f"slab bounds [{a},{b}] outside [{lo},{hi}]")
    return _build_box(c.dims, ((a, b), c.box[1], c.box[2]))


@dataclass(frozen=True)
class Coloring:
    """Proper 2-coloring of the lattice: white iff coordinate-sum parity
    equals ``white_parity``."""

    dims: tuple[int, int, int]
    white_parity: int

    def color_of_point(self, p: tuple[int, int, int]) -> str:
        return WHITE if (p[0] + p[1] + p[2]) % 2 == self.white_parity else BLACK

    def color(self, c: CuboidComplex, v: int) -> str:
        return self.color_of_point(c.coords_of(v))

    def is_white(self, c: CuboidComplex, v: int) -> bool:
        return self.color(c, v) == WHITE

    def flipped(self) -> Coloring:
        return Coloring(self.dims, 1 - self.white_parity)

    def as_dict(self, c: CuboidComplex) -> dict[int, str]:
        return {v: self.color_of_point(p) for v, p in c.coords.items()}


def two_color(c: CuboidComplex, anchor: tuple[int, int, int], anchor_color: str = WHITE) -> Coloring:
    if not c.contains(anchor):
        raise ValueError(f"anchor {anchor} is outside the box")
    if anchor_color not in (WHITE, BLACK):
        raise ValueError("anchor colour must be 'white' or 'black'")
    par = sum(anchor) % 2
    return Coloring(c.dims, par if anchor_color == WHITE else 1 - par)


def diagonals(c: CuboidComplex, coloring: Coloring, color: str) -> list[Diagonal]:
    out = []
    for f in c.face_squares:
        for dg in c.diagonals_of_face(f):
            if coloring.color(c, dg.u) == color:
                out.append(dg)
    return out


def diagonal_graph(c: CuboidComplex, coloring: Coloring, color: str) -> Multigraph:
    """Vertices of one colour joined by that colour's diagonal in every face.

    Edge ids are host face ids (each face has one diagonal per colour).
    """
    verts = [v for v, p in c.coords.items() if coloring.color_of_point(p) == color]
    edges = {dg.face: (dg.u, dg.v) for dg in diagonals(c, coloring, color)}
    return Multigraph(verts, edges)


def crossing_set(c: CuboidComplex, tree_diagonals: Iterable[Diagonal]) -> set[Diagonal]:
    """Diagonals crossing some given diagonal: the other diagonal of its face."""
    out = set()
    for dg in tree_diagonals:
        d1, d2 = c.diagonals_of_face(dg.face)
        if dg == d1:
            out.add(d2)
        elif dg == d2:
            out.add(d1)
        else:
            raise ValueError(f"{dg} is not a diagonal of face {dg.face}")
    return out


# ---------------------------------------------------------------------------
# Mesh export
# ---------------------------------------------------------------------------


def _polygons(c: CuboidComplex, split: dict[int, Diagonal] | None):
    for f, sq in sorted(c.face_squares.items()):
        dg = (split or {}).get(f)
        if dg is None:
            yield list(sq)
            continue
        a, b, cc, d = sq
        if {dg.u, dg.v} == {a, cc}:
            yield [a, b, cc]
            yield [a, cc, d]
        else:
            yield [b, cc, d]
            yield [b, d, a]


def to_off(c: CuboidComplex, split: dict[int, Diagonal] | None = None) -> str:
    """OFF mesh; faces in ``split`` (face id -> diagonal) become two triangles."""
    verts = sorted(c.coords)
    index = {v: i for i, v in enumerate(verts)}
    polys = list(_polygons(c, split))
    nedges = len(c.complex.edges) + len(split or {})
    lines = ["OFF", f"{len(verts)} {len(polys)} {nedges}"]
    lines += [" ".join(map(str, c.coords[v])) for v in verts]
    lines += [" ".join([str(len(p))] + [str(index[v]) for v in p]) for p in polys]
    return "\n".join(lines) + "\n"


def to_obj(
    c: CuboidComplex,
    split: dict[int, Diagonal] | None = None,
    polylines: Iterable[list[int]] = (),
) -> str:
    """OBJ mesh with optional ``l`` records for polylines given as vertex ids."""
    verts = sorted(c.coords)
    index = {v: i + 1 for i, v in enumerate(verts)}
    lines = [f"v {x} {y} {z}" for x, y, z in (c.coords[v] for v in verts)]
    lines += ["f " + " ".join(str(index[v]) for v in p) for p in _polygons(c, split)]
    for pl in polylines:
        lines.append("l " + " ".join(str(index[v]) for v in pl))
    return "\n".join(lines) + "\n"
