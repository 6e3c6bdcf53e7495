"""Rational first homology of a 2-complex via exact sparse integer ranks."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .complex import TwoComplex


def sparse_rank(columns: list[dict[int, int]]) -> int:
    """Rank over the rationals of an integer matrix given as sparse columns.

    Column reduction keyed by the largest row index, as in persistence
    algorithms; rows are rescaled by gcds so entries stay small.
    """
    basis: dict[int, dict[int, int]] = {}
    rank = 0
    for col in columns:
        v = {r: x for r, x in col.items() if x}
        while v:
            p = max(v)
            b = basis.get(p)
            if b is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                basis[p] = {r: x // g for r, x in v.items()}
                rank += 1
                break
            a, c = b[p], v[p]
            new = {}
            for r in v.keys() | b.keys():
                x = a * v.get(r, 0) - c * b.get(r, 0)
                if x:
                    new[r] = x
            g = 0
            for x in new.values():
                g = gcd(g, x)
            v = {r: x // g for r, x in new.items()} if g > 1 else new
    return rank


def boundary_columns(c: TwoComplex) -> tuple[list[dict[int, int]], list[dict[int, int]]]:
    vidx = {v: i for i, v in enumerate(c.vertices)}
    eidx = {e: i for i, e in enumerate(c.edges)}
    d1 = []
    for a, b in c.edges.values():
        if a == b:
            d1.append({})
        else:
            d1.append({vidx[a]: -1, vidx[b]: 1})
    d2 = []
    for walk in c.faces.values():
        col: dict[int, int] = {}
        for e, d in walk:
            r = eidx[e]
            col[r] = col.get(r, 0) + d
        d2.append({r: x for r, x in col.items() if x})
    return d1, d2


@dataclass(frozen=True)
class H1Certificate:
    rank: int
    rank_d1: int
    rank_d2: int
    edges: int


def h1_rank(c: TwoComplex) -> H1Certificate:
    """dim H_1(C; Q) = |E| - rank d1 - rank d2, with the ranks used."""
    d1, d2 = boundary_columns(c)
    r1, r2 = sparse_rank(d1), sparse_rank(d2)
    rank = len(c.edges) - r1 - r2
    if rank < 0:
        raise AssertionError("boundary ranks exceed the edge count")
    return H1Certificate(rank, r1, r2, len(c.edges))


def euler_characteristic(c: TwoComplex) -> int:
    return len(c.vertices) - len(c.edges) + len(c.faces)
