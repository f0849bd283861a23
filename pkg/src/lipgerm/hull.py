"""Convex hulls and chain-constrained triangulations, all in exact
rational arithmetic.

`chain_hull_triangulation` triangulates the convex hull of a simple
chain's points so that every chain edge is an edge of the triangulation;
the triangle count satisfies T = 2n - k - 2 for n points and k hull
points, and some triangle always contains exactly two consecutive chain
edges (the reducible wedge used by the reduction pipeline).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Set, Tuple

Point = Tuple[Fraction, Fraction]


class AllCollinear(ValueError):
    pass


class CollinearTriple(ValueError):
    pass


class SelfIntersectingChain(ValueError):
    pass


class NotFound(RuntimeError):
    pass


def orient(p: Point, q: Point, r: Point) -> Fraction:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def convex_hull(points: Sequence[Point]) -> List[int]:
    """Counterclockwise hull as indices into `points` (Andrew's chain)."""
    n = len(points)
    if n < 3:
        raise AllCollinear("need at least 3 points")
    order = sorted(range(n), key=lambda i: points[i])
    if any(points[order[i]] == points[order[i + 1]] for i in range(n - 1)):
        raise ValueError("duplicate points")

    def half(idx_seq):
        out: List[int] = []
        for i in idx_seq:
            while len(out) >= 2 and orient(
                points[out[-2]], points[out[-1]], points[i]
            ) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = half(order)
    upper = half(reversed(order))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise AllCollinear("all points collinear")
    return hull


def segments_properly_cross(a1: Point, a2: Point, b1: Point, b2: Point) -> bool:
    """Strict interior crossing test; touching at endpoints is not a cross."""
    if len({a1, a2} & {b1, b2}) > 0:
        return False
    d1 = orient(b1, b2, a1)
    d2 = orient(b1, b2, a2)
    d3 = orient(a1, a2, b1)
    d4 = orient(a1, a2, b2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    # endpoint strictly inside the other segment (collinear contact)
    for p, (q1, q2) in ((a1, (b1, b2)), (a2, (b1, b2)), (b1, (a1, a2)), (b2, (a1, a2))):
        if orient(q1, q2, p) == 0 and _between_strict(q1, p, q2):
            return True
    return False


def _between_strict(a: Point, p: Point, b: Point) -> bool:
    lo0, hi0 = min(a[0], b[0]), max(a[0], b[0])
    lo1, hi1 = min(a[1], b[1]), max(a[1], b[1])
    if a[0] != b[0]:
        return lo0 < p[0] < hi0
    return lo1 < p[1] < hi1


@dataclass
class ChainTriangulation:
    points: List[Point]
    edges: Set[Tuple[int, int]]  # undirected, stored as sorted pairs
    triangles: List[Tuple[int, int, int]]
    chain_edges: Set[Tuple[int, int]]  # the highlighted constraint edges
    hull: List[int]


def _chain_edge_set(n: int, closed: bool) -> Set[Tuple[int, int]]:
    edges = {(i, i + 1) for i in range(n - 1)}
    if closed:
        edges.add((0, n - 1))
    return edges


def _validate_chain(points: Sequence[Point], closed: bool) -> None:
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orient(points[i], points[j], points[k]) == 0:
                    raise CollinearTriple(f"points {i},{j},{k} are collinear")
    chain = sorted(_chain_edge_set(n, closed))
    for a in range(len(chain)):
        for b in range(a + 1, len(chain)):
            i1, j1 = chain[a]
            i2, j2 = chain[b]
            if segments_properly_cross(points[i1], points[j1], points[i2], points[j2]):
                raise SelfIntersectingChain(f"chain edges {chain[a]} and {chain[b]} cross")


def chain_hull_triangulation(points: Sequence[Point], closed: bool = False) -> ChainTriangulation:
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    n = len(pts)
    if n < 3:
        raise AllCollinear("need at least 3 points")
    _validate_chain(pts, closed)
    hull = convex_hull(pts)

    chain = _chain_edge_set(n, closed)
    edges: Set[Tuple[int, int]] = set(chain)

    def crosses_existing(i: int, j: int) -> bool:
        for (a, b) in edges:
            if segments_properly_cross(pts[i], pts[j], pts[a], pts[b]):
                return True
        return False

    candidates = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in edges:
                continue
            d2 = (pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2
            candidates.append((d2, i, j))
    candidates.sort()
    for _, i, j in candidates:
        if not crosses_existing(i, j):
            edges.add((i, j))

    triangles = _extract_triangles(pts, edges)
    return ChainTriangulation(pts, edges, triangles, chain, hull)


def _ccw_key(pts: Sequence[Point], v: int):
    """Comparator sorting neighbor indices counterclockwise around v."""

    def cmp(a: int, b: int) -> int:
        da = (pts[a][0] - pts[v][0], pts[a][1] - pts[v][1])
        db = (pts[b][0] - pts[v][0], pts[b][1] - pts[v][1])
        ha = 0 if (da[1] > 0 or (da[1] == 0 and da[0] > 0)) else 1
        hb = 0 if (db[1] > 0 or (db[1] == 0 and db[0] > 0)) else 1
        if ha != hb:
            return -1 if ha < hb else 1
        cr = da[0] * db[1] - da[1] * db[0]
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    return functools.cmp_to_key(cmp)


def _extract_triangles(pts: Sequence[Point], edges: Set[Tuple[int, int]]):
    """Bounded faces of the maximal planar straight-line graph; for a
    maximal PSLG these are exactly the triangles."""
    nbrs = {i: [] for i in range(len(pts))}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    for v in nbrs:
        nbrs[v].sort(key=_ccw_key(pts, v))

    visited = set()
    triangles = []
    for a, b in edges:
        for u, v in ((a, b), (b, a)):
            if (u, v) in visited:
                continue
            face = []
            cu, cv = u, v
            while (cu, cv) not in visited:
                visited.add((cu, cv))
                face.append(cu)
                ring = nbrs[cv]
                k = ring.index(cu)
                w = ring[(k - 1) % len(ring)]  # rotate clockwise: face on the left
                cu, cv = cv, w
            area2 = Fraction(0)
            for i in range(len(face)):
                p = pts[face[i]]
                q = pts[face[(i + 1) % len(face)]]
                area2 += p[0] * q[1] - q[0] * p[1]
            if area2 > 0:
                if len(face) != 3:
                    raise RuntimeError("non-triangular bounded face in maximal PSLG")
                triangles.append(tuple(sorted(face)))
    return sorted(set(triangles))


def polygon_area2(pts: Sequence[Point], idx: Sequence[int]) -> Fraction:
    s = Fraction(0)
    for i in range(len(idx)):
        p = pts[idx[i]]
        q = pts[idx[(i + 1) % len(idx)]]
        s += p[0] * q[1] - q[0] * p[1]
    return abs(s)


def validate_triangulation(tri: ChainTriangulation) -> None:
    """Independent exact checker: hull coverage via area bookkeeping,
    non-crossing edges, chain edges present, triangle count identity."""
    pts = tri.points
    n = len(pts)
    k = len(tri.hull)
    T = len(tri.triangles)
    if T != 2 * n - k - 2:
        raise AssertionError(f"triangle count {T} != 2n-k-2 = {2 * n - k - 2}")
    for e in tri.chain_edges:
        if tuple(sorted(e)) not in tri.edges:
            raise AssertionError(f"chain edge {e} missing from triangulation")
    hull_area = polygon_area2(pts, tri.hull)
    tri_area = sum(polygon_area2(pts, t) for t in tri.triangles)
    if hull_area != tri_area:
        raise AssertionError("triangle areas do not sum to hull area")
    es = sorted(tri.edges)
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            a, b = es[i]
            c, d = es[j]
            if segments_properly_cross(pts[a], pts[b], pts[c], pts[d]):
                raise AssertionError(f"edges {es[i]} and {es[j]} cross")
    for t in tri.triangles:
        if orient(pts[t[0]], pts[t[1]], pts[t[2]]) == 0:
            raise AssertionError(f"degenerate triangle {t}")


def find_double_highlighted_triangle(tri: ChainTriangulation) -> Tuple[int, int]:
    """Triangle containing exactly two chain edges, which are consecutive.

    Returns (triangle index, middle chain-vertex index).
    """
    n = len(tri.points)
    for ti, t in enumerate(tri.triangles):
        tedges = {
            tuple(sorted((t[0], t[1]))),
            tuple(sorted((t[1], t[2]))),
            tuple(sorted((t[0], t[2]))),
        }
        hl = tedges & {tuple(sorted(e)) for e in tri.chain_edges}
        if len(hl) == 2:
            (a1, b1), (a2, b2) = sorted(hl)
            common = {a1, b1} & {a2, b2}
            if len(common) == 1:
                return ti, common.pop()
    raise NotFound("no triangle with exactly two consecutive chain edges")
