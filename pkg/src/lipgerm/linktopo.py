"""Plane-link arrangements, region area-growth exponents, canonical
trees and the ambient equivalence decision.

The complement regions of the plane link in the cone disk form a tree
(for disjoint simple closed curves); each region is labeled with the
leading exponent of its area as t -> 0.  Two LNE germs with closed links
are ambient bi-Lipschitz equivalent iff the labeled trees are
isomorphic.  With open components (slits) the same comparison is only a
necessary condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .germ import PolygonalGerm, plane_link
from .metric import is_lne
from .puiseux import PuiseuxSeries, fit_slope


class UnstableCombinatorics(RuntimeError):
    pass


class HasOpenComponents(ValueError):
    pass


class ExponentUnstable(RuntimeError):
    pass


class EpsilonTooLarge(RuntimeError):
    pass


class NotLNEInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# Arrangement
# ---------------------------------------------------------------------------


@dataclass
class Face:
    id: int
    polygon: Optional[int]  # owning closed component, None for the outer face
    parent: Optional[int]  # parent face id
    children: List[int] = field(default_factory=list)
    children_polygons: List[int] = field(default_factory=list)
    slits: List[int] = field(default_factory=list)  # open components inside
    area_exponent: Optional[Fraction] = None

    def walls(self) -> List[int]:
        """Wall component ids with multiplicity (slits count twice)."""
        out = []
        if self.polygon is not None:
            out.append(self.polygon)
        out.extend(self.children_polygons)
        for s in self.slits:
            out.extend([s, s])
        return out


@dataclass
class RegionGraph:
    faces: List[Face]
    t: float


def _point_in_polygon(p: Tuple[float, float], poly: Sequence[Tuple[float, float]]) -> bool:
    x, y = p
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xs = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xs:
                inside = not inside
    return inside


def _slit_probe(pts: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Interior sample point of an open chain, away from its endpoints."""
    a, b = pts[-2], pts[-1]
    return (a[0] + 0.75 * (b[0] - a[0]), a[1] + 0.75 * (b[1] - a[1]))


def _arrangement_at(g: PolygonalGerm, t: float) -> RegionGraph:
    link = plane_link(g, t, check=True)
    closed_idx = [i for i, (_, c) in enumerate(link.components) if c]
    open_idx = [i for i, (_, c) in enumerate(link.components) if not c]
    polys = {i: link.components[i][0] for i in closed_idx}

    # nesting partial order on the closed components
    contains: Dict[int, List[int]] = {i: [] for i in closed_idx}
    depth: Dict[int, int] = {}
    for i in closed_idx:
        depth[i] = 0
        for j in closed_idx:
            if i != j and _point_in_polygon(polys[i][0], polys[j]):
                depth[i] += 1
                contains[j].append(i)
    parent_poly: Dict[int, Optional[int]] = {}
    for i in closed_idx:
        cands = [j for j in closed_idx
                 if i != j and _point_in_polygon(polys[i][0], polys[j])]
        parent_poly[i] = max(cands, key=lambda j: depth[j]) if cands else None

    faces: List[Face] = []
    outer = Face(0, None, None)
    faces.append(outer)
    face_of_poly: Dict[int, int] = {}
    for i in sorted(closed_idx, key=lambda i: depth[i]):
        pf = 0 if parent_poly[i] is None else face_of_poly[parent_poly[i]]
        f = Face(len(faces), i, pf)
        faces.append(f)
        faces[pf].children.append(f.id)
        faces[pf].children_polygons.append(i)
        face_of_poly[i] = f.id

    # assign each slit to the face containing its interior probe point
    for s in open_idx:
        probe = _slit_probe(link.components[s][0])
        best = 0
        best_depth = -1
        for i in closed_idx:
            if _point_in_polygon(probe, polys[i]):
                if depth[i] > best_depth:
                    best_depth = depth[i]
                    best = face_of_poly[i]
        faces[best].slits.append(s)
    return RegionGraph(faces, t)


def _signature(rg: RegionGraph):
    return tuple(
        (f.polygon, f.parent, tuple(sorted(f.slits))) for f in rg.faces
    )


def arrangement(g: PolygonalGerm, t: Optional[float] = None) -> RegionGraph:
    """Region structure of the link complement, verified stable on the grid."""
    grid = g.t_grid(6) if t is None else [t] + [t / 2, t / 4]
    rgs = [_arrangement_at(g, tt) for tt in grid]
    sig = _signature(rgs[0])
    for rg in rgs[1:]:
        if _signature(rg) != sig:
            raise UnstableCombinatorics(
                "arrangement combinatorics change along the grid"
            )
    rg = rgs[0]
    _fill_area_exponents(g, rg)
    return rg


# ---------------------------------------------------------------------------
# Area exponents
# ---------------------------------------------------------------------------


def _shoelace_series(g: PolygonalGerm, comp_idx: int) -> PuiseuxSeries:
    comp = g.components[comp_idx]
    vs = comp.vertices
    n = len(vs)
    acc = PuiseuxSeries.zero(vs[0].x.truncation)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        acc = acc + a.x * b.y - b.x * a.y
    return acc


def _fill_area_exponents(g: PolygonalGerm, rg: RegionGraph) -> None:
    area: Dict[int, PuiseuxSeries] = {}
    for f in rg.faces:
        if f.polygon is None:
            continue
        s = _shoelace_series(g, f.polygon)
        if s.leading().coefficient < 0:
            s = -s
        area[f.id] = s
    for f in rg.faces:
        if f.polygon is None:
            f.area_exponent = Fraction(2)  # the disk term dominates
            continue
        s = area[f.id]
        for ch in f.children:
            s = s - area[ch]
        lt = s.leading()
        if lt.is_zero:
            raise ExponentUnstable("face area vanishes up to truncation")
        f.area_exponent = lt.exponent
        # numeric cross-check on the grid
        grid = g.t_grid(8)
        vals = [abs(s.eval(t)) for t in grid]
        slope = fit_slope(grid, vals)
        if not math.isnan(slope) and abs(slope - float(lt.exponent)) > 0.05:
            raise ExponentUnstable(
                f"numeric area slope {slope} vs symbolic {lt.exponent}"
            )


def face_area_exponent(g: PolygonalGerm, face: Face) -> Fraction:
    if face.area_exponent is None:
        raise ValueError("face does not carry an exponent; use arrangement()")
    return face.area_exponent


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


@dataclass
class ExtendedTree:
    adjacency: List[List[int]]
    labels: List[Tuple]  # sortable label per vertex

    @property
    def size(self) -> int:
        return len(self.adjacency)


def extended_tree(g: PolygonalGerm) -> ExtendedTree:
    if any(not comp.closed for comp in g.components):
        raise HasOpenComponents(
            "extended tree requires all components closed; use arrangement()"
        )
    rg = arrangement(g)
    return _region_tree(rg, with_slits=False)


def _region_tree(rg: RegionGraph, with_slits: bool) -> ExtendedTree:
    n = len(rg.faces)
    adj: List[List[int]] = [[] for _ in range(n)]
    for f in rg.faces:
        if f.parent is not None:
            adj[f.id].append(f.parent)
            adj[f.parent].append(f.id)
    labels = []
    for f in rg.faces:
        # the outer face is canonically preserved by ambient equivalences,
        # so it carries a distinguishing mark (this roots the tree)
        mark = 1 if f.polygon is None else 0
        if with_slits:
            labels.append((mark, f.area_exponent, len(f.slits)))
        else:
            labels.append((mark, f.area_exponent))
    return ExtendedTree(adj, labels)


def _tree_centers(adj: List[List[int]]) -> List[int]:
    n = len(adj)
    if n == 1:
        return [0]
    deg = [len(a) for a in adj]
    leaves = [i for i in range(n) if deg[i] <= 1]
    removed = len(leaves)
    while removed < n:
        nxt = []
        for u in leaves:
            deg[u] = 0
            for v in adj[u]:
                if deg[v] > 0:
                    deg[v] -= 1
                    if deg[v] == 1:
                        nxt.append(v)
        removed += len(nxt)
        leaves = nxt
    return leaves if leaves else [0]


def _ahu_code(root: int, parent: int, adj: List[List[int]], labels) -> Tuple:
    child_codes = sorted(
        _ahu_code(v, root, adj, labels) for v in adj[root] if v != parent
    )
    return (tuple(labels[root]), tuple(child_codes))


def canonical_code(T: ExtendedTree) -> Tuple:
    centers = _tree_centers(T.adjacency)
    return min(_ahu_code(c, -1, T.adjacency, T.labels) for c in centers)


def tree_isomorphic(T1: ExtendedTree, T2: ExtendedTree) -> bool:
    if T1.size != T2.size:
        return False
    return canonical_code(T1) == canonical_code(T2)


# ---------------------------------------------------------------------------
# Separating cones
# ---------------------------------------------------------------------------


def separating_cones(g: PolygonalGerm, eps: float = 0.25):
    """Per closed component, the external boundary of the eps*t
    neighborhood of its tangent-link footprint; curves pairwise disjoint
    (eps is halved internally on collision)."""
    from shapely.geometry import LineString, Point, Polygon

    if any(not comp.closed for comp in g.components):
        raise HasOpenComponents("separating cones need closed components")
    verdict = is_lne(g)
    if verdict.status == "NotLNE":
        raise NotLNEInput("separating cones require an LNE germ")
    t = g.t_grid(0)[0]
    footprints = []
    for comp in g.components:
        pts = [
            (float(cx) * t, float(cy) * t)
            for cx, cy in (v.tangent_coefficients() for v in comp.vertices)
        ]
        distinct = sorted(set(pts))
        if len(distinct) == 1:
            geom = Point(distinct[0])
        elif len(distinct) == 2:
            geom = LineString(distinct)
        else:
            geom = LineString(pts + [pts[0]])
        footprints.append(geom)

    for _ in range(40):
        r = eps * t
        buffered = [f.buffer(r) for f in footprints]
        ok = True
        for i in range(len(buffered)):
            for j in range(i + 1, len(buffered)):
                if buffered[i].intersects(buffered[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return [list(b.exterior.coords) for b in buffered], eps
        eps /= 2
    raise EpsilonTooLarge("could not separate tangent footprints")


# ---------------------------------------------------------------------------
# Equivalence decision
# ---------------------------------------------------------------------------


@dataclass
class EquivalenceVerdict:
    status: str  # Equivalent | Inequivalent | NecessaryConditionsHold | NotApplicable
    witness: Optional[str] = None


def _tree_witness(T1: ExtendedTree, T2: ExtendedTree) -> str:
    if T1.size != T2.size:
        return f"region count differs: {T1.size} vs {T2.size}"
    m1 = sorted(T1.labels)
    m2 = sorted(T2.labels)
    if m1 != m2:
        # look specifically for slit-bearing faces when labels carry slits
        if len(m1[0]) == 3:
            s1 = sorted(l[1] for l in T1.labels if l[2] > 0)
            s2 = sorted(l[1] for l in T2.labels if l[2] > 0)
            if s1 != s2:
                return (
                    "slit-bearing face area exponent differs: "
                    f"{[str(x) for x in s1]} vs {[str(x) for x in s2]}"
                )
        return f"region label multisets differ: {m1} vs {m2}"
    return "region tree shapes differ (outer-face rooting)"


def decide_equivalence(X: PolygonalGerm, Y: PolygonalGerm) -> EquivalenceVerdict:
    for g in (X, Y):
        if is_lne(g).status == "NotLNE":
            raise NotLNEInput("equivalence decision requires LNE germs")
    x_closed = all(c.closed for c in X.components)
    y_closed = all(c.closed for c in Y.components)
    if x_closed and y_closed:
        T1 = extended_tree(X)
        T2 = extended_tree(Y)
        if tree_isomorphic(T1, T2):
            return EquivalenceVerdict("Equivalent")
        return EquivalenceVerdict("Inequivalent", _tree_witness(T1, T2))
    # non-isolated singularity: necessary conditions only
    R1 = _region_tree(arrangement(X), with_slits=True)
    R2 = _region_tree(arrangement(Y), with_slits=True)
    if tree_isomorphic(R1, R2):
        return EquivalenceVerdict("NecessaryConditionsHold")
    return EquivalenceVerdict("Inequivalent", _tree_witness(R1, R2))
