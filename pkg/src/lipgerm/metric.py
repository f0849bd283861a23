"""Tangency orders, limit angles and the LNE decision procedure.

The outer tangency order of two arcs is the exponent beta with
||gamma1(t) - gamma2(t)|| = c t^beta + o(t^beta); the inner variant
measures distance along the link.  A polygonal germ is Lipschitz
normally embedded (LNE) when the two agree for every pair of points,
which for polygonal data reduces to vertex pairs plus non-adjacent
edge-pair proximity checks, cross-checked numerically on the t-grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .germ import ArcGerm, Component, PolygonalGerm
from .puiseux import (
    GREATER,
    LESS,
    BothZero,
    PuiseuxSeries,
    norm2_leading,
)

INF = math.inf


class TruncationTooShort(ValueError):
    pass


class DifferentComponents(ValueError):
    pass


class CoincidentArcs(ValueError):
    pass


@dataclass(frozen=True)
class TordValue:
    """Tangency order: exponent plus (squared) leading distance coefficient."""

    exponent: object  # Fraction or math.inf
    coefficient_sq: Optional[Fraction] = None

    @property
    def is_infinite(self) -> bool:
        return self.exponent == INF

    def coefficient(self) -> float:
        if self.coefficient_sq is None:
            return float("nan")
        return math.sqrt(float(self.coefficient_sq))


def tord(g1: ArcGerm, g2: ArcGerm) -> TordValue:
    dx = g1.x - g2.x
    dy = g1.y - g2.y
    if dx.is_zero() and dy.is_zero():
        return TordValue(INF)
    lt = norm2_leading(dx, dy)
    return TordValue(lt.exponent / 2, lt.coefficient)


def edge_exponents(g: PolygonalGerm) -> List[List[Fraction]]:
    out = []
    for comp in g.components:
        exps = []
        for i, j in comp.edges():
            tv = tord(comp.vertices[i], comp.vertices[j])
            if tv.is_infinite:
                raise TruncationTooShort("edge with infinite tangency order")
            exps.append(tv.exponent)
        out.append(exps)
    return out


def component_edge_exponents(comp: Component) -> List[Fraction]:
    exps = []
    for i, j in comp.edges():
        tv = tord(comp.vertices[i], comp.vertices[j])
        if tv.is_infinite:
            raise TruncationTooShort("edge with infinite tangency order")
        exps.append(tv.exponent)
    return exps


def inner_exponent(comp: Component, i: int, j: int,
                   exps: Optional[Sequence[Fraction]] = None):
    """Leading exponent of the inner (along-link) distance between
    vertices i and j: min edge exponent along a path, shorter path wins."""
    if i == j:
        return INF
    if exps is None:
        exps = component_edge_exponents(comp)
    if i > j:
        i, j = j, i
    forward = min(exps[k] for k in range(i, j))
    if not comp.closed:
        return forward
    n = len(comp.vertices)
    rest = [exps[k % n] for k in range(j, i + n)]
    backward = min(rest)
    # smaller length <=> larger exponent for small t
    return max(forward, backward)


def tord_inner(g: PolygonalGerm, i, j) -> TordValue:
    """Inner tangency order between two vertices given as (component,
    vertex) index pairs, or plain ints for single-component germs."""
    if isinstance(i, int):
        i = (0, i)
    if isinstance(j, int):
        j = (0, j)
    if i[0] != j[0]:
        raise DifferentComponents("vertices lie in different components")
    comp = g.components[i[0]]
    e = inner_exponent(comp, i[1], j[1])
    return TordValue(e)


def _leading_vector(dx: PuiseuxSeries, dy: PuiseuxSeries) -> Tuple[Fraction, Fraction]:
    lx, ly = dx.leading(), dy.leading()
    if lx.is_zero and ly.is_zero:
        raise CoincidentArcs("zero difference vector")
    es = [lt.exponent for lt in (lx, ly) if not lt.is_zero]
    e = min(es)
    ux = lx.coefficient if (not lx.is_zero and lx.exponent == e) else Fraction(0)
    uy = ly.coefficient if (not ly.is_zero and ly.exponent == e) else Fraction(0)
    return ux, uy


def limit_angle(g1: ArcGerm, g2: ArcGerm, g3: ArcGerm) -> float:
    """Angle in [0, pi] between the limit directions of g1-g2 and g3-g2."""
    u = _leading_vector(g1.x - g2.x, g1.y - g2.y)
    w = _leading_vector(g3.x - g2.x, g3.y - g2.y)
    cross = u[0] * w[1] - u[1] * w[0]
    dot = u[0] * w[0] + u[1] * w[1]
    if cross == 0:
        return math.pi if dot < 0 else 0.0
    nu = math.sqrt(float(u[0]) ** 2 + float(u[1]) ** 2)
    nw = math.sqrt(float(w[0]) ** 2 + float(w[1]) ** 2)
    c = float(dot) / (nu * nw)
    return math.acos(max(-1.0, min(1.0, c)))


# ---------------------------------------------------------------------------
# Edge-pair proximity (symbolic)
# ---------------------------------------------------------------------------


def _projection(P: ArcGerm, A: ArcGerm, B: ArcGerm):
    """Perpendicular projection data of arc P onto the moving line AB.

    Returns (inside, s, dist_exponent) where s is the Puiseux parameter
    series of the foot of the perpendicular and inside says whether the
    foot lies strictly inside the segment eventually; dist_exponent is
    the leading exponent of the perpendicular distance (None if P is on
    the line up to truncation).
    """
    ux, uy = B.x - A.x, B.y - A.y
    wx, wy = P.x - A.x, P.y - A.y
    den = ux * ux + uy * uy
    num = wx * ux + wy * uy
    s = num * den.inverse()
    one = PuiseuxSeries.constant(1, s.truncation)
    zero = PuiseuxSeries.zero(s.truncation)
    inside = (
        s.compare_eventual(zero) == GREATER
        and s.compare_eventual(one) == LESS
    )
    dist2_num = (wx * wx + wy * wy) * den - num * num
    if dist2_num.is_zero():
        return inside, s, None
    e = (dist2_num.leading().exponent - den.leading().exponent) / 2
    return inside, s, e


def _edge_pairs(comp: Component):
    edges = comp.edges()
    n = len(edges)
    for a in range(n):
        for b in range(a + 1, n):
            ia, ja = edges[a]
            ib, jb = edges[b]
            if {ia, ja} & {ib, jb}:
                continue  # adjacent edges share a vertex
            yield a, b


def _edge_pair_check(comp: Component, exps: Sequence[Fraction], a: int, b: int):
    """Compare the outer distance exponent of a non-adjacent edge pair
    with the inner exponent between the attaining points.

    Returns (outer_exp, inner_exp, attain_kind) or None when inconclusive.
    """
    edges = comp.edges()
    ia, ja = edges[a]
    ib, jb = edges[b]
    vs = comp.vertices
    best = None  # (exp, inner_exp, kind)

    def vertex_case(i, j):
        tv = tord(vs[i], vs[j])
        if tv.is_infinite:
            return None
        return (tv.exponent, inner_exponent(comp, i, j, exps), f"vertices {i},{j}")

    for i in (ia, ja):
        for j in (ib, jb):
            c = vertex_case(i, j)
            if c and (best is None or c[0] > best[0]):
                best = c

    def proj_case(p, q1, q2, edge_idx):
        try:
            inside, s, e = _projection(vs[p], vs[q1], vs[q2])
        except ZeroDivisionError:
            return None
        if not inside or e is None:
            return None
        s_exp = s.leading().exponent if not s.is_zero() else None
        one_minus = PuiseuxSeries.constant(1, s.truncation) - s
        sm_exp = one_minus.leading().exponent if not one_minus.is_zero() else None
        ee = exps[edge_idx]
        via1 = min(
            (s_exp + ee) if s_exp is not None else INF,
            inner_exponent(comp, p, q1, exps),
        )
        via2 = min(
            (sm_exp + ee) if sm_exp is not None else INF,
            inner_exponent(comp, p, q2, exps),
        )
        return (e, max(via1, via2), f"vertex {p} onto edge {q1}-{q2}")

    for p in (ia, ja):
        c = proj_case(p, ib, jb, b)
        if c and (best is None or c[0] > best[0]):
            best = c
    for p in (ib, jb):
        c = proj_case(p, ia, ja, a)
        if c and (best is None or c[0] > best[0]):
            best = c
    return best


# ---------------------------------------------------------------------------
# LNE verdict
# ---------------------------------------------------------------------------


@dataclass
class LneVerdict:
    status: str  # "LNE" | "NotLNE" | "HeuristicLNE"
    witness: Optional[dict] = None
    constant_estimates: List[Tuple[float, float]] = field(default_factory=list)
    witness_ratios: List[Tuple[float, float]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.status == "LNE"


def _component_sample_points(pts: Sequence[Tuple[float, float]], closed: bool,
                             per_edge: int = 3):
    """Sample points along a chain: vertices plus interior edge samples.
    Each sample carries its arclength position for inner distances."""
    n = len(pts)
    seg_idx = range(n) if closed else range(n - 1)
    samples = []  # (x, y, arclength)
    acc = 0.0
    for i in seg_idx:
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        L = math.hypot(x1 - x0, y1 - y0)
        samples.append((x0, y0, acc))
        for k in range(1, per_edge + 1):
            u = k / (per_edge + 1)
            samples.append((x0 + u * (x1 - x0), y0 + u * (y1 - y0), acc + u * L))
        acc += L
    if not closed:
        samples.append((pts[-1][0], pts[-1][1], acc))
    return samples, acc


def lne_constant(g: PolygonalGerm, t: float, per_edge: int = 3) -> float:
    """Sampled LNE constant sup d_inner/d_outer over point pairs at t."""
    from .germ import plane_link

    link = plane_link(g, t, check=False)
    best = 1.0
    for pts, closed in link.components:
        if len(pts) < 2:
            continue
        samples, total = _component_sample_points(pts, closed, per_edge)
        for i in range(len(samples)):
            for j in range(i + 1, len(samples)):
                xi, yi, si = samples[i]
                xj, yj, sj = samples[j]
                outer = math.hypot(xi - xj, yi - yj)
                if outer == 0:
                    continue
                inner = abs(si - sj)
                if closed:
                    inner = min(inner, total - inner)
                best = max(best, inner / outer)
    return best


def _witness_ratio(g: PolygonalGerm, comp_idx: int, i: int, j: int, t: float):
    from .germ import plane_link

    link = plane_link(g, t, check=False)
    pts, closed = link.components[comp_idx]
    n = len(pts)
    outer = math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
    lengths = []
    seg_idx = range(n) if closed else range(n - 1)
    L = [math.hypot(pts[(k + 1) % n][0] - pts[k][0],
                    pts[(k + 1) % n][1] - pts[k][1]) for k in seg_idx]
    a, b = min(i, j), max(i, j)
    forward = sum(L[k] for k in range(a, b))
    if closed:
        total = sum(L)
        inner = min(forward, total - forward)
    else:
        inner = forward
    if outer == 0:
        return math.inf
    return inner / outer


def is_lne(g: PolygonalGerm, grid_depth: int = 10) -> LneVerdict:
    witness = None
    symbolic_ok = True

    for ci, comp in enumerate(g.components):
        vs = comp.vertices
        n = len(vs)
        try:
            exps = component_edge_exponents(comp)
        except TruncationTooShort:
            symbolic_ok = False
            continue
        # vertex pairs
        for i in range(n):
            for j in range(i + 1, n):
                tv = tord(vs[i], vs[j])
                if tv.is_infinite:
                    symbolic_ok = False
                    continue
                inner = inner_exponent(comp, i, j, exps)
                if tv.exponent > inner:
                    cand = {
                        "kind": "vertex-pair",
                        "component": ci,
                        "pair": (i, j),
                        "outer_exponent": tv.exponent,
                        "inner_exponent": inner,
                    }
                    if witness is None or (
                        cand["outer_exponent"] - cand["inner_exponent"]
                        > witness["outer_exponent"] - witness["inner_exponent"]
                    ):
                        witness = cand
                elif tv.exponent < inner:
                    symbolic_ok = False
        # non-adjacent edge pairs
        for a, b in _edge_pairs(comp):
            res = _edge_pair_check(comp, exps, a, b)
            if res is None:
                symbolic_ok = False
                continue
            outer_e, inner_e, kind = res
            if outer_e > inner_e:
                cand = {
                    "kind": "edge-pair",
                    "component": ci,
                    "pair": (a, b),
                    "detail": kind,
                    "outer_exponent": outer_e,
                    "inner_exponent": inner_e,
                }
                if witness is None:
                    witness = cand

    grid = g.t_grid(grid_depth)
    estimates = [(t, lne_constant(g, t)) for t in grid]
    cs = sorted(c for _, c in estimates)
    median = cs[len(cs) // 2]
    flat = max(cs) <= 2 * median

    if witness is not None:
        ratios = []
        if witness["kind"] == "vertex-pair":
            i, j = witness["pair"]
            for t in grid:
                ratios.append((t, _witness_ratio(g, witness["component"], i, j, t)))
        verdict = LneVerdict("NotLNE", witness, estimates, ratios)
        return verdict
    if symbolic_ok and flat:
        return LneVerdict("LNE", None, estimates)
    return LneVerdict("HeuristicLNE", None, estimates)
