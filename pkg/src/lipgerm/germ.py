"""Arcs, polygonal germs, plane links and synchronized-family views.

An arc is gamma(t) = (x(t), y(t), t) with Puiseux coordinates whose
leading exponents are >= 1, so the arc lies in some cone
x^2 + y^2 <= (a t)^2 and has a tangent direction at the origin.  A
polygonal germ is a finite union of open/closed chains of such arcs;
its plane link at height t is the corresponding polyline/polygon
arrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .puiseux import (
    DEFAULT_TRUNCATION,
    LESS,
    GREATER,
    EQUAL,
    PuiseuxSeries,
    format_series,
    parse_series,
)


class GermError(ValueError):
    pass


class ConeViolation(GermError):
    """An arc coordinate has leading exponent < 1."""


class DuplicateVertex(GermError):
    pass


class TooFewVertices(GermError):
    pass


class InvalidT(GermError):
    """The plane link is not simple at the requested t."""


class NotSynchronizable(GermError):
    pass


class GermFormatError(GermError):
    pass


@dataclass(frozen=True)
class ArcGerm:
    """gamma(t) = (x(t), y(t), t)."""

    x: PuiseuxSeries
    y: PuiseuxSeries

    def validate(self) -> None:
        for s, name in ((self.x, "x"), (self.y, "y")):
            lt = s.leading()
            if not lt.is_zero and lt.exponent < 1:
                raise ConeViolation(
                    f"coordinate {name} has leading exponent {lt.exponent} < 1"
                )

    def eval(self, t: float) -> Tuple[float, float]:
        return (self.x.eval(t), self.y.eval(t))

    def tangent_coefficients(self) -> Tuple[Fraction, Fraction]:
        return (self.x.coefficient_at(1), self.y.coefficient_at(1))

    def same_as(self, other: "ArcGerm") -> bool:
        return (self.x - other.x).is_zero() and (self.y - other.y).is_zero()


def arc(x, y, truncation=DEFAULT_TRUNCATION) -> ArcGerm:
    """Convenience constructor from term lists, series, or text."""

    def coerce(v) -> PuiseuxSeries:
        if isinstance(v, PuiseuxSeries):
            return v
        if isinstance(v, str):
            return parse_series(v, truncation)
        if isinstance(v, (int, Fraction)):
            # interpret a bare rational c as the monomial c*t
            return PuiseuxSeries.monomial(1, v, truncation)
        return PuiseuxSeries(v, truncation)

    return ArcGerm(coerce(x), coerce(y))


@dataclass(frozen=True)
class Component:
    vertices: Tuple[ArcGerm, ...]
    closed: bool

    def edges(self) -> List[Tuple[int, int]]:
        n = len(self.vertices)
        out = [(i, i + 1) for i in range(n - 1)]
        if self.closed:
            out.append((n - 1, 0))
        return out


@dataclass(frozen=True)
class PlaneLink:
    t: float
    components: Tuple[Tuple[Tuple[Tuple[float, float], ...], bool], ...]


class PolygonalGerm:
    """Validated polygonal surface germ."""

    def __init__(self, components: Sequence[Component], cone_opening: Fraction):
        self.components: Tuple[Component, ...] = tuple(components)
        self.cone_opening = cone_opening
        self._grid: Optional[List[float]] = None

    # flat vertex indexing helpers -------------------------------------

    def flat_vertices(self) -> List[Tuple[int, int, ArcGerm]]:
        out = []
        for ci, comp in enumerate(self.components):
            for vi, v in enumerate(comp.vertices):
                out.append((ci, vi, v))
        return out

    def single_component(self) -> Component:
        if len(self.components) != 1:
            raise GermError("expected a single-component germ")
        return self.components[0]

    # grid -------------------------------------------------------------

    def t_grid(self, depth: int = 15, t_max: Optional[float] = None) -> List[float]:
        if t_max is None:
            if self._grid is not None and len(self._grid) >= depth + 1:
                return self._grid[: depth + 1]
            t_max = certified_t_max(self)
        grid = [t_max * 2.0 ** (-j) for j in range(depth + 1)]
        if self._grid is None:
            self._grid = grid
        return grid


def make_polygonal_germ(
    components: Sequence[Tuple[Sequence[ArcGerm], bool]],
) -> PolygonalGerm:
    comps: List[Component] = []
    for vertices, closed in components:
        vs = tuple(vertices)
        if closed and len(vs) < 3:
            raise TooFewVertices("closed components need at least 3 vertices")
        if not closed and len(vs) < 2:
            raise TooFewVertices("open components need at least 2 vertices")
        for v in vs:
            v.validate()
        pairs = list(zip(vs, vs[1:]))
        if closed:
            pairs.append((vs[-1], vs[0]))
        for a, b in pairs:
            if a.same_as(b):
                raise DuplicateVertex("consecutive vertex arcs coincide")
        comps.append(Component(vs, closed))
    if not comps:
        raise TooFewVertices("germ has no components")
    return PolygonalGerm(comps, _cone_opening_estimate(comps))


def _cone_opening_estimate(comps: Sequence[Component]) -> Fraction:
    """Rational upper bound for sup ||(x,y)|| / t over all vertex arcs.

    Since every exponent is >= 1 and t <= 1 on the validated range,
    ||x(t)|| <= t * sum|c_i|, so the sum of absolute coefficients of both
    coordinates bounds the ratio.
    """
    a = Fraction(1)
    for comp in comps:
        for v in comp.vertices:
            bound = sum(abs(c) for _, c in v.x.terms) + sum(
                abs(c) for _, c in v.y.terms
            )
            a = max(a, bound)
    return a


# ---------------------------------------------------------------------------
# Plane links and simplicity
# ---------------------------------------------------------------------------


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _on_segment(p, a, b, tol) -> bool:
    """p strictly inside segment [a, b] (not at an endpoint)."""
    if abs(_orient(a, b, p)) > tol * max(
        1e-300, abs(b[0] - a[0]) + abs(b[1] - a[1])
    ):
        return False
    d2 = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    if d2 == 0:
        return False
    s = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / d2
    return 1e-9 < s < 1 - 1e-9


def segments_conflict(a1, a2, b1, b2, tol=1e-12) -> bool:
    """True if two segments cross properly or touch at an interior point.

    Touching at shared endpoints is allowed (chains meet at vertices).
    """
    shared = any(
        p == q for p in (a1, a2) for q in (b1, b2)
    )
    d1 = _orient(b1, b2, a1)
    d2 = _orient(b1, b2, a2)
    d3 = _orient(a1, a2, b1)
    d4 = _orient(a1, a2, b2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if shared:
        return False
    for p in (a1, a2):
        if _on_segment(p, b1, b2, tol):
            return True
    for p in (b1, b2):
        if _on_segment(p, a1, a2, tol):
            return True
    return False


def _link_segments(link: PlaneLink):
    segs = []
    for ci, (pts, closed) in enumerate(link.components):
        n = len(pts)
        rng = range(n) if closed else range(n - 1)
        for i in rng:
            segs.append((ci, i, pts[i], pts[(i + 1) % n]))
    return segs


def link_is_simple(link: PlaneLink) -> bool:
    segs = _link_segments(link)
    for i in range(len(segs)):
        ci, ei, a1, a2 = segs[i]
        for j in range(i + 1, len(segs)):
            cj, ej, b1, b2 = segs[j]
            if ci == cj and abs(ei - ej) <= 1:
                continue
            if ci == cj:
                npts = len(link.components[ci][0])
                if link.components[ci][1] and {ei, ej} == {0, npts - 1}:
                    continue
            if segments_conflict(a1, a2, b1, b2):
                return False
    return True


def plane_link(g: PolygonalGerm, t: float, check: bool = True) -> PlaneLink:
    comps = tuple(
        (tuple(v.eval(t) for v in comp.vertices), comp.closed)
        for comp in g.components
    )
    link = PlaneLink(t, comps)
    if check and not link_is_simple(link):
        raise InvalidT(f"plane link is not simple at t = {t}")
    return link


def tangent_direction(v: ArcGerm) -> Tuple[float, float, float]:
    cx, cy = v.tangent_coefficients()
    n = math.sqrt(float(cx) ** 2 + float(cy) ** 2 + 1.0)
    return (float(cx) / n, float(cy) / n, 1.0 / n)


# ---------------------------------------------------------------------------
# Certified validity range of t
# ---------------------------------------------------------------------------


def _ordering_predicates_agree(g: PolygonalGerm, t: float) -> bool:
    flat = g.flat_vertices()
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            for coord in ("x", "y"):
                a = getattr(flat[i][2], coord)
                b = getattr(flat[j][2], coord)
                verdict = a.compare_eventual(b)
                if verdict not in (LESS, GREATER):
                    continue
                diff = a.eval(t) - b.eval(t)
                if verdict == GREATER and diff <= 0:
                    return False
                if verdict == LESS and diff >= 0:
                    return False
    return True


def certified_t_max(g: PolygonalGerm, k_min: int = 2, k_max: int = 40) -> float:
    """Largest t = 2^-k at which segment/ordering predicates match their
    leading-term verdicts (checked at t and t/2), defining the grid anchor."""
    for k in range(k_min, k_max + 1):
        t = 2.0 ** (-k)
        ok = True
        for tt in (t, t / 2):
            if not _ordering_predicates_agree(g, tt):
                ok = False
                break
            try:
                plane_link(g, tt, check=True)
            except InvalidT:
                ok = False
                break
        if ok:
            return t
    raise InvalidT("no certified t range found up to 2^-%d" % k_max)


# ---------------------------------------------------------------------------
# Synchronized families
# ---------------------------------------------------------------------------


class SynchronizedFamily:
    """A chain viewed as the graph of a piecewise-linear family f_t after
    an axis rotation by theta; M bounds all segment slopes."""

    def __init__(self, chain: Sequence[ArcGerm], theta: float, M: float,
                 limit_slopes: List[float]):
        self.chain = tuple(chain)
        self.theta = theta
        self.M = M
        self.limit_slopes = limit_slopes

    @property
    def m_unbounded(self) -> bool:
        return math.isinf(self.M)

    def rotated_points(self, t: float) -> List[Tuple[float, float]]:
        c, s = math.cos(self.theta), math.sin(self.theta)
        out = []
        for v in self.chain:
            x, y = v.eval(t)
            out.append((c * x - s * y, s * x + c * y))
        return out

    def x_interval(self, t: float) -> Tuple[float, float]:
        pts = self.rotated_points(t)
        return pts[0][0], pts[-1][0]

    def value(self, x: float, t: float) -> float:
        """Piecewise-linear interpolation f_t(x) through the rotated vertices."""
        pts = self.rotated_points(t)
        if x <= pts[0][0]:
            return pts[0][1]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                if x1 == x0:
                    return y1
                u = (x - x0) / (x1 - x0)
                return y0 + u * (y1 - y0)
        return pts[-1][1]


def synchronized_view(chain: Sequence[ArcGerm], theta: float = 0.0,
                      sample_ts: Optional[Sequence[float]] = None) -> SynchronizedFamily:
    chain = list(chain)
    if len(chain) < 2:
        raise NotSynchronizable("need at least 2 vertices")
    if sample_ts is None:
        sample_ts = [2.0 ** (-k) for k in range(6, 16)]

    if theta == 0.0:
        # exact ordering check on the x series
        for a, b in zip(chain, chain[1:]):
            if a.x.compare_eventual(b.x) != LESS:
                raise NotSynchronizable("rotated x-coordinates not increasing")
        slopes = []
        for a, b in zip(chain, chain[1:]):
            dx = b.x - a.x
            dy = b.y - a.y
            ldx, ldy = dx.leading(), dy.leading()
            if ldy.is_zero:
                slopes.append(0.0)
            elif ldy.exponent < ldx.exponent:
                slopes.append(math.inf)
            elif ldy.exponent > ldx.exponent:
                slopes.append(0.0)
            else:
                slopes.append(abs(float(ldy.coefficient) / float(ldx.coefficient)))
    else:
        c, s = math.cos(theta), math.sin(theta)

        def rot(v: ArcGerm, t: float):
            x, y = v.eval(t)
            return (c * x - s * y, s * x + c * y)

        for a, b in zip(chain, chain[1:]):
            if not all(rot(a, t)[0] < rot(b, t)[0] for t in sample_ts):
                raise NotSynchronizable("rotated x-coordinates not increasing")
        slopes = []
        for a, b in zip(chain, chain[1:]):
            vals = []
            for t in sample_ts:
                xa, ya = rot(a, t)
                xb, yb = rot(b, t)
                vals.append(abs((yb - ya) / (xb - xa)))
            # crude limit detection: growing sampled slopes mean unbounded
            if vals[-1] > 4 * vals[0] + 1e-9 and vals[-1] > 1e3:
                slopes.append(math.inf)
            else:
                slopes.append(vals[-1])

    fam = SynchronizedFamily(chain, theta, 0.0, slopes)
    # margin: sampled slopes on the grid
    sampled_max = 0.0
    for t in sample_ts:
        pts = fam.rotated_points(t)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 != x0:
                sampled_max = max(sampled_max, abs((y1 - y0) / (x1 - x0)))
    limit_max = max(slopes) if slopes else 0.0
    if math.isinf(limit_max):
        fam.M = math.inf
    else:
        fam.M = max(limit_max, sampled_max) * 1.1 + 1e-9
    return fam


# ---------------------------------------------------------------------------
# Germ file format: `lipgerm v1`
# ---------------------------------------------------------------------------


def write_germ(g: PolygonalGerm) -> str:
    lines = ["lipgerm v1"]
    for comp in g.components:
        lines.append("component " + ("closed" if comp.closed else "open"))
        for v in comp.vertices:
            lines.append(
                "x = %s; y = %s" % (format_series(v.x), format_series(v.y))
            )
    return "\n".join(lines) + "\n"


def parse_germ(text: str, truncation=DEFAULT_TRUNCATION) -> PolygonalGerm:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "lipgerm v1":
        raise GermFormatError("missing 'lipgerm v1' header")
    comps: List[Tuple[List[ArcGerm], bool]] = []
    current: Optional[List[ArcGerm]] = None
    closed = False
    for ln in lines[1:]:
        if ln.startswith("component"):
            if current is not None:
                comps.append((current, closed))
            kind = ln.split()[1] if len(ln.split()) > 1 else ""
            if kind not in ("open", "closed"):
                raise GermFormatError(f"bad component kind: {ln!r}")
            closed = kind == "closed"
            current = []
        elif ln.startswith("x ="):
            if current is None:
                raise GermFormatError("vertex line before any component")
            try:
                xpart, ypart = ln.split(";")
                xs = parse_series(xpart.split("=", 1)[1], truncation)
                ys = parse_series(ypart.split("=", 1)[1], truncation)
            except Exception as exc:
                raise GermFormatError(f"bad vertex line {ln!r}: {exc}") from exc
            current.append(ArcGerm(xs, ys))
        else:
            raise GermFormatError(f"unrecognized line: {ln!r}")
    if current is not None:
        comps.append((current, closed))
    return make_polygonal_germ(comps)
