"""Supporting envelopes of synchronized chains, kneading envelopes of
two-edge wedges, and clearance certification against the rest of a germ.

A clearance certificate combines exact per-t geometric tests on the
certified grid with a leading-exponent persistence check: the sampled
separation must stay positive and must not vanish relative to the
envelope diameter as t decreases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

from .germ import ArcGerm, PolygonalGerm, SynchronizedFamily, plane_link
from .metric import limit_angle
from .puiseux import fit_slope

Pt = Tuple[float, float]

THETA_FLOOR = 2.0 ** -20


class UnboundedFamily(ValueError):
    pass


class RaysParallel(ValueError):
    pass


class DegenerateWedge(ValueError):
    pass


class NoThetaFound(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Supporting envelope
# ---------------------------------------------------------------------------


@dataclass
class SupportingEnvelope:
    family: SynchronizedFamily
    delta: float

    def _anchors(self, t: float):
        pts = self.family.rotated_points(t)
        x0, y0 = pts[0]
        x1, y1 = pts[-1]
        m0 = min((y - y0) / (x - x0) for x, y in pts[1:])
        M0 = max((y - y0) / (x - x0) for x, y in pts[1:])
        m1 = min((y - y1) / (x - x1) for x, y in pts[:-1])
        M1 = max((y - y1) / (x - x1) for x, y in pts[:-1])
        return (x0, y0, x1, y1, m0, M0, m1, M1)

    def lower(self, x: float, t: float) -> float:
        x0, y0, x1, y1, m0, M0, m1, M1 = self._anchors(t)
        d = self.delta
        return max(y0 + (m0 - d) * (x - x0), y1 + (M1 + d) * (x - x1))

    def upper(self, x: float, t: float) -> float:
        x0, y0, x1, y1, m0, M0, m1, M1 = self._anchors(t)
        d = self.delta
        return min(y0 + (M0 + d) * (x - x0), y1 + (m1 - d) * (x - x1))

    def polygon(self, t: float) -> List[Pt]:
        """Corner points of the envelope region at height t (the region
        between the lower max-of-lines and the upper min-of-lines)."""
        x0, y0, x1, y1, m0, M0, m1, M1 = self._anchors(t)
        d = self.delta

        def cross(s0, b0, s1, b1) -> Optional[Pt]:
            # y = s0 (x - x0) + b0 through (x0, b0) vs line through (x1, b1)
            if s0 == s1:
                return None
            x = (b1 - s1 * x1 - b0 + s0 * x0) / (s0 - s1)
            return (x, b0 + s0 * (x - x0))

        low = cross(m0 - d, y0, M1 + d, y1)
        high = cross(M0 + d, y0, m1 - d, y1)
        poly = [(x0, y0)]
        if low is not None and x0 < low[0] < x1:
            poly.append(low)
        poly.append((x1, y1))
        if high is not None and x0 < high[0] < x1:
            poly.append(high)
        return poly

    def contains_chain(self, t: float) -> bool:
        eps = 1e-12
        for x, y in self.family.rotated_points(t):
            if not (self.lower(x, t) - eps <= y <= self.upper(x, t) + eps):
                return False
        return True


def supporting_envelope(fam: SynchronizedFamily, delta: float) -> SupportingEnvelope:
    if fam.m_unbounded:
        raise UnboundedFamily("family is not M-bounded")
    if delta <= 0:
        raise ValueError("delta must be positive")
    return SupportingEnvelope(fam, delta)


# ---------------------------------------------------------------------------
# Kneading envelope
# ---------------------------------------------------------------------------


def _rot(v: Pt, ang: float) -> Pt:
    c, s = math.cos(ang), math.sin(ang)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def _line_intersection(p: Pt, d: Pt, q: Pt, e: Pt) -> Pt:
    den = d[0] * e[1] - d[1] * e[0]
    if den == 0:
        raise RaysParallel("rays do not intersect")
    s = ((q[0] - p[0]) * e[1] - (q[1] - p[1]) * e[0]) / den
    return (p[0] + s * d[0], p[1] + s * d[1])


@dataclass
class KneadingEnvelope:
    g1: ArcGerm
    g2: ArcGerm
    g3: ArcGerm
    theta: float

    def corners(self, t: float) -> List[Pt]:
        """Convex quadrilateral P1, P+, P3, P- at height t."""
        p1 = self.g1.eval(t)
        p2 = self.g2.eval(t)
        p3 = self.g3.eval(t)
        base = (p3[0] - p1[0], p3[1] - p1[1])
        # side of the base line on which p2 lies
        side = _cross(base, (p2[0] - p1[0], p2[1] - p1[1]))
        if side == 0:
            raise DegenerateWedge("wedge is collinear at t = %g" % t)
        sgn = 1.0 if side > 0 else -1.0
        # gamma-: rotate the base away from p2 at both endpoints
        r1m = _rot(base, -sgn * self.theta)
        r3m = _rot((-base[0], -base[1]), sgn * self.theta)
        gm = _line_intersection(p1, r1m, p3, r3m)
        # gamma+: rotate the legs p1p2, p3p2 outward (away from the base)
        leg1 = (p2[0] - p1[0], p2[1] - p1[1])
        leg3 = (p2[0] - p3[0], p2[1] - p3[1])
        r1p = _rot(leg1, sgn * self.theta)
        r3p = _rot(leg3, -sgn * self.theta)
        gp = _line_intersection(p1, r1p, p3, r3p)
        quad = [p1, gm, p3, gp] if sgn > 0 else [p1, gp, p3, gm]
        if not _is_convex_ccw(quad):
            raise RaysParallel("theta too large: envelope not convex")
        return quad

    def diameter(self, t: float) -> float:
        q = self.corners(t)
        return max(
            math.dist(q[i], q[j]) for i in range(4) for j in range(i + 1, 4)
        )


def _cross(u: Pt, v: Pt) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _is_convex_ccw(poly: Sequence[Pt]) -> bool:
    n = len(poly)
    for i in range(n):
        a, b, c = poly[i], poly[(i + 1) % n], poly[(i + 2) % n]
        if _cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])) <= 0:
            return False
    return True


def kneading_envelope(g1: ArcGerm, g2: ArcGerm, g3: ArcGerm,
                      theta: float) -> KneadingEnvelope:
    ang = limit_angle(g1, g2, g3)
    if ang == 0.0 or ang == math.pi:
        raise DegenerateWedge("limit angle at the middle arc is 0 or pi")
    env = KneadingEnvelope(g1, g2, g3, theta)
    env.corners(2.0 ** -8)  # raises RaysParallel/DegenerateWedge if ill-posed
    return env


# ---------------------------------------------------------------------------
# Clearance
# ---------------------------------------------------------------------------


@dataclass
class ClearanceCertificate:
    verdict: str  # Clear | Violation
    samples: List[Tuple[float, float, float]] = field(default_factory=list)
    # (t, min distance, envelope diameter)
    failure: Optional[dict] = None

    @property
    def clear(self) -> bool:
        return self.verdict == "Clear"


def _point_in_convex(p: Pt, poly: Sequence[Pt], eps: float = 0.0) -> bool:
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if _cross((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1])) < -eps:
            return False
    return True


def _strictly_inside(p: Pt, poly: Sequence[Pt]) -> bool:
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if _cross((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1])) <= 0:
            return False
    return True


def _pt_seg_distance(p: Pt, a: Pt, b: Pt) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    d2 = dx * dx + dy * dy
    if d2 == 0:
        return math.dist(p, a)
    s = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / d2
    s = min(1.0, max(0.0, s))
    return math.dist(p, (a[0] + s * dx, a[1] + s * dy))


def _seg_seg_distance(a1: Pt, a2: Pt, b1: Pt, b2: Pt) -> float:
    pt_seg = _pt_seg_distance
    d1 = _orient_f(b1, b2, a1)
    d2 = _orient_f(b1, b2, a2)
    d3 = _orient_f(a1, a2, b1)
    d4 = _orient_f(a1, a2, b2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return 0.0
    return min(
        pt_seg(a1, b1, b2), pt_seg(a2, b1, b2),
        pt_seg(b1, a1, a2), pt_seg(b2, a1, a2),
    )


def _orient_f(p: Pt, q: Pt, r: Pt) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _seg_poly_distance(a1: Pt, a2: Pt, poly: Sequence[Pt]) -> float:
    if _point_in_convex(a1, poly) or _point_in_convex(a2, poly):
        return 0.0
    n = len(poly)
    return min(
        _seg_seg_distance(a1, a2, poly[i], poly[(i + 1) % n]) for i in range(n)
    )


def _germ_segments(g: PolygonalGerm, t: float):
    link = plane_link(g, t, check=False)
    segs = []
    for ci, (pts, closed) in enumerate(link.components):
        n = len(pts)
        rng = range(n) if closed else range(n - 1)
        for i in rng:
            segs.append(((ci, i), pts[i], pts[(i + 1) % n]))
    return segs


def clearance(
    env,
    g: PolygonalGerm,
    excluded: Set[Tuple[int, int]],
    grid: Optional[Sequence[float]] = None,
    touching: Set[Tuple[int, int]] = frozenset(),
) -> ClearanceCertificate:
    """Certify that the envelope avoids every non-excluded edge of g.

    `excluded` edges (component, edge-index) form the wedge itself;
    `touching` edges are allowed to meet the envelope at its anchor
    corners (the chain edges adjacent to the wedge), so they are tested
    with the envelope shrunk by a hair instead.
    """
    if grid is None:
        grid = g.t_grid(8)
    samples = []
    scores = []
    for t in grid:
        if isinstance(env, KneadingEnvelope):
            poly = env.corners(t)
            diam = env.diameter(t)
        else:
            poly = env.polygon(t)
            diam = max(
                math.dist(poly[i], poly[j])
                for i in range(len(poly))
                for j in range(i + 1, len(poly))
            )
        mind = math.inf
        score = math.inf
        anchors = (poly[0], poly[2])  # the pinned chain vertices
        for eid, p, q in _germ_segments(g, t):
            if eid in excluded:
                continue
            d = _seg_poly_distance(p, q, poly)
            # normalize against the obstruction's own scale: near a pinned
            # corner the straightening moves points by o(distance to the
            # corner), so approach toward an anchor is harmless as long as
            # the separation keeps pace with that local scale
            dc = min(_pt_seg_distance(a, p, q) for a in anchors)
            local = min(diam, dc + d)
            if local > 0:
                score = min(score, d / local)
            if eid in touching:
                # adjacency: contact at the shared corner is expected, but
                # the edge must not dive into the envelope interior
                bad = False
                for s in (1e-3, 1e-2, 0.1, 0.5, 0.9):
                    m = (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))
                    if _strictly_inside(m, poly):
                        bad = True
                        break
                if bad:
                    return ClearanceCertificate(
                        "Violation", samples,
                        {"t": t, "edge": eid,
                         "reason": "adjacent edge enters envelope interior"},
                    )
                if d > 0:
                    mind = min(mind, d)
                continue
            if d <= 0:
                return ClearanceCertificate(
                    "Violation", samples,
                    {"t": t, "edge": eid, "reason": "envelope overlaps edge"},
                )
            mind = min(mind, d)
        samples.append((t, mind, diam))
        scores.append((t, score))
    # leading-exponent persistence: the normalized separation must not
    # vanish as t decreases
    finite = [(t, s) for t, s in scores if math.isfinite(s) and s > 0]
    if len(finite) >= 3:
        ts = [t for t, _ in finite]
        vals = [s for _, s in finite]
        slope = fit_slope(ts, vals)
        if not math.isnan(slope) and slope > 0.25:
            # score ~ t^slope -> separation vanishes relative to its scale
            return ClearanceCertificate(
                "Violation", samples,
                {"reason": "separation vanishes relative to the local scale",
                 "slope": slope},
            )
    return ClearanceCertificate("Clear", samples)


def theta_search(
    g1: ArcGerm,
    g2: ArcGerm,
    g3: ArcGerm,
    g: PolygonalGerm,
    excluded: Set[Tuple[int, int]],
    touching: Set[Tuple[int, int]] = frozenset(),
    theta0: float = math.pi / 8,
    grid: Optional[Sequence[float]] = None,
) -> Tuple[float, KneadingEnvelope, ClearanceCertificate]:
    theta = theta0
    last_err: Optional[Exception] = None
    while theta >= THETA_FLOOR:
        try:
            env = kneading_envelope(g1, g2, g3, theta)
            cert = clearance(env, g, excluded, grid=grid, touching=touching)
        except (RaysParallel, DegenerateWedge) as exc:
            last_err = exc
            theta /= 2
            continue
        if cert.clear:
            return theta, env, cert
        theta /= 2
    raise NoThetaFound(
        "no clear kneading envelope found down to theta = %g (%s)"
        % (THETA_FLOOR, last_err)
    )
