"""Certified edge-reduction pipeline.

Connected LNE polygonal germs are reduced, move by certified move, to a
single edge (open link, Hoelder triangle) or a closed 3-gon (horn).
Every move carries a clearance certificate; replaying the recorded moves
on the initial germ reproduces the final germ deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from .envelope import (
    ClearanceCertificate,
    NoThetaFound,
    SupportingEnvelope,
    clearance,
    supporting_envelope,
    theta_search,
)
from .germ import (
    ArcGerm,
    Component,
    PolygonalGerm,
    make_polygonal_germ,
    plane_link,
    synchronized_view,
    write_germ,
)
from .hull import (
    CollinearTriple,
    chain_hull_triangulation,
    find_double_highlighted_triangle,
)
from .metric import (
    component_edge_exponents,
    is_lne,
    limit_angle,
    tord,
)
from .puiseux import PuiseuxSeries

DELTA_FLOOR = 2.0 ** -20


class NotLNEInput(ValueError):
    pass


class AngleNotPi(ValueError):
    pass


class TordMismatch(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


class NoEpsilonFound(RuntimeError):
    pass


class ClearanceFailed(RuntimeError):
    pass


class PipelineStuck(RuntimeError):
    pass


@dataclass
class ReductionMove:
    kind: str
    vertex: Optional[int] = None
    params: dict = field(default_factory=dict)
    certificate: Optional[ClearanceCertificate] = None
    germ_after: Optional[PolygonalGerm] = None


@dataclass
class CanonicalForm:
    kind: str  # "HolderTriangle" | "Horn"
    exponent: Fraction
    note: str = ""

    def __str__(self) -> str:
        if self.kind == "Horn":
            s = f"Horn beta={self.exponent}"
            if self.note:
                s += f" ({self.note})"
            return s
        return f"HolderTriangle alpha={self.exponent}"


@dataclass
class ReductionTrace:
    initial_digest: str
    moves: List[ReductionMove]
    final: PolygonalGerm
    form: Optional[CanonicalForm]


def _single(g: PolygonalGerm) -> Component:
    return g.single_component()


def _mk(vertices: Sequence[ArcGerm], closed: bool) -> PolygonalGerm:
    return make_polygonal_germ([(list(vertices), closed)])


def _wedge_edge_ids(comp: Component, i: int) -> Tuple[Set, Set]:
    """Edge ids (component 0) of the wedge at vertex i and of the edges
    adjacent to the wedge (allowed boundary contact)."""
    n = len(comp.vertices)
    if comp.closed:
        e_in = (i - 1) % n
        e_out = i % n
        excluded = {(0, e_in), (0, e_out)}
        touching = {(0, (e_in - 1) % n), (0, (e_out + 1) % n)} - excluded
    else:
        excluded = {(0, i - 1), (0, i)}
        touching = set()
        if i - 2 >= 0:
            touching.add((0, i - 2))
        if i + 1 <= n - 2:
            touching.add((0, i + 1))
    return excluded, touching


def _combo(a: ArcGerm, b: ArcGerm, s: PuiseuxSeries) -> ArcGerm:
    """a + s (b - a), exact on the Puiseux data."""
    return ArcGerm(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y))


class _WorldEnvelope:
    """Supporting envelope re-expressed in the germ's coordinate frame
    (the family lives in rotated coordinates)."""

    def __init__(self, env: SupportingEnvelope, theta: float):
        self.env = env
        self.theta = theta

    def polygon(self, t: float):
        c, s = math.cos(-self.theta), math.sin(-self.theta)
        return [
            (c * x - s * y, s * x + c * y) for x, y in self.env.polygon(t)
        ]


# ---------------------------------------------------------------------------
# Individual moves
# ---------------------------------------------------------------------------


def _cert_grids(g: PolygonalGerm):
    """Candidate t-grids for certificate searches.

    Certificates are asymptotic statements; near the top of the certified
    range the separations may not have settled yet, so on failure the
    search is retried on grids shifted toward t = 0.
    """
    base = g.t_grid(8)
    t0 = base[0]
    yield base
    for shift in (6, 12):
        yield [t0 * 2.0 ** (-shift - j) for j in range(9)]


def _wedge_cert(g, prev, mid, nxt, excluded, touching):
    last: Optional[Exception] = None
    for grid in _cert_grids(g):
        try:
            return theta_search(prev, mid, nxt, g, excluded, touching, grid=grid)
        except NoThetaFound as exc:
            last = exc
    raise ClearanceFailed(str(last)) from last


def remove_collinear(g: PolygonalGerm, i: int) -> Tuple[PolygonalGerm, ReductionMove]:
    comp = _single(g)
    vs = list(comp.vertices)
    n = len(vs)
    if not comp.closed and (i <= 0 or i >= n - 1):
        raise PreconditionFailed("cannot remove an endpoint")
    prev, nxt = vs[(i - 1) % n], vs[(i + 1) % n]
    ang = limit_angle(prev, vs[i], nxt)
    if ang != math.pi:
        raise AngleNotPi(f"limit angle at vertex {i} is {ang}, not pi")

    excluded, touching = _wedge_edge_ids(comp, i)
    # supporting envelope of the collinear wedge after rotating its limit
    # direction onto the x-axis
    dx = nxt.x - prev.x
    dy = nxt.y - prev.y
    es = [lt.exponent for lt in (dx.leading(), dy.leading()) if not lt.is_zero]
    e = min(es)
    cx = float(dx.coefficient_at(e))
    cy = float(dy.coefficient_at(e))
    theta = -math.atan2(cy, cx)

    fam = synchronized_view([prev, vs[i], nxt], theta)
    cert = None
    delta = 0.5
    for grid in _cert_grids(g):
        delta = 0.5
        while delta >= DELTA_FLOOR:
            env = _WorldEnvelope(supporting_envelope(fam, delta), theta)
            cert = clearance(env, g, excluded, grid=grid, touching=touching)
            if cert.clear:
                break
            delta /= 2
        if cert is not None and cert.clear:
            break
    if cert is None or not cert.clear:
        raise ClearanceFailed(f"no clear supporting envelope at vertex {i}")

    new_vs = vs[:i] + vs[i + 1:]
    g2 = _mk(new_vs, comp.closed)
    mv = ReductionMove("CollinearRemoval", i, {"delta": delta}, cert, g2)
    return g2, mv


def slide_vertex(
    g: PolygonalGerm,
    i: int,
    sigma: Optional[Fraction] = None,
    toward: str = "prev",
    _check_tords: bool = True,
) -> Tuple[PolygonalGerm, ReductionMove]:
    """Replace gamma_i by a point of the segment toward a neighbor at
    calibrated distance ~ sigma * t^alpha."""
    comp = _single(g)
    vs = list(comp.vertices)
    n = len(vs)
    if not comp.closed and (i <= 0 or i >= n - 1):
        raise PreconditionFailed("cannot slide an endpoint")
    prev, nxt = vs[(i - 1) % n], vs[(i + 1) % n]
    t_in = tord(prev, vs[i])
    t_out = tord(vs[i], nxt)
    if _check_tords and t_in.exponent != t_out.exponent:
        raise TordMismatch(
            f"edge tords {t_in.exponent} and {t_out.exponent} differ at vertex {i}"
        )
    ang = limit_angle(prev, vs[i], nxt)
    if not (0.0 < ang < math.pi):
        raise PreconditionFailed("limit angle must be in (0, pi)")

    excluded, touching = _wedge_edge_ids(comp, i)
    theta, env, cert = _wedge_cert(g, prev, vs[i], nxt, excluded, touching)

    anchor = prev if toward == "prev" else nxt
    sig = sigma if sigma is not None else Fraction(1, 4)
    attempts = 0
    while attempts < 24:
        s = PuiseuxSeries.constant(sig, vs[i].x.truncation)
        cand = _combo(vs[i], anchor, s)
        new_vs = vs[:i] + [cand] + vs[i + 1:]
        try:
            g2 = _mk(new_vs, comp.closed)
            plane_link(g2, g2.t_grid(2)[0])
        except Exception:
            sig /= 2
            attempts += 1
            continue
        eps_eff = float(sig) * t_in.coefficient()
        mv = ReductionMove(
            "VertexSlide", i,
            {"sigma": sig, "epsilon": eps_eff, "theta": theta},
            cert, g2,
        )
        return g2, mv
    raise NoEpsilonFound(f"no admissible slide parameter at vertex {i}")


def drop_vertex(
    g: PolygonalGerm,
    i: int,
    _require_strict: bool = True,
) -> Tuple[PolygonalGerm, ReductionMove]:
    comp = _single(g)
    vs = list(comp.vertices)
    n = len(vs)
    if not comp.closed and (i <= 0 or i >= n - 1):
        raise PreconditionFailed("cannot drop an endpoint")
    prev, nxt = vs[(i - 1) % n], vs[(i + 1) % n]
    t_in = tord(prev, vs[i])
    t_out = tord(vs[i], nxt)
    if _require_strict:
        if not (t_in.exponent > t_out.exponent or t_out.exponent > t_in.exponent):
            raise PreconditionFailed("equal edge tords: drop not licensed")
        # orient so the larger tord comes first (relabeling gamma_n..gamma_1)
        hi_first = t_in.exponent > t_out.exponent
        # chain condition of the interior case
        if comp.closed or (hi_first and i - 2 >= 0) or ((not hi_first) and i + 2 <= n - 1):
            j = (i - 2) % n if hi_first else (i + 2) % n
            far = vs[j]
            mid = prev if hi_first else nxt
            t_far = tord(far, mid)
            small = t_out if hi_first else t_in
            if not comp.closed and t_far.exponent > small.exponent:
                raise PreconditionFailed(
                    "previous-edge tord exceeds the small wedge tord"
                )
    for a, b, c in ((prev, vs[i], nxt),):
        ang = limit_angle(a, b, c)
        if not (0.0 < ang < math.pi):
            raise PreconditionFailed("limit angle must be in (0, pi)")

    excluded, touching = _wedge_edge_ids(comp, i)
    theta, env, cert = _wedge_cert(g, prev, vs[i], nxt, excluded, touching)

    new_vs = vs[:i] + vs[i + 1:]
    g2 = _mk(new_vs, comp.closed)
    mv = ReductionMove("VertexDrop", i, {"theta": theta}, cert, g2)
    return g2, mv


def _collinear_triples(comp: Component) -> List[Tuple[int, int, int]]:
    """Triples of vertex arcs that are eventually collinear (exact cross
    series test on the Puiseux data)."""
    vs = comp.vertices
    n = len(vs)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ux, uy = vs[j].x - vs[i].x, vs[j].y - vs[i].y
                wx, wy = vs[k].x - vs[i].x, vs[k].y - vs[i].y
                if (ux * wy - uy * wx).is_zero():
                    out.append((i, j, k))
    return out


def perturb_to_nondegenerate(
    g: PolygonalGerm,
) -> Tuple[PolygonalGerm, List[ReductionMove]]:
    """Slide interior vertices off any eventually-collinear triple; the
    chain endpoints are never moved."""
    moves: List[ReductionMove] = []
    cur = g
    for _round in range(12):
        comp = _single(cur)
        triples = _collinear_triples(comp)
        if not triples:
            break
        n = len(comp.vertices)
        moved = False
        for (i, j, k) in triples:
            for v in (j, i, k):
                if not comp.closed and (v == 0 or v == n - 1):
                    continue
                sig = Fraction(1, 16 + 3 * len(moves))
                for toward in ("prev", "next"):
                    try:
                        cand, mv = slide_vertex(
                            cur, v, sig, toward=toward, _check_tords=False
                        )
                    except (ClearanceFailed, NoEpsilonFound, PreconditionFailed,
                            TordMismatch):
                        continue
                    if (i, j, k) in _collinear_triples(cand.single_component()):
                        continue  # slid along the degenerate line itself
                    cur = cand
                    mv.kind = "Perturbation"
                    moves.append(mv)
                    moved = True
                    break
                if moved:
                    break
            if moved:
                break
        if not moved:
            raise NoEpsilonFound("could not perturb away collinear triples")
    else:
        raise NoEpsilonFound("collinear triples persist after perturbation")
    return cur, moves


def _triangulation_center(g: PolygonalGerm) -> int:
    """Pick the reducible vertex via the constrained triangulation of the
    link at the certified t (a triangle with two consecutive chain edges)."""
    comp = _single(g)
    for t in g.t_grid(6):
        link = plane_link(g, t, check=False)
        pts = [(Fraction(x), Fraction(y)) for x, y in link.components[0][0]]
        try:
            tri = chain_hull_triangulation(pts, comp.closed)
        except CollinearTriple:
            continue
        try:
            _, center = find_double_highlighted_triangle(tri)
        except Exception:
            continue
        n = len(comp.vertices)
        if comp.closed or (0 < center < n - 1):
            return center
    raise PipelineStuck("no reducible triangle found on the grid")


def triangle_collapse(
    g: PolygonalGerm, i: int
) -> Tuple[PolygonalGerm, List[ReductionMove]]:
    """Collapse the wedge at vertex i: slide a neighbor slightly along the
    connecting edge, then drop vertex i inside its kneading envelope."""
    comp = _single(g)
    n = len(comp.vertices)
    moves: List[ReductionMove] = []
    cur = g
    slide_target = None
    if comp.closed:
        slide_target = (i + 1) % n
    else:
        if 0 < i + 1 < n - 1:
            slide_target = i + 1
        elif 0 < i - 1 < n - 1:
            slide_target = i - 1
    if slide_target is not None:
        try:
            cur, mv = slide_vertex(cur, slide_target, Fraction(1, 8))
            mv.kind = "TriangleCollapse"
            moves.append(mv)
        except (ClearanceFailed, NoEpsilonFound, TordMismatch, PreconditionFailed):
            cur = g  # collapse without the preparatory slide
            moves = []
    cur, mv = drop_vertex(cur, i, _require_strict=False)
    mv.kind = "TriangleCollapse"
    moves.append(mv)
    return cur, moves


def collapse_equal_run(
    g: PolygonalGerm,
) -> Tuple[PolygonalGerm, List[ReductionMove]]:
    """Reduce the leftmost maximal run of max-tord edges to a single edge,
    inserting calibrated substitute arcs on the flanking smaller-tord
    edges first (so all collapses happen at the run's scale)."""
    comp = _single(g)
    vs = list(comp.vertices)
    exps = component_edge_exponents(comp)
    alpha = max(exps)
    moves: List[ReductionMove] = []

    offset = 0
    if comp.closed and exps[0] == alpha and exps[-1] == alpha:
        # run wraps around index 0: rotate labels (pure relabeling) so
        # some non-alpha edge comes last and the run is interior
        j = next(e for e, x in enumerate(exps) if x != alpha)
        offset = j + 1
        vs = vs[offset:] + vs[:offset]
        g = _mk(vs, True)
        comp = _single(g)
        exps = component_edge_exponents(comp)
    run = _leftmost_run(exps, alpha)
    k1, k2 = run[0], run[-1]
    cur = g

    def insert_substitute(cur, edge_idx, at_vertex, toward_vertex):
        comp = _single(cur)
        vs = list(comp.vertices)
        e_small = component_edge_exponents(comp)[edge_idx]
        s = PuiseuxSeries.monomial(alpha - e_small, Fraction(1, 2),
                                   vs[at_vertex].x.truncation)
        sub = _combo(vs[at_vertex], vs[toward_vertex], s)
        pos = max(at_vertex, toward_vertex) if abs(at_vertex - toward_vertex) == 1 \
            else len(vs)
        new_vs = vs[:pos] + [sub] + vs[pos:]
        g2 = _mk(new_vs, comp.closed)
        mv = ReductionMove(
            "MaxRunCollapse", at_vertex,
            {"substitute": True, "edge": edge_idx, "rotation": offset},
            None, g2,
        )
        return g2, mv

    # left flank
    left_flank = (comp.closed or k1 > 0)
    if left_flank:
        cur, mv = insert_substitute(cur, k1 - 1, k1, k1 - 1)
        moves.append(mv)
        k1 += 1
        k2 += 1  # indices shifted by the insertion
    # right flank
    comp2 = _single(cur)
    n2 = len(comp2.vertices)
    right_flank = (comp2.closed or k2 < n2 - 2)
    if right_flank:
        cur, mv = insert_substitute(cur, k2 + 1, k2 + 1, (k2 + 2) % n2)
        moves.append(mv)

    # now collapse interior vertices of the run, innermost-first,
    # using the triangulation of the run's subchain to pick empty wedges
    while True:
        comp3 = _single(cur)
        exps3 = component_edge_exponents(comp3)
        run_edges = _leftmost_run(exps3, alpha)
        if len(run_edges) <= 1:
            break
        a, b = run_edges[0], run_edges[-1]
        sub_vs = list(range(a, b + 2))
        center = _subchain_center(cur, sub_vs)
        cur, mvs = triangle_collapse(cur, center)
        for m in mvs:
            m.kind = "MaxRunCollapse"
        moves.extend(mvs)
    return cur, moves


def _leftmost_run(exps: Sequence[Fraction], alpha: Fraction) -> List[int]:
    run: List[int] = []
    for e, x in enumerate(exps):
        if x == alpha:
            if run and e != run[-1] + 1:
                break
            run.append(e)
        elif run:
            break
    return run


def _subchain_center(g: PolygonalGerm, sub_vs: List[int]) -> int:
    """Reducible interior vertex of a subchain, via its own constrained
    triangulation at the certified t (fallback: middle vertex)."""
    comp = _single(g)
    if len(sub_vs) == 3:
        return sub_vs[1]
    for t in g.t_grid(6):
        link = plane_link(g, t, check=False)
        pts_all = link.components[0][0]
        pts = [(Fraction(pts_all[v][0]), Fraction(pts_all[v][1])) for v in sub_vs]
        try:
            tri = chain_hull_triangulation(pts, closed=False)
            _, center = find_double_highlighted_triangle(tri)
        except Exception:
            continue
        if 0 < center < len(sub_vs) - 1:
            return sub_vs[center]
    return sub_vs[len(sub_vs) // 2]


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _find_pi_vertex(comp: Component) -> Optional[int]:
    vs = comp.vertices
    n = len(vs)
    idxs = range(n) if comp.closed else range(1, n - 1)
    for i in idxs:
        if limit_angle(vs[(i - 1) % n], vs[i], vs[(i + 1) % n]) == math.pi:
            return i
    return None


def classify_connected(
    g: PolygonalGerm,
    max_moves: int = 400,
    skip_lne_check: bool = False,
) -> Tuple[CanonicalForm, ReductionTrace]:
    comp = _single(g)
    if not skip_lne_check:
        verdict = is_lne(g)
        if verdict.status == "NotLNE":
            raise NotLNEInput(f"germ is not LNE: {verdict.witness}")

    moves: List[ReductionMove] = []
    cur = g
    digest = write_germ(g)

    while len(moves) < max_moves:
        comp = _single(cur)
        vs = comp.vertices
        n = len(vs)
        if comp.closed and n == 3:
            break
        if not comp.closed and n == 2:
            break

        pi_vertex = _find_pi_vertex(comp)
        if pi_vertex is not None:
            cur, mv = remove_collinear(cur, pi_vertex)
            moves.append(mv)
            continue

        exps = component_edge_exponents(comp)
        alpha = max(exps)
        if min(exps) == alpha:
            # Case 1: all edges share the max tord
            if _collinear_triples(comp):
                cur, mvs = perturb_to_nondegenerate(cur)
                moves.extend(mvs)
                continue
            center = _triangulation_center(cur)
            cur, mvs = triangle_collapse(cur, center)
            moves.extend(mvs)
            continue

        if comp.closed and exps[0] == alpha and exps[-1] == alpha:
            # cyclically wrapped run: scan from just after a non-alpha edge
            start = next(e for e, x in enumerate(exps) if x != alpha)
            run = []
            m = len(exps)
            for d in range(1, m + 1):
                e = (start + d) % m
                if exps[e] == alpha:
                    run.append(e)
                elif run:
                    break
        else:
            run = _leftmost_run(exps, alpha)
        k1, k2 = run[0], run[-1]
        if len(run) == 1:
            # single max edge: drop one of its endpoints (the side whose
            # far edge has the smaller tord keeps the chain condition)
            u, v = k1, (k1 + 1) % n
            prev_e = exps[(k1 - 1) % len(exps)] if (comp.closed or k1 > 0) else None
            next_e = exps[(k1 + 1) % len(exps)] if (comp.closed or k1 + 1 < len(exps)) else None
            if next_e is None or (prev_e is not None and prev_e > next_e):
                target = u
            else:
                target = v
            cur, mv = drop_vertex(cur, target, _require_strict=False)
            moves.append(mv)
            continue
        cur, mvs = collapse_equal_run(cur)
        moves.extend(mvs)

    comp = _single(cur)
    if len(moves) >= max_moves and not (
        (comp.closed and len(comp.vertices) == 3)
        or (not comp.closed and len(comp.vertices) == 2)
    ):
        raise PipelineStuck("move budget exhausted before reaching final form")

    if comp.closed:
        beta = min(component_edge_exponents(comp))
        beta_circ = circumradius_exponent(comp)
        if beta_circ != beta:
            raise PipelineStuck(
                f"circumradius exponent {beta_circ} disagrees with beta {beta}"
            )
        form = CanonicalForm("Horn", beta, "cone" if beta == 1 else "")
    else:
        alpha = tord(comp.vertices[0], comp.vertices[-1]).exponent
        form = CanonicalForm("HolderTriangle", alpha)
    trace = ReductionTrace(digest, moves, cur, form)
    return form, trace


def circumradius_exponent(comp: Component) -> Fraction:
    """Leading exponent of the circumradius R = xyz / 4S of the link
    triangle, computed exactly from the squared side-length series."""
    vs = comp.vertices
    assert comp.closed and len(vs) == 3
    def n2(a: ArcGerm, b: ArcGerm) -> PuiseuxSeries:
        dx, dy = a.x - b.x, a.y - b.y
        return dx * dx + dy * dy

    x2 = n2(vs[0], vs[1])
    y2 = n2(vs[1], vs[2])
    z2 = n2(vs[2], vs[0])
    s16 = (
        (x2 * y2 + y2 * z2 + z2 * x2).scale(2)
        - x2 * x2 - y2 * y2 - z2 * z2
    )  # = 16 S^2 by Heron in squared form
    if s16.is_zero():
        raise PipelineStuck("degenerate final triangle (zero area series)")
    e_r2 = (
        x2.leading().exponent
        + y2.leading().exponent
        + z2.leading().exponent
        - s16.leading().exponent
    )
    return e_r2 / 2


# ---------------------------------------------------------------------------
# Move-invariance helpers (used by the verification suite)
# ---------------------------------------------------------------------------


def germ_invariants(g: PolygonalGerm) -> dict:
    comp = g.single_component()
    exps = component_edge_exponents(comp)
    return {
        "closed": comp.closed,
        "min_edge_exponent": min(exps),
        "lne": is_lne(g).status,
    }


def format_trace(trace: ReductionTrace) -> str:
    lines = ["reduction trace", f"moves {len(trace.moves)}"]
    for k, mv in enumerate(trace.moves):
        lines.append(f"move {k}: {mv.kind} vertex={mv.vertex}")
        for key in sorted(mv.params):
            lines.append(f"  {key} = {mv.params[key]}")
        if mv.certificate is not None:
            lines.append(
                f"  certificate: {mv.certificate.verdict}"
                f" ({len(mv.certificate.samples)} samples)"
            )
    if trace.form is not None:
        lines.append(f"final: {trace.form}")
    return "\n".join(lines) + "\n"
