"""Seeded random germ generators for stress testing.

Every generator returns exact rational data (vertices are Puiseux series
over Q) together with the invariants the pipeline is expected to
reproduce, so runs are reproducible and self-checking.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .germ import ArcGerm, PolygonalGerm, arc, make_polygonal_germ
from .metric import tord
from .puiseux import PuiseuxSeries

BETAS = (Fraction(1), Fraction(3, 2), Fraction(2))
DELTAS = (Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass
class FuzzCase:
    germ: PolygonalGerm
    kind: str  # closed | closed-collinear | closed-cluster | open | pinch
    expected_form: str  # Horn | HolderTriangle
    expected_exponent: Fraction
    seed_tag: str


def _rational_circle_points(rng: random.Random, n: int, denom: int = 64) -> List[Tuple[Fraction, Fraction]]:
    """n distinct points in convex position with small rational coordinates."""
    for _ in range(200):
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        # reject clustered angles: they tend to rationalize onto a line
        if min(
            (angles[(i + 1) % n] - angles[i]) % (2 * math.pi) for i in range(n)
        ) < 0.25:
            continue
        pts = [
            (
                Fraction(round(denom * math.cos(a)), denom),
                Fraction(round(denom * math.sin(a)), denom),
            )
            for a in angles
        ]
        if len(set(pts)) != n:
            continue
        if _convex_position(pts) and not _has_collinear_triple(pts):
            return pts
    raise RuntimeError("failed to sample a convex rational polygon")


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _convex_position(pts) -> bool:
    n = len(pts)
    signs = set()
    for i in range(n):
        c = _cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n])
        if c == 0:
            return False
        signs.add(c > 0)
    return len(signs) == 1


def _has_collinear_triple(pts) -> bool:
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _cross(pts[i], pts[j], pts[k]) == 0:
                    return True
    return False


def _scaled_arc(p: Tuple[Fraction, Fraction], beta: Fraction) -> ArcGerm:
    return ArcGerm(
        PuiseuxSeries.monomial(beta, p[0]),
        PuiseuxSeries.monomial(beta, p[1]),
    )


def random_closed_lne(rng: random.Random, n_min: int = 3, n_max: int = 8,
                      variant: Optional[str] = None) -> FuzzCase:
    """Random LNE closed germ whose canonical form is Horn(beta).

    variant None: plain convex polygon scaled by t^beta.
    variant "collinear": one extra vertex exactly on an edge.
    variant "cluster": one vertex split into a pair at distance ~t^alpha,
    alpha > beta, producing mixed edge exponents.
    """
    n = rng.randint(n_min, n_max)
    beta = rng.choice(BETAS)
    pts = _rational_circle_points(rng, n)
    kind = "closed"
    vertices = [_scaled_arc(p, beta) for p in pts]

    if variant == "collinear":
        i = rng.randrange(n)
        a, b = pts[i], pts[(i + 1) % n]
        s = Fraction(rng.randint(1, 3), 4)
        mid = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
        vertices = vertices[: i + 1] + [_scaled_arc(mid, beta)] + vertices[i + 1:]
        kind = "closed-collinear"
    elif variant == "cluster":
        i = rng.randrange(n)
        alpha = beta + rng.choice((Fraction(1, 2), Fraction(1)))
        a, b = pts[i], pts[(i + 1) % n]
        # shift the clone slightly toward the next vertex at a deeper scale
        c = Fraction(1, 4)
        clone = ArcGerm(
            vertices[i].x + PuiseuxSeries.monomial(alpha, c * (b[0] - a[0])),
            vertices[i].y + PuiseuxSeries.monomial(alpha, c * (b[1] - a[1])),
        )
        vertices = vertices[: i + 1] + [clone] + vertices[i + 1:]
        kind = "closed-cluster"

    g = make_polygonal_germ([(vertices, True)])
    return FuzzCase(g, kind, "Horn", beta, f"{kind}/n={n}/beta={beta}")


def random_open_lne(rng: random.Random, n_min: int = 2, n_max: int = 7) -> FuzzCase:
    """Random LNE open chain: x strictly increasing with rational step
    exponents and bounded slopes, so the canonical exponent is the tord
    of the endpoints, i.e. the smallest step exponent."""
    n = rng.randint(n_min, n_max)
    exps = [rng.choice(BETAS) for _ in range(n - 1)]
    x = PuiseuxSeries.zero()
    y = PuiseuxSeries.zero()
    vertices = [ArcGerm(x, y)]
    for e in exps:
        cx = Fraction(rng.randint(1, 4), 2)
        cy = Fraction(rng.randint(-2, 2), 4) * cx
        x = x + PuiseuxSeries.monomial(e, cx)
        y = y + PuiseuxSeries.monomial(e, cy)
        vertices.append(ArcGerm(x, y))
    g = make_polygonal_germ([(vertices, False)])
    alpha = tord(vertices[0], vertices[-1]).exponent
    assert alpha == min(exps)
    return FuzzCase(g, "open", "HolderTriangle", alpha,
                    f"open/n={n}/alpha={alpha}")


def random_pinch_not_lne(rng: random.Random) -> Tuple[FuzzCase, Fraction]:
    """Open 3-chain pinched at the middle vertex: the two outer vertices
    are t^(1+delta)-close in the outer metric but only t-close along the
    chain, so the germ is not LNE.  Returns (case, delta)."""
    delta = rng.choice(DELTAS)
    c = Fraction(rng.randint(1, 3), 2)
    g1 = ArcGerm(PuiseuxSeries.monomial(1, 1), PuiseuxSeries.monomial(1 + delta, c))
    g2 = ArcGerm(PuiseuxSeries.zero(), PuiseuxSeries.zero())
    g3 = ArcGerm(PuiseuxSeries.monomial(1, 1), PuiseuxSeries.monomial(1 + delta, -c))
    g = make_polygonal_germ([((g1, g2, g3), False)])
    case = FuzzCase(g, "pinch", "HolderTriangle", Fraction(1 + delta),
                    f"pinch/delta={delta}")
    return case, delta


def sample_cases(seed: int, n_closed: int = 0, n_open: int = 0,
                 n_pinch: int = 0) -> List[FuzzCase]:
    rng = random.Random(seed)
    out: List[FuzzCase] = []
    variants = [None, None, "collinear", "cluster"]
    for i in range(n_closed):
        out.append(random_closed_lne(rng, variant=variants[i % len(variants)]))
    for _ in range(n_open):
        out.append(random_open_lne(rng))
    for _ in range(n_pinch):
        out.append(random_pinch_not_lne(rng)[0])
    return out
