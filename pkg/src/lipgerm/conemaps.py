"""Explicit ambient maps on the cone C_a^3 and a sampled bi-Lipschitz
verification harness.

The cone C_a^3 is {x^2 + y^2 <= (a t)^2, t >= 0}.  At each height t the
disk decomposes into an inner disk D(t) of radius b t (b = sqrt(a)) and
shells Gamma_lambda(t) of radius lambda b t + (1 - lambda) a t; the maps
below act fully on D, taper linearly across the shells, and fix the cone
boundary pointwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .germ import ArcGerm, SynchronizedFamily
from .puiseux import PuiseuxSeries

Point3 = Tuple[float, float, float]


class SouthPole(ValueError):
    pass


class OutsideDomain(ValueError):
    pass


class ConeTooNarrow(ValueError):
    pass


class NonPositiveLeading(ValueError):
    pass


class SeparationViolated(ValueError):
    pass


@dataclass(frozen=True)
class ConeModel:
    a: Fraction  # opening; inner radius factor is b = sqrt(a)

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("cone opening must be positive")

    @property
    def b(self) -> float:
        return math.sqrt(float(self.a))

    def contains(self, p: Point3) -> bool:
        x, y, t = p
        return t > 0 and x * x + y * y <= (float(self.a) * t) ** 2 * (1 + 1e-12)


def enlarged_opening(a0: Fraction, gamma: ArcGerm) -> Fraction:
    """Opening large enough for the shell construction around gamma:
    max(a0^2, 4 (sup ||gamma(t)|| / t)^2), so b = sqrt(a) >= a0 and the
    arc stays well inside the inner disk."""
    bound = sum(abs(c) for _, c in gamma.x.terms) + sum(abs(c) for _, c in gamma.y.terms)
    a = max(a0 * a0, 4 * bound * bound, Fraction(4))
    return a


# ---------------------------------------------------------------------------
# Stereographic reduction
# ---------------------------------------------------------------------------


def stereographic(p: Point3, R: float) -> Point3:
    """Projection from the south pole of the R-sphere onto the plane
    {x3 = R}: lambda = 2R / (x3 + R)."""
    x1, x2, x3 = p
    if x3 + R <= 0:
        raise SouthPole("projection undefined at the south pole")
    lam = 2 * R / (x3 + R)
    return (lam * x1, lam * x2, R)


def stereographic_inverse(q: Point3, R: float) -> Point3:
    x1, x2, _ = q
    lam = 4 * R * R / (x1 * x1 + x2 * x2 + 4 * R * R)
    return (lam * x1, lam * x2, (2 * lam - 1) * R)


def cone_opening_image(a: float) -> float:
    """Opening a' of the plane cone corresponding to the sphere cone of
    opening a under the stereographic model: a' = 4a / (a^2 + 4)."""
    return 4 * a / (a * a + 4)


# ---------------------------------------------------------------------------
# Shell parameter helpers
# ---------------------------------------------------------------------------


def _shell_lambda(r: float, a: float, b: float, t: float) -> float:
    """lambda with r = lambda b t + (1 - lambda) a t, clamped to [0, 1]."""
    lam = (a * t - r) / ((a - b) * t)
    return min(1.0, max(0.0, lam))


# ---------------------------------------------------------------------------
# Arc translation
# ---------------------------------------------------------------------------


def translate_along_arc(
    p: Point3,
    gamma: ArcGerm,
    model: ConeModel,
    direction: str = "forward",
) -> Point3:
    """Subtract (forward) or add (inverse) the planar part of gamma,
    fully on the inner disk D(t), tapered on the shells, identity on
    the cone boundary."""
    x, y, t = p
    if t <= 0:
        raise OutsideDomain("t must be positive")
    a = float(model.a)
    b = model.b
    if b >= a:
        raise ConeTooNarrow("need b = sqrt(a) < a, i.e. a > 1")
    # exact boundary invariance when the inputs are rational
    if all(isinstance(c, Fraction) for c in (x, y, t)):
        if x * x + y * y == model.a * model.a * t * t:
            return (x, y, t)
    gx, gy = gamma.eval(t)
    if math.hypot(gx, gy) >= b * t:
        raise ConeTooNarrow("arc leaves the inner disk at t = %g" % t)

    r2 = x * x + y * y
    if r2 > (a * t) ** 2 * (1 + 1e-9):
        raise OutsideDomain("point outside the cone")

    if direction == "forward":
        r = math.sqrt(r2)
        if r2 <= (b * t) ** 2:
            return (x - gx, y - gy, t)
        if r2 >= (a * t) ** 2:
            return (x, y, t)
        lam = _shell_lambda(r, a, b, t)
        return (x - lam * gx, y - lam * gy, t)
    elif direction == "inverse":
        # image shells: a point came from shell lambda iff
        # ||q + lambda g|| = lambda b t + (1 - lambda) a t
        dx, dy = x, y
        if math.hypot(dx + gx, dy + gy) <= b * t:
            return (x + gx, y + gy, t)
        if r2 >= (a * t) ** 2 * (1 - 1e-15):
            return (x, y, t)
        # quadratic in lambda:
        # ||q||^2 + 2 lam q.g + lam^2 ||g||^2 = (a t - lam (a - b) t)^2
        A = gx * gx + gy * gy - ((a - b) * t) ** 2
        B = 2 * (x * gx + y * gy) + 2 * a * (a - b) * t * t
        C = r2 - (a * t) ** 2
        lam = _solve_lambda(A, B, C)
        if lam is None:
            raise OutsideDomain("no valid shell parameter for inverse translation")
        return (x + lam * gx, y + lam * gy, t)
    raise ValueError(f"unknown direction {direction!r}")


def _solve_lambda(A: float, B: float, C: float) -> Optional[float]:
    """Root of A lam^2 + B lam + C = 0 in [0, 1]; bisection fallback."""
    eps = 1e-12
    if abs(A) < 1e-300:
        if B == 0:
            return None
        lam = -C / B
        return lam if -eps <= lam <= 1 + eps else None
    disc = B * B - 4 * A * C
    if disc >= 0:
        sq = math.sqrt(disc)
        for lam in ((-B + sq) / (2 * A), (-B - sq) / (2 * A)):
            if -eps <= lam <= 1 + eps:
                return min(1.0, max(0.0, lam))

    def f(lam: float) -> float:
        return A * lam * lam + B * lam + C

    lo, hi = 0.0, 1.0
    if f(lo) == 0:
        return lo
    if f(hi) == 0:
        return hi
    if f(lo) * f(hi) > 0:
        return None
    for _ in range(80):
        mid = (lo + hi) / 2
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# Function dilatation
# ---------------------------------------------------------------------------


def dilate_by_function(
    p: Point3,
    f: PuiseuxSeries,
    model: ConeModel,
    direction: str = "forward",
) -> Point3:
    """Multiply the planar part by f(t) on D(t), taper on the shells,
    fix the cone boundary; the inverse divides."""
    lt = f.leading()
    if lt.is_zero or lt.exponent > 0 or lt.coefficient <= 0:
        raise NonPositiveLeading("dilatation needs f(t) = c0 + o(1), c0 > 0")
    x, y, t = p
    if t <= 0:
        raise OutsideDomain("t must be positive")
    if all(isinstance(c, Fraction) for c in (x, y, t)):
        if x * x + y * y == model.a * model.a * t * t:
            return (x, y, t)
    a = float(model.a)
    b = model.b
    if b >= a:
        raise ConeTooNarrow("need b = sqrt(a) < a, i.e. a > 1")
    ft = f.eval(t)
    if ft <= 0 or ft * b >= a:
        raise ConeTooNarrow("f(t) b must stay below a on the range")
    r2 = x * x + y * y
    r = math.sqrt(r2)
    if r > a * t * (1 + 1e-9):
        raise OutsideDomain("point outside the cone")

    if direction == "forward":
        if r <= b * t:
            return (ft * x, ft * y, t)
        if r >= a * t:
            return (x, y, t)
        lam = _shell_lambda(r, a, b, t)
        factor = (lam * ft * b + (1 - lam) * a) / (lam * b + (1 - lam) * a)
        return (factor * x, factor * y, t)
    elif direction == "inverse":
        if r <= ft * b * t:
            return (x / ft, y / ft, t)
        if r >= a * t:
            return (x, y, t)
        # the image of shell lambda has radius (lam f b + (1-lam) a) t
        lam = (a * t - r) / ((a - ft * b) * t)
        lam = min(1.0, max(0.0, lam))
        factor = (lam * ft * b + (1 - lam) * a) / (lam * b + (1 - lam) * a)
        return (x / factor, y / factor, t)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Curvilinear-rectangle isotopy
# ---------------------------------------------------------------------------


@dataclass
class IsotopyFamilies:
    """Four synchronized piecewise-linear families f >= a, b >= g on a
    moving interval, with separation constant M controlling how far a and
    b stay from the envelope boundaries."""

    f: SynchronizedFamily
    g: SynchronizedFamily
    a: SynchronizedFamily
    b: SynchronizedFamily
    M: float

    def interval(self, t: float) -> Tuple[float, float]:
        return self.f.x_interval(t)

    def ratios(self, u: float, t: float) -> Tuple[float, float, float]:
        x0, x1 = self.interval(t)
        x = x0 + u * (x1 - x0)
        fv = self.f.value(x, t)
        gv = self.g.value(x, t)
        av = self.a.value(x, t)
        bv = self.b.value(x, t)
        h = fv - gv
        if h <= 0:
            raise SeparationViolated("f <= g at x = %g, t = %g" % (x, t))
        return ((av - gv) / h, (bv - gv) / h, h)


def rect_isotopy(fam: IsotopyFamilies, u: float, v: float, t: float,
                 tau: float) -> Point3:
    """Point gamma_{u, psi(v)}(t) of the isotopy: psi is the two-piece
    linear reparametrization of [0,1] pinned at 0 and 1 sending
    alpha_t(u) to (1 - tau) alpha_t(u) + tau beta_t(u)."""
    alpha, beta, _ = fam.ratios(u, t)
    for r in (alpha, beta):
        if not (1.0 / fam.M - 1e-12 <= r <= 1 - 1.0 / fam.M + 1e-12):
            raise SeparationViolated(
                "ratio %g outside [1/M, 1 - 1/M] at u=%g t=%g" % (r, u, t)
            )
    btau = (1 - tau) * alpha + tau * beta
    if v <= alpha:
        w = (btau / alpha) * v if alpha > 0 else v
    else:
        w = 1 - ((1 - btau) / (1 - alpha)) * (1 - v)
    x0, x1 = fam.interval(t)
    x = x0 + u * (x1 - x0)
    gv = fam.g.value(x, t)
    fv = fam.f.value(x, t)
    return (x, gv + w * (fv - gv), t)


# ---------------------------------------------------------------------------
# Sampled bi-Lipschitz verification
# ---------------------------------------------------------------------------


@dataclass
class LipschitzReport:
    per_t: List[Tuple[float, float, float]]  # (t, min ratio, max ratio)
    verdict: str  # Bounded | Unbounded | Inconclusive
    global_min: float
    global_max: float
    samples: int

    def bound(self) -> float:
        return max(self.global_max, 1.0 / self.global_min)


def verify_bilipschitz(
    transform: Callable[[Point3], Point3],
    sampler: Callable[[float, random.Random], Point3],
    t_grid: Sequence[float],
    pairs_per_t: int = 200,
    seed: int = 0,
) -> LipschitzReport:
    """Sample point pairs at scales h in {t 1e-2, t 1e-3} and record the
    distortion ||F(p) - F(q)|| / ||p - q||."""
    rng = random.Random(seed)
    per_t = []
    gmin, gmax = math.inf, -math.inf
    count = 0
    for t in t_grid:
        lo, hi = math.inf, -math.inf
        for _ in range(pairs_per_t):
            p = sampler(t, rng)
            h = t * (1e-2 if rng.random() < 0.5 else 1e-3)
            ang = rng.random() * 2 * math.pi
            q = (p[0] + h * math.cos(ang), p[1] + h * math.sin(ang), p[2])
            try:
                fp = transform(p)
                fq = transform(q)
            except (OutsideDomain, ConeTooNarrow):
                continue
            d0 = math.dist(p, q)
            d1 = math.dist(fp, fq)
            if d0 == 0 or d1 == 0:
                continue
            r = d1 / d0
            lo, hi = min(lo, r), max(hi, r)
            count += 1
        if math.isfinite(hi):
            per_t.append((t, lo, hi))
            gmin, gmax = min(gmin, lo), max(gmax, hi)
    if not per_t or count < 10:
        return LipschitzReport(per_t, "Inconclusive", gmin, gmax, count)
    maxes = [hi for _, _, hi in per_t]
    mins = [lo for _, lo, _ in per_t]
    stable = max(maxes) <= 10 * min(maxes) and max(mins) <= 10 * min(mins)
    verdict = "Bounded" if stable else "Unbounded"
    return LipschitzReport(per_t, verdict, gmin, gmax, count)
