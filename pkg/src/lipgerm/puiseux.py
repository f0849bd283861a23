"""Exact truncated Puiseux series over the rationals.

A series is a finite, exponent-sorted list of ``(exponent, coefficient)``
pairs with rational entries, trusted modulo ``o(t^K)`` for a rational
truncation order ``K``.  All arithmetic is exact; floating point only
enters through :meth:`PuiseuxSeries.eval`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Rational = Union[int, Fraction]

DEFAULT_TRUNCATION = Fraction(12)

# Verdicts of compare_eventual.
LESS = "Less"
EQUAL = "Equal"
GREATER = "Greater"
INCONCLUSIVE = "Inconclusive"


class BothZero(ValueError):
    """Raised by norm2_leading when both coordinate differences vanish."""


@dataclass(frozen=True)
class LeadingTerm:
    """Leading term carrier; ``is_zero`` marks the zero series.

    When ``needs_sqrt`` is set the numeric value of the coefficient is
    ``sqrt(coefficient)`` (used for distance coefficients coming from
    squared norms).
    """

    exponent: Fraction
    coefficient: Fraction
    needs_sqrt: bool = False
    is_zero: bool = False

    @staticmethod
    def zero() -> "LeadingTerm":
        return LeadingTerm(Fraction(0), Fraction(0), is_zero=True)

    def numeric_coefficient(self) -> float:
        if self.is_zero:
            return 0.0
        c = float(self.coefficient)
        return math.sqrt(c) if self.needs_sqrt else c


def _q(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PuiseuxSeries:
    """Immutable truncated Puiseux series."""

    __slots__ = ("terms", "truncation")

    terms: Tuple[Tuple[Fraction, Fraction], ...]
    truncation: Fraction

    def __init__(
        self,
        terms: Iterable[Tuple[Rational, Rational]] = (),
        truncation: Rational = DEFAULT_TRUNCATION,
    ):
        K = _q(truncation)
        merged: dict[Fraction, Fraction] = {}
        for e, c in terms:
            e = _q(e)
            c = _q(c)
            if c == 0 or e >= K:
                continue
            merged[e] = merged.get(e, Fraction(0)) + c
        clean = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "truncation", K)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(truncation: Rational = DEFAULT_TRUNCATION) -> "PuiseuxSeries":
        return PuiseuxSeries((), truncation)

    @staticmethod
    def monomial(
        exponent: Rational,
        coefficient: Rational = 1,
        truncation: Rational = DEFAULT_TRUNCATION,
    ) -> "PuiseuxSeries":
        return PuiseuxSeries([(exponent, coefficient)], truncation)

    @staticmethod
    def constant(c: Rational, truncation: Rational = DEFAULT_TRUNCATION) -> "PuiseuxSeries":
        return PuiseuxSeries([(0, c)], truncation)

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def leading(self) -> LeadingTerm:
        if not self.terms:
            return LeadingTerm.zero()
        e, c = self.terms[0]
        return LeadingTerm(e, c)

    def coefficient_at(self, exponent: Rational) -> Fraction:
        e = _q(exponent)
        for te, tc in self.terms:
            if te == e:
                return tc
            if te > e:
                break
        return Fraction(0)

    def ramification(self) -> int:
        """Common denominator of the stored exponents."""
        r = 1
        for e, _ in self.terms:
            r = r * e.denominator // math.gcd(r, e.denominator)
        return r

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        K = min(self.truncation, other.truncation)
        return PuiseuxSeries(list(self.terms) + list(other.terms), K)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries([(e, -c) for e, c in self.terms], self.truncation)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not self.terms or not other.terms:
            K = min(self.truncation, other.truncation)
            return PuiseuxSeries.zero(K)
        la = self.terms[0][0]
        lb = other.terms[0][0]
        K = min(self.truncation + lb, other.truncation + la)
        out = []
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = ea + eb
                if e < K:
                    out.append((e, ca * cb))
        return PuiseuxSeries(out, K)

    def scale(self, c: Rational) -> "PuiseuxSeries":
        c = _q(c)
        return PuiseuxSeries([(e, tc * c) for e, tc in self.terms], self.truncation)

    def shift(self, exponent: Rational) -> "PuiseuxSeries":
        """Multiply by the monomial ``t^exponent``."""
        d = _q(exponent)
        return PuiseuxSeries(
            [(e + d, c) for e, c in self.terms], self.truncation + d
        )

    def inverse(self) -> "PuiseuxSeries":
        """Multiplicative inverse of a series with nonzero leading term.

        Computed by the geometric-series expansion of 1/(1+u) after
        factoring out the leading monomial; exact up to the inherited
        truncation.
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of the zero series")
        e0, c0 = self.terms[0]
        # self = c0 t^e0 (1 + u), u with strictly positive exponents
        u = PuiseuxSeries(
            [(e - e0, c / c0) for e, c in self.terms[1:]],
            self.truncation - e0,
        )
        acc = PuiseuxSeries.constant(1, u.truncation)
        if u.terms:
            step = u.terms[0][0]
            n = int(math.ceil(float(u.truncation / step))) + 1
            pw = PuiseuxSeries.constant(1, u.truncation)
            for i in range(n):
                pw = pw * u
                if pw.is_zero():
                    break
                acc = acc + (pw if i % 2 == 1 else -pw)
        return acc.scale(Fraction(1, 1) / c0).shift(-e0)

    def truncate_to(self, K: Rational) -> "PuiseuxSeries":
        K = _q(K)
        return PuiseuxSeries(self.terms, min(K, self.truncation))

    # -- evaluation / comparison --------------------------------------

    def eval(self, t: float) -> float:
        if t <= 0:
            raise ValueError("eval requires t > 0")
        return sum(float(c) * float(t) ** float(e) for e, c in self.terms)

    def compare_eventual(self, other: "PuiseuxSeries") -> str:
        d = self - other
        if d.terms:
            return GREATER if d.terms[0][1] > 0 else LESS
        if self.truncation == other.truncation:
            return EQUAL
        return INCONCLUSIVE

    # -- plumbing ------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PuiseuxSeries)
            and self.terms == other.terms
            and self.truncation == other.truncation
        )

    def __hash__(self) -> int:
        return hash((self.terms, self.truncation))

    def __repr__(self) -> str:
        return f"PuiseuxSeries({format_series(self)!r})"


def add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a + b


def mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def leading(a: PuiseuxSeries) -> LeadingTerm:
    return a.leading()


def eval_at(a: PuiseuxSeries, t: float) -> float:
    return a.eval(t)


def compare_eventual(a: PuiseuxSeries, b: PuiseuxSeries) -> str:
    return a.compare_eventual(b)


def norm2_leading(dx: PuiseuxSeries, dy: PuiseuxSeries) -> LeadingTerm:
    """Leading term of dx^2 + dy^2.

    The tangency exponent of the underlying distance is ``exponent/2``
    and the distance coefficient is ``sqrt(coefficient)``, carried
    symbolically via the ``needs_sqrt`` flag.
    """
    if dx.is_zero() and dy.is_zero():
        raise BothZero("both coordinate differences are zero")
    s = dx * dx + dy * dy
    lt = s.leading()
    if lt.is_zero:
        # Cancellation cannot happen in a sum of squares of nonzero series.
        raise BothZero("squared norm vanished below truncation")
    return LeadingTerm(lt.exponent, lt.coefficient, needs_sqrt=True)


# ---------------------------------------------------------------------------
# Text form: "c1*t^{p1/q1} + c2*t^{p2/q2} + O(t^{K})"
# ---------------------------------------------------------------------------

_O_RE = re.compile(r"O\(\s*t\^\{?(-?\d+(?:/\d+)?)\}?\s*\)")


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return f"t^{e.numerator}"
    return "t^{%d/%d}" % (e.numerator, e.denominator)


def format_series(a: PuiseuxSeries) -> str:
    parts = [f"{c}*{_format_exponent(e)}" for e, c in a.terms]
    if not parts:
        parts = ["0"]
    tail = "O(%s)" % _format_exponent(a.truncation)
    return " + ".join(parts) + " + " + tail


def parse_series(text: str, default_truncation: Rational = DEFAULT_TRUNCATION) -> PuiseuxSeries:
    s = text.strip()
    K = _q(default_truncation)
    m = _O_RE.search(s)
    if m:
        K = Fraction(m.group(1))
        s = s[: m.start()] + s[m.end():]
    # Make '-' an explicit term separator, then split on '+'.
    s = s.replace("-", "+-")
    terms: list[Tuple[Fraction, Fraction]] = []
    for chunk in s.split("+"):
        chunk = chunk.strip().replace(" ", "")
        if not chunk:
            continue
        if "t" not in chunk:
            terms.append((Fraction(0), Fraction(chunk)))
            continue
        coeff_part, _, exp_part = chunk.partition("t")
        coeff_part = coeff_part.rstrip("*")
        if coeff_part in ("", "-"):
            coeff = Fraction(coeff_part + "1")
        else:
            coeff = Fraction(coeff_part)
        exp_part = exp_part.lstrip("^").strip("{}")
        exponent = Fraction(exp_part) if exp_part else Fraction(1)
        terms.append((exponent, coeff))
    return PuiseuxSeries(terms, K)


def fit_slope(ts: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log2(value) against log2(t).

    The standard numeric oracle for growth exponents: for value ~ c t^e
    the fitted slope converges to e as the grid refines.
    """
    pts = [(math.log2(t), math.log2(v)) for t, v in zip(ts, values) if v > 0]
    if len(pts) < 2:
        return float("nan")
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    denom = n * sxx - sx * sx
    if denom == 0:
        return float("nan")
    return (n * sxy - sx * sy) / denom
