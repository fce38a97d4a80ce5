"""
Real functions with certified interval extensions.

`enclose(region)` returns an interval containing f(x) for every x in the region, and the
enclosures shrink to points with the region. Regions are closed rational intervals on
[0,1] and R, and cylinders (finite binary words) on Cantor space.

    polynomial    Horner's scheme over exact rationals (sympy Poly over QQ)
    triangle      Δ(x) = 1 − |x| on [−1, 1], 0 elsewhere; exact image
    bump          e^{−1/(1−x²)} on (−1, 1), 0 elsewhere; mpmath interval exponentials
    binary        p ↦ Σ p(i) 2^{−i−1} on Cantor space
"""
from typing import Sequence

import sympy
from sympy import Poly

from baire.words import Word
from metric.cms import X_SYMBOL, poly_interval, poly_point, to_fraction
from metric.rationals import Q, Interval, dyadic, exp_enclosure, power_of_two, to_q


class IntervalFn:
    """구간 확장을 가진 실함수"""

    label: str = "f"
    domain: str = "unit"

    def enclose(self, region) -> Interval:
        raise NotImplementedError

    def point(self, x) -> Interval:
        if self.domain == "cantor":
            return self.enclose(tuple(x))
        return self.enclose(Interval.point(to_q(x)))

    def __add__(self, other: "IntervalFn") -> "IntervalFn":
        return SumFn([self, other])

    def rescaled(self, scale: Q, offset: Q, factor: Q = Q(1), label: str | None = None) -> "IntervalFn":
        """x ↦ factor · f(scale·x + offset)"""
        return RescaledFn(self, scale, offset, factor, label)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"


class PolynomialFn(IntervalFn):
    def __init__(self, poly: Poly, label: str | None = None, domain: str = "unit"):
        self.poly = poly
        self.label = label or str(poly.as_expr())
        self.domain = domain

    def enclose(self, region: Interval) -> Interval:
        if region.is_point:
            return Interval.point(poly_point(self.poly, region.lo))
        return poly_interval(self.poly, region)

    def derivative(self) -> "PolynomialFn":
        return PolynomialFn(self.poly.diff(X_SYMBOL), label=f"({self.label})′", domain=self.domain)

    def coefficients(self) -> list[Q]:
        """낮은 차수부터"""
        return [to_fraction(c) for c in reversed(self.poly.all_coeffs())]


def polynomial(*coefficients: int | Q, label: str | None = None, domain: str = "unit") -> PolynomialFn:
    """계수는 낮은 차수부터: polynomial(0, 2) = 2x"""
    values = [sympy.Rational(to_q(c).numerator, to_q(c).denominator) for c in coefficients] or [sympy.Integer(0)]
    return PolynomialFn(Poly(list(reversed(values)), X_SYMBOL, domain=sympy.QQ), label=label, domain=domain)


def identity(domain: str = "unit") -> PolynomialFn:
    return polynomial(0, 1, label="x", domain=domain)


def _triangle_at(x: Q) -> Q:
    return max(Q(0), 1 - abs(x))


class TriangleFn(IntervalFn):
    label = "Δ"

    def __init__(self, domain: str = "R"):
        self.domain = domain

    def enclose(self, region: Interval) -> Interval:
        values = [_triangle_at(region.lo), _triangle_at(region.hi)]
        if region.contains(0):
            values.append(Q(1))
        return Interval(min(values), max(values))


class BumpFn(IntervalFn):
    """e^{−1/(1−x²)} 를 (−1, 1)에서, 밖에서는 0"""

    label = "bump"

    def __init__(self, domain: str = "R"):
        self.domain = domain

    def enclose(self, region: Interval) -> Interval:
        inner = region.intersection(Interval(-1, 1))
        if inner is None:
            return Interval.point(0)
        u = 1 - inner**2
        touches_edge = u.lo <= 0 or not Interval(-1, 1).interior_contains(region)
        if u.hi <= 0:
            return Interval.point(0)
        top = exp_enclosure(Interval.point(-1 / u.hi)).hi
        if touches_edge:
            return Interval(0, top)
        bottom = exp_enclosure(Interval.point(-1 / u.lo)).lo
        return Interval(bottom, top)


class RescaledFn(IntervalFn):
    def __init__(self, base: IntervalFn, scale: Q, offset: Q, factor: Q, label: str | None = None):
        self.base = base
        self.scale = to_q(scale)
        self.offset = to_q(offset)
        self.factor = to_q(factor)
        self.label = label or f"{self.factor}·{base.label}({self.scale}x+{self.offset})"
        self.domain = base.domain

    def enclose(self, region: Interval) -> Interval:
        return self.base.enclose(region * self.scale + self.offset) * self.factor


class SumFn(IntervalFn):
    def __init__(self, parts: Sequence[IntervalFn], label: str | None = None):
        self.parts = list(parts)
        self.label = label or " + ".join(p.label for p in self.parts) or "0"
        self.domain = self.parts[0].domain if self.parts else "unit"

    def enclose(self, region: Interval) -> Interval:
        total = Interval.point(0)
        for part in self.parts:
            total = total + part.enclose(region)
        return total


class BinaryValueFn(IntervalFn):
    """2^N → [0,1], p ↦ Σ p(i) 2^{−i−1}; 원기둥 w의 상은 [v(w), v(w) + 2^{−|w|}]"""

    label = "binary"
    domain = "cantor"

    def enclose(self, region: Word) -> Interval:
        value = sum((dyadic(1, i + 1) for i, bit in enumerate(region) if bit), Q(0))
        return Interval(value, value + power_of_two(len(region)))

    def point(self, x: Word) -> Interval:
        value = sum((dyadic(1, i + 1) for i, bit in enumerate(x) if bit), Q(0))
        return Interval.point(value)


# ──────────────────────────────────────────
# 삼각형과 혹 조각
# ──────────────────────────────────────────


def triangle_piece(n: int, k: int, weight: Q | None = None) -> IntervalFn:
    """weight · Δ(2^{n+k+2}(x − 2^{−n−1}) − 1), I_{n,k} = (2^{−n−1}, 2^{−n−1} + 2^{−n−k−1}) 밖에서 0"""
    scale = Q(1 << (n + k + 2))
    offset = -scale * power_of_two(n + 1) - 1
    weight = power_of_two(n) if weight is None else weight
    return TriangleFn("unit").rescaled(scale, offset, weight, label=f"2^-{n}Δ[{n},{k}]")


def bump_piece(n: int, k: int) -> IntervalFn:
    """Δ(2^{k+2}(x − n) − 1), I_{n,k} = (n, n + 2^{−k−1}) 밖에서 0"""
    scale = Q(1 << (k + 2))
    return BumpFn().rescaled(scale, -scale * n - 1, label=f"bump[{n},{k}]")


def piece_support(n: int, k: int, kind: str = "triangle") -> Interval:
    if kind == "triangle":
        return Interval(power_of_two(n + 1), power_of_two(n + 1) + power_of_two(n + k + 1))
    return Interval(n, n + power_of_two(k + 1))


def gallery_function(name: str) -> IntervalFn:
    """`identity`, `double`, `square`, `cube`, `triangle`, `bump`, `binary`"""
    table = {
        "identity": lambda: identity(),
        "double": lambda: polynomial(0, 2, label="2x"),
        "square": lambda: polynomial(0, 0, 1, label="x²"),
        "cube": lambda: polynomial(0, 0, 0, 1, label="x³"),
        "triangle": lambda: TriangleFn("unit").rescaled(2, -1, label="Δ(2x−1)"),
        "bump": lambda: BumpFn(),
        "binary": lambda: BinaryValueFn(),
    }
    if name not in table:
        raise KeyError(f"unknown gallery function {name!r}; known: {', '.join(table)}")
    return table[name]()
