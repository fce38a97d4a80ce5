"""
Derivatives as limits, and lower bounds on the distance to the Mandelbrot set.

The difference quotient

    f_n(x) = (f(x + (1−x)2^{-n}) − f(x − x2^{-n})) / 2^{-n}

only samples [0,1] when x does, and f_n → f′ pointwise for differentiable f and
uniformly for continuously differentiable f. For polynomials the sequence is built
symbolically; for other functions f_n is an interval extension composed from f's.

`mandelbrot_distance_lower` certifies closed squares around c to lie outside M by
interval escape (some iterate of z ↦ z² + c leaves the disc of radius 2 for every c in
the cell) and reports the half side of the largest certified square, depth by depth.
"""
from functools import lru_cache
from typing import Any

import sympy
from sympy import Poly
from tqdm import tqdm

from baire.stream import Stream
from core.errors import ContractViolation
from core.utils import log_message
from gallery.functions import IntervalFn, PolynomialFn
from metric.cauchy import Ball
from metric.cms import REALS, UNIT, X_SYMBOL
from metric.rationals import Q, Interval, power_of_two, to_q

# 이름으로 주어진 x를 읽을 때 n에 더하는 여분의 셀 수
POINTWISE_EXTRA_CELLS = 8
# 반복 중 구간 끝점을 바깥쪽으로 맞추는 격자 2^{-ROUNDING_BITS}
ROUNDING_BITS = 48
MANDELBROT_ITERATIONS = 32
MANDELBROT_DEPTH = 6
# M ⊆ {|c| ≤ 2} 이므로 링은 |c| + 4 안에서 끝납니다.
RING_MARGIN = 4
# 이보다 넓어진 반복 구간은 포기합니다.
GIVE_UP_WIDTH = 64


# ──────────────────────────────────────────
# 차분 몫
# ──────────────────────────────────────────


class DifferenceQuotientFn(IntervalFn):
    def __init__(self, base: IntervalFn, n: int):
        if base.domain != "unit":
            raise ContractViolation(f"difference quotients are taken on [0,1], not on {base.domain}")
        self.base = base
        self.n = n
        self.h = power_of_two(n)
        self.label = f"D{n}[{base.label}]"
        self.domain = "unit"

    def enclose(self, region: Interval) -> Interval:
        right = self.base.enclose(region * (1 - self.h) + self.h)
        left = self.base.enclose(region * (1 - self.h))
        return (right - left) * (1 << self.n)


def _polynomial_quotient(f: PolynomialFn, n: int) -> PolynomialFn:
    h = sympy.Rational(1, 1 << n)
    right = f.poly.compose(Poly(X_SYMBOL * (1 - h) + h, X_SYMBOL, domain=sympy.QQ))
    left = f.poly.compose(Poly(X_SYMBOL * (1 - h), X_SYMBOL, domain=sympy.QQ))
    return PolynomialFn((right - left) * (1 << n), label=f"D{n}[{f.label}]", domain=f.domain)


def difference_quotient(f: IntervalFn, n: int) -> IntervalFn:
    if isinstance(f, PolynomialFn):
        return _polynomial_quotient(f, n)
    return DifferenceQuotientFn(f, n)


class DerivativeSequence:
    """n ↦ f_n, 계산된 항은 캐시됩니다."""

    def __init__(self, f: IntervalFn):
        self.f = f
        self._terms: dict[int, IntervalFn] = {}

    def __getitem__(self, n: int) -> IntervalFn:
        if n not in self._terms:
            self._terms[n] = difference_quotient(self.f, n)
        return self._terms[n]

    def __repr__(self) -> str:
        return f"DerivativeSequence({self.f.label})"


def derivative_uniform(f: IntervalFn) -> DerivativeSequence:
    return DerivativeSequence(f)


def derivative_pointwise(f: IntervalFn, x: Any, n: int) -> Ball:
    """
    The n-th difference quotient at x as a ball: exact for rational x when f is
    evaluated exactly, otherwise the enclosure over the ball named by cell
    n + POINTWISE_EXTRA_CELLS of the unit-interval name x.
    """
    quotient = difference_quotient(f, n)
    if isinstance(x, Stream):
        j = 2 * n + POINTWISE_EXTRA_CELLS
        region = Interval.ball(UNIT.alpha(x.at(j)), power_of_two(j))
        region = Interval(max(region.lo, Q(0)), min(region.hi, Q(1)))
        value = quotient.enclose(region)
    else:
        value = quotient.point(to_q(x))
    return Ball(REALS.index_of(value.mid), value.radius)


def grid_sup_distance(f: IntervalFn, g: IntervalFn, depth: int) -> Q:
    """[0,1]의 2^depth 등분 격자에서 |f − g| 의 최댓값 (상한)"""
    return max(abs(f.point(x) - g.point(x)).hi for x in Interval(0, 1).grid(depth))


# ──────────────────────────────────────────
# 망델브로 집합까지의 거리
# ──────────────────────────────────────────


def _round_out(box: Interval) -> Interval:
    scale = 1 << ROUNDING_BITS
    lo = box.lo.numerator * scale // box.lo.denominator
    hi = -(-box.hi.numerator * scale // box.hi.denominator)
    return Interval(Q(lo, scale), Q(hi, scale))


def escapes(re: Interval, im: Interval, iterations: int = MANDELBROT_ITERATIONS) -> bool:
    """모든 c ∈ re × im 에 대해 어떤 반복값이 |z| > 2 임이 인증되면 True"""
    x, y = re, im
    for _ in range(iterations):
        if (x**2 + y**2).lo > 4:
            return True
        x, y = _round_out(x**2 - y**2 + re), _round_out(2 * x * y + im)
        if x.width + y.width > GIVE_UP_WIDTH:
            return False
    return (x**2 + y**2).lo > 4


@lru_cache(maxsize=1 << 16)
def _cell_escapes(i: int, j: int, depth: int, iterations: int) -> bool:
    h = power_of_two(depth)
    return escapes(Interval(i * h, (i + 1) * h), Interval(j * h, (j + 1) * h), iterations)


def _square_cells(re: Q, im: Q, r: Q, h: Q) -> set[tuple[int, int]]:
    """닫힌 정사각형 [re ± r] × [im ± r] 을 덮는 격자 칸"""
    xs = range((re - r) // h, -((-(re + r)) // h))
    ys = range((im - r) // h, -((-(im + r)) // h))
    return {(i, j) for i in xs for j in ys} or {(int(re // h), int(im // h))}


def _certified_radius(re: Q, im: Q, depth: int, iterations: int) -> Q:
    h = power_of_two(depth)
    limit = abs(re) + abs(im) + RING_MARGIN
    checked: set[tuple[int, int]] = set()
    best = Q(0)
    m = 0
    while m * h <= limit:
        cells = _square_cells(re, im, m * h, h) - checked
        if not all(_cell_escapes(i, j, depth, iterations) for i, j in sorted(cells)):
            return best
        checked |= cells
        best = m * h
        m += 1
    return best


def mandelbrot_distance_lower(
    c: tuple[int | Q, int | Q],
    iterations: int = MANDELBROT_ITERATIONS,
    depth: int = MANDELBROT_DEPTH,
) -> list[Q]:
    """
    Nondecreasing lower bounds on d(c, M), one per grid depth 1..depth. Every bound r
    comes with a certificate: each grid cell meeting the closed square of half side r
    around c escapes, so the open disc of radius r misses M.
    """
    re, im = to_q(c[0]), to_q(c[1])
    bounds: list[Q] = []
    best = Q(0)
    for d in tqdm(range(1, depth + 1), desc="mandelbrot", leave=False):
        best = max(best, _certified_radius(re, im, d, iterations))
        bounds.append(best)
        log_message(f"[mandelbrot] c = {re}+{im}i depth {d}: lower bound {best}")
    return bounds
