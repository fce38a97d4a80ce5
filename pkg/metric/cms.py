"""
Computable metric spaces (X, d, α) over exact rationals.

A `CMS` numbers its dense points by α and bounds distances between them: `dist_bounds(i,
j, k)` returns an interval containing d(α(i), α(j)), narrowed towards width 2^{-k}. Spaces
with rational distances answer with a point interval.

    R        α = r̄ (all rationals), d = |x − y|
    unit     dyadic rationals in [0, 1]
    cantor   finite binary words w·0̂, d = 2^{-(first difference)}
    N        discrete metric
    X × Y    max metric, α⟨i, j⟩ = (α_X(i), α_Y(j))
    C[0,1]   rational polynomials, sup norm (enclosed by interval subdivision)
"""
from functools import lru_cache
from typing import Any, Callable

import sympy
from sympy import Poly

from baire.words import Word, decode_sequence, encode_sequence, pair, unpair
from metric.rationals import Q, Interval, power_of_two, rational_at, rational_index

# C[0,1] 상한 계산의 최대 분할 깊이
SUP_NORM_DEPTH = 12

X_SYMBOL = sympy.Symbol("x")


class CMS:
    """계산 가능 거리 공간의 공통 인터페이스"""

    name: str
    exact: bool = True
    complete: bool = True

    def alpha(self, i: int) -> Any:
        raise NotImplementedError

    def dist(self, i: int, j: int) -> Q:
        """정확한 거리 (exact 공간에서만)"""
        raise NotImplementedError

    def dist_bounds(self, i: int, j: int, k: int) -> Interval:
        return Interval.point(self.dist(i, j))

    def index_of(self, point: Any) -> int:
        """α(index_of(x)) = x 인 번호 (조밀 집합의 원소에 한해)"""
        raise NotImplementedError

    def format_point(self, point: Any) -> str:
        return str(point)

    def __repr__(self) -> str:
        return f"CMS({self.name})"


class RealLine(CMS):
    name = "R"

    def alpha(self, i: int) -> Q:
        return rational_at(i)

    def dist(self, i: int, j: int) -> Q:
        return abs(rational_at(i) - rational_at(j))

    def index_of(self, point: Q) -> int:
        return rational_index(point)


class UnitInterval(CMS):
    """[0,1]; α⟨n,k⟩ = min(n, 2^k)/2^k"""

    name = "unit"

    def alpha(self, i: int) -> Q:
        n, k = unpair(i)
        return Q(min(n, 1 << k), 1 << k)

    def dist(self, i: int, j: int) -> Q:
        return abs(self.alpha(i) - self.alpha(j))

    def index_of(self, point: Q) -> int:
        point = Q(point)
        if not 0 <= point <= 1:
            raise ValueError(f"{point} is outside [0, 1]")
        k = point.denominator.bit_length() - 1
        if point.denominator != 1 << k:
            raise ValueError(f"{point} is not dyadic")
        return pair(point.numerator, k)


def _binary_word(i: int) -> Word:
    """i ↦ 이진 단어 (전단사 이진 기수법의 자릿수 1, 2 → 비트 0, 1)"""
    digits: list[int] = []
    while i > 0:
        d = i % 2 or 2
        digits.append(d - 1)
        i = (i - d) // 2
    return tuple(reversed(digits))


def _binary_index(word: Word) -> int:
    value = 0
    for bit in word:
        value = value * 2 + bit + 1
    return value


def _strip_zeros(word: Word) -> Word:
    end = len(word)
    while end and word[end - 1] == 0:
        end -= 1
    return word[:end]


class CantorSpace(CMS):
    name = "cantor"

    def alpha(self, i: int) -> Word:
        """w (뒤는 0̂)"""
        return _binary_word(i)

    def dist(self, i: int, j: int) -> Q:
        u, v = self.alpha(i), self.alpha(j)
        n = max(len(u), len(v))
        u, v = u + (0,) * (n - len(u)), v + (0,) * (n - len(v))
        for k, (a, b) in enumerate(zip(u, v)):
            if a != b:
                return power_of_two(k)
        return Q(0)

    def index_of(self, point: Word) -> int:
        return _binary_index(_strip_zeros(tuple(point)))

    def format_point(self, point: Word) -> str:
        return "".join(map(str, point)) + "0̂"


class Naturals(CMS):
    name = "N"

    def alpha(self, i: int) -> int:
        return i

    def dist(self, i: int, j: int) -> Q:
        return Q(0) if i == j else Q(1)

    def index_of(self, point: int) -> int:
        return point


class ProductSpace(CMS):
    def __init__(self, left: CMS, right: CMS):
        self.left = left
        self.right = right
        self.name = f"{left.name}x{right.name}"
        self.exact = left.exact and right.exact

    def alpha(self, i: int) -> tuple:
        a, b = unpair(i)
        return self.left.alpha(a), self.right.alpha(b)

    def dist(self, i: int, j: int) -> Q:
        (a, b), (c, d) = unpair(i), unpair(j)
        return max(self.left.dist(a, c), self.right.dist(b, d))

    def dist_bounds(self, i: int, j: int, k: int) -> Interval:
        (a, b), (c, d) = unpair(i), unpair(j)
        x, y = self.left.dist_bounds(a, c, k), self.right.dist_bounds(b, d, k)
        return Interval(max(x.lo, y.lo), max(x.hi, y.hi))

    def index_of(self, point: tuple) -> int:
        return pair(self.left.index_of(point[0]), self.right.index_of(point[1]))

    def format_point(self, point: tuple) -> str:
        return f"({self.left.format_point(point[0])}, {self.right.format_point(point[1])})"


# ──────────────────────────────────────────
# C[0,1]
# ──────────────────────────────────────────


def to_fraction(value: Any) -> Q:
    """sympy 유리수 → Fraction"""
    r = sympy.Rational(value)
    return Q(int(r.p), int(r.q))


@lru_cache(maxsize=4096)
def polynomial_at(i: int) -> Poly:
    """i번째 유리 다항식: 계수 번호들을 decode_sequence로 풉니다 (낮은 차수부터)."""
    coefficients = [sympy.Rational(c.numerator, c.denominator) for c in map(rational_at, decode_sequence(i))]
    if not coefficients:
        coefficients = [sympy.Integer(0)]
    return Poly(list(reversed(coefficients)), X_SYMBOL, domain=sympy.QQ)


def polynomial_index(poly: Poly) -> int:
    coefficients = [to_fraction(c) for c in reversed(poly.all_coeffs())]
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    if coefficients == [0]:
        coefficients = []
    return encode_sequence([rational_index(c) for c in coefficients])


def poly_interval(poly: Poly, box: Interval) -> Interval:
    """호너 방식 구간 평가"""
    acc = Interval.point(0)
    for c in poly.all_coeffs():
        acc = acc * box + to_fraction(c)
    return acc


def poly_point(poly: Poly, x: Q) -> Q:
    return to_fraction(poly.eval(sympy.Rational(x.numerator, x.denominator)))


def sup_norm_bounds(poly: Poly, k: int, depth: int = SUP_NORM_DEPTH) -> Interval:
    """
    Encloses sup_{[0,1]} |poly| by bisection: the lower end is the largest value seen at
    a subinterval endpoint, the upper end the largest interval enclosure still alive.
    """
    target = power_of_two(k)
    pieces = [Interval(0, 1)]
    lower = max(abs(poly_point(poly, Q(0))), abs(poly_point(poly, Q(1))))
    upper = abs(poly_interval(poly, pieces[0])).hi
    for _ in range(depth):
        if upper - lower <= target:
            break
        refined: list[Interval] = []
        for piece in pieces:
            for half in piece.split(2):
                lower = max(lower, abs(poly_point(poly, half.hi)))
                refined.append(half)
        upper = max(abs(poly_interval(poly, piece)).hi for piece in refined)
        # 최댓값을 넘을 수 없는 조각은 버립니다.
        pieces = [piece for piece in refined if abs(poly_interval(poly, piece)).hi > lower]
        if not pieces:
            upper = lower
            break
    return Interval(lower, max(upper, lower))


class PolynomialSpace(CMS):
    """C[0,1] with the uniform norm; the dense set is the rational polynomials."""

    name = "C[0,1]"
    exact = False

    def alpha(self, i: int) -> Poly:
        return polynomial_at(i)

    def dist_bounds(self, i: int, j: int, k: int) -> Interval:
        return sup_norm_bounds(polynomial_at(i) - polynomial_at(j), k)

    def dist(self, i: int, j: int) -> Q:
        bounds = self.dist_bounds(i, j, SUP_NORM_DEPTH)
        if not bounds.is_point:
            raise ValueError(f"sup norm of α({i}) − α({j}) is only known within {bounds}")
        return bounds.lo

    def index_of(self, point: Poly) -> int:
        return polynomial_index(point)

    def format_point(self, point: Poly) -> str:
        return str(point.as_expr())


# ──────────────────────────────────────────
# 라이브러리
# ──────────────────────────────────────────

REALS = RealLine()
UNIT = UnitInterval()
CANTOR = CantorSpace()
NATURALS = Naturals()
POLYNOMIALS = PolynomialSpace()

_BUILDERS: dict[str, Callable[[], CMS]] = {
    "R": lambda: REALS,
    "unit": lambda: UNIT,
    "cantor": lambda: CANTOR,
    "N": lambda: NATURALS,
    "C[0,1]": lambda: POLYNOMIALS,
}

# 고정 태그 네이티브의 인자로 쓰이는 공간 번호
CMS_ORDER: tuple[str, ...] = ("R", "unit", "cantor", "N", "C[0,1]")


def cms_library() -> dict[str, CMS]:
    return {name: build() for name, build in _BUILDERS.items()}


def cms_by_name(name: str) -> CMS:
    if "x" in name and name not in _BUILDERS:
        left, _, right = name.partition("x")
        return ProductSpace(cms_by_name(left), cms_by_name(right))
    if name not in _BUILDERS:
        raise KeyError(f"unknown space {name!r}; known: {', '.join(_BUILDERS)}")
    return _BUILDERS[name]()


def cms_id(space: CMS) -> int:
    if space.name not in CMS_ORDER:
        raise KeyError(f"{space.name} has no fixed number")
    return CMS_ORDER.index(space.name)


def cms_from_id(number: int) -> CMS:
    return cms_by_name(CMS_ORDER[number])
