"""
Exact rationals and closed rational intervals.

Rationals are numbered by r̄⟨i, j, k⟩ = (i − j)/(k + 1); `rational_index` picks the
canonical number of a value (k + 1 = denominator, one of i, j zero). Intervals are
closed, with Fraction endpoints, and every operation returns an enclosure of the true
image, so a verdict such as `certainly_positive` is a proof, not an estimate.
"""
from fractions import Fraction
from typing import Iterable, Iterator

from mpmath import iv

from baire.words import pair_all, unpair_all

Q = Fraction  # 유리수 타입 별칭

ZERO_Q = Q(0)
ONE_Q = Q(1)


def to_q(x: int | str | Fraction) -> Q:
    """'1/3', '-2', '0.25' 같은 표기를 정확한 유리수로."""
    if isinstance(x, Fraction):
        return x
    return Q(x)


def rational_at(m: int) -> Q:
    i, j, k = unpair_all(m, 3)
    return Q(i - j, k + 1)


def rational_index(q: Q) -> int:
    q = to_q(q)
    i = max(q.numerator, 0)
    j = max(-q.numerator, 0)
    return pair_all((i, j, q.denominator - 1))


def dyadic(n: int, k: int) -> Q:
    """n / 2^k"""
    return Q(n, 1 << k) if k >= 0 else Q(n * (1 << -k))


def power_of_two(k: int) -> Q:
    """2^{-k}"""
    return dyadic(1, k)


def format_q(q: Q) -> str:
    return str(q)


class Interval:
    """닫힌 유리 구간 [lo, hi]"""

    __slots__ = ("lo", "hi")

    lo: Q
    hi: Q

    def __init__(self, lo: int | Q, hi: int | Q | None = None):
        lo = to_q(lo)
        hi = lo if hi is None else to_q(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # ── 생성자 ────────────────────────────

    @classmethod
    def point(cls, x: int | Q) -> "Interval":
        return cls(x, x)

    @classmethod
    def ball(cls, center: int | Q, radius: int | Q) -> "Interval":
        center, radius = to_q(center), to_q(radius)
        if radius < 0:
            raise ValueError(f"negative radius {radius}")
        return cls(center - radius, center + radius)

    @classmethod
    def hull(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        if not items:
            raise ValueError("hull of no intervals")
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    # ── 기하 ──────────────────────────────

    @property
    def width(self) -> Q:
        return self.hi - self.lo

    @property
    def mid(self) -> Q:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Q:
        return self.width / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: "int | Q | Interval") -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = to_q(x)
        return self.lo <= x <= self.hi

    def interior_contains(self, x: "int | Q | Interval") -> bool:
        if isinstance(x, Interval):
            return self.lo < x.lo and x.hi < self.hi
        x = to_q(x)
        return self.lo < x < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def split(self, pieces: int = 2) -> list["Interval"]:
        step = self.width / pieces
        return [Interval(self.lo + step * i, self.lo + step * (i + 1)) for i in range(pieces)]

    def grid(self, depth: int) -> Iterator[Q]:
        """lo부터 hi까지 2^depth 등분 격자점"""
        step = self.width / (1 << depth)
        for i in range((1 << depth) + 1):
            yield self.lo + step * i

    # ── 부호 판정 ─────────────────────────

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def straddles_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    # ── 산술 ──────────────────────────────

    @staticmethod
    def _lift(other: "int | Q | Interval") -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(to_q(other))

    def __add__(self, other: "int | Q | Interval") -> "Interval":
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "int | Q | Interval") -> "Interval":
        o = self._lift(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: "int | Q | Interval") -> "Interval":
        return self._lift(other) - self

    def __mul__(self, other: "int | Q | Interval") -> "Interval":
        o = self._lift(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: "int | Q | Interval") -> "Interval":
        o = self._lift(other)
        if o.straddles_zero():
            raise ZeroDivisionError(f"division by an interval containing 0: {o}")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other: "int | Q | Interval") -> "Interval":
        return self._lift(other) / self

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            raise ValueError("negative powers are not supported")
        if n == 0:
            return Interval.point(1)
        a, b = self.lo**n, self.hi**n
        if n % 2 == 1 or self.lo >= 0:
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(b, a)
        return Interval(0, max(a, b))

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def exp(self) -> "Interval":
        return exp_enclosure(self)

    # ── 비교와 표시 ───────────────────────

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"

    def __str__(self) -> str:
        if self.is_point:
            return f"[{self.lo}]"
        return f"[{self.lo}, {self.hi}]"


# ──────────────────────────────────────────
# mpmath 구간 연산으로 얻는 초월 함수 포함 구간
# ──────────────────────────────────────────


def _iv_enclosure(x: Q):
    """x를 포함하는 mpmath 구간 (정수 나눗셈을 바깥쪽으로 반올림)"""
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _from_iv(y) -> Interval:
    # iv 끝점은 53비트 mpf이므로 float로 정확히 옮겨집니다.
    return Interval(Q(float(y.a)), Q(float(y.b)))


def exp_enclosure(x: Interval) -> Interval:
    """An interval with exact rational endpoints containing exp(x) for every x in the input."""
    lo = _iv_enclosure(x.lo)
    hi = _iv_enclosure(x.hi)
    return _from_iv(iv.exp(iv.mpf([lo.a, hi.b])))
