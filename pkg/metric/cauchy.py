"""
Cauchy names, rational balls and the formal relations between balls.

A Cauchy name of x is a stream p of α-indices with d(α p(n), α p(k)) < 2^{-k} for all
n ≥ k; it denotes lim α p(n), and the ball B(α p(k), 2^{-k}) contains that limit.
Ball numbers follow B⟨c, r⟩ = B(α(c), r̄).
"""
from enum import Enum
from typing import NamedTuple

from baire.stream import Stream
from baire.words import Word, pair, unpair
from core.errors import InvalidName
from metric.cms import CMS
from metric.rationals import Q, Interval, power_of_two, rational_at, rational_index

# 이름 검사 기본 길이
CHECK_LENGTH = 21


class Ball(NamedTuple):
    center: int
    radius: Q

    @property
    def index(self) -> int:
        return pair(self.center, rational_index(self.radius))

    @classmethod
    def from_index(cls, m: int) -> "Ball":
        c, r = unpair(m)
        return cls(c, rational_at(r))

    def interval(self, space: CMS) -> Interval:
        """실직선형 공간에서의 닫힌 구간"""
        return Interval.ball(space.alpha(self.center), self.radius)

    def describe(self, space: CMS) -> str:
        return f"B({space.format_point(space.alpha(self.center))}, {self.radius})"


class Relation(str, Enum):
    INCLUDED = "included"
    DISJOINT = "disjoint"
    UNKNOWN = "unknown"


def formal_relations(space: CMS, b1: Ball, b2: Ball, precision: int = 32) -> Relation:
    """
    included: d(c₁, c₂) + r₁ < r₂; disjoint: d(c₁, c₂) > r₁ + r₂. Both are checked on a
    distance enclosure at the given precision, so touching balls stay unknown.
    """
    d = space.dist_bounds(b1.center, b2.center, precision)
    if d.hi + b1.radius < b2.radius:
        return Relation.INCLUDED
    if d.lo > b1.radius + b2.radius:
        return Relation.DISJOINT
    return Relation.UNKNOWN


def fast_convergence_violation(space: CMS, prefix: Word) -> tuple[int, int] | None:
    """앞부분에서 d(α p(n), α p(k)) < 2^{-k}를 어기는 첫 (k, n)"""
    for n in range(1, len(prefix)):
        for k in range(n):
            d = space.dist_bounds(prefix[n], prefix[k], k + 8)
            if d.lo >= power_of_two(k):
                return k, n
    return None


def check_cauchy_prefix(space: CMS, prefix: Word) -> None:
    found = fast_convergence_violation(space, prefix)
    if found is not None:
        k, n = found
        raise InvalidName(f"not a Cauchy name in {space.name}: d(p({n}), p({k})) ≥ 2^-{k}")


def is_cauchy_prefix(space: CMS, prefix: Word) -> bool:
    return fast_convergence_violation(space, prefix) is None


def cauchy_decode(space: CMS, p: Stream, k: int) -> Ball:
    """B(α p(k), 2^{-k}); the name is checked on cells 0..k first."""
    check_cauchy_prefix(space, p.prefix(k + 1))
    return Ball(p.at(k), power_of_two(k))


def balls_meet(space: CMS, b1: Ball, b2: Ball) -> bool:
    """두 공이 형식적으로 서로소가 아닌지"""
    return formal_relations(space, b1, b2) is not Relation.DISJOINT


# ──────────────────────────────────────────
# 이름 만들기
# ──────────────────────────────────────────


def constant_name(space: CMS, point) -> Stream:
    """조밀 집합의 점 α(i)의 상수 이름"""
    return Stream.constant(space.index_of(point))


def rounded_name(x: Q) -> Stream:
    """R에서 p(k) = round(x·2^{k+1}) / 2^{k+1}"""

    def cell(k: int) -> int:
        scale = 1 << (k + 1)
        return rational_index(Q(round(x * scale), scale))

    return Stream(cell, label=f"name:{x}")


def name_from_approximations(approx, label: str = "name") -> Stream:
    """approx(k)가 x를 2^{-k-1}보다 가깝게 근사할 때 R의 이름"""
    return Stream(lambda k: rational_index(approx(k)), label=label)


def decode_center(space: CMS, p: Stream, k: int):
    return space.alpha(p.at(k))


def exact_limit(space: CMS, p: Stream):
    """결국 상수인 유한 기술 이름이면 그 점, 아니면 None"""
    value = p.constant_value()
    if value is None and p.description is not None:
        period = set(p.description.period)
        if len(period) == 1:
            value = p.description.period[0]
    return None if value is None else space.alpha(value)
