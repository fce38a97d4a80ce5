"""
Names for the unique zero of a real function on [a, b].

Trisection keeps an interval whose endpoint signs are certified to differ: both inner
probes are evaluated, and every probe with a certified sign replaces the endpoint with
the same sign. A probe whose enclosure is exactly {0} ends the search with a constant
name.
"""
from typing import Protocol

from baire.stream import Stream
from core.errors import BudgetExhausted, ContractViolation
from core.utils import log_message
from metric.cms import REALS
from metric.rationals import Q, Interval, power_of_two, to_q

# 한 번의 셀 계산에서 허용하는 삼등분 횟수
TRISECTION_LIMIT = 400


class PointEnclosure(Protocol):
    label: str

    def point(self, x: Q) -> Interval: ...


def certified_sign(value: Interval) -> int | None:
    """구간이 0을 배제하면 부호, 정확히 0이면 0, 아니면 None"""
    if value.lo > 0:
        return 1
    if value.hi < 0:
        return -1
    if value.lo == value.hi == 0:
        return 0
    return None


class _Trisection:
    def __init__(self, f: PointEnclosure, lo: Q, hi: Q):
        self.f = f
        self.lo, self.hi = lo, hi
        self.exact: Q | None = None
        self.sign_lo = certified_sign(f.point(lo))
        sign_hi = certified_sign(f.point(hi))
        if self.sign_lo == 0:
            self.exact = lo
        elif sign_hi == 0:
            self.exact = hi
        elif self.sign_lo is None or sign_hi is None or self.sign_lo == sign_hi:
            raise ContractViolation(f"no certified sign change of {f.label} on [{lo}, {hi}]")
        self.intervals: list[Interval] = [Interval(lo, hi)]

    def step(self) -> None:
        lo, hi = self.lo, self.hi
        third = (hi - lo) / 3
        moved = False
        for probe in (lo + third, hi - third):
            if not self.lo < probe < self.hi:
                continue
            sign = certified_sign(self.f.point(probe))
            if sign is None:
                continue
            if sign == 0:
                self.exact = probe
                return
            if sign == self.sign_lo:
                self.lo = probe
            else:
                self.hi = probe
            moved = True
        if not moved:
            raise BudgetExhausted(f"no certified sign of {self.f.label} inside [{lo}, {hi}]")
        self.intervals.append(Interval(self.lo, self.hi))

    def midpoint(self, k: int) -> Q:
        """폭이 2^{-k} 이하가 된 첫 구간의 중점"""
        for _ in range(TRISECTION_LIMIT):
            if self.exact is not None:
                return self.exact
            for box in self.intervals:
                if box.width <= power_of_two(k):
                    return box.mid
            self.step()
        raise BudgetExhausted(f"{self.f.label} not bracketed to 2^-{k} in {TRISECTION_LIMIT} steps")


def unique_zero(f: PointEnclosure, lo: Q | int = 0, hi: Q | int = 1) -> Stream:
    """
    An R-name of the zero of f in [lo, hi]. Cell k is the midpoint of the first kept
    interval no wider than 2^{-k}; later intervals are nested inside it, so the name
    converges fast.
    """
    search = _Trisection(f, to_q(lo), to_q(hi))
    log_message(f"[zeros] unique zero of {f.label} on [{lo}, {hi}]")
    if search.exact is not None:
        return Stream.constant(REALS.index_of(search.exact))
    return Stream(lambda k: REALS.index_of(search.midpoint(k)), label=f"zero({f.label})")
