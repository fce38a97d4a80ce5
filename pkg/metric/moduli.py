"""
Moduli of continuity certified by interval extensions.

`check_modulus(f, x, n, m)` decides, by covering the closed ball of radius 2^{-m} around
x with dyadic pieces, whether |f(y) − f(x)| ≤ 2^{-n} there; a rejection comes with a
witness point y where the violation is certified. `modulus(f, p, n)` searches the least
such m for the point named by p.

`reconstruct_from_modulus` evaluates f(x) from values of f on dense points and a global
modulus, both supplied relative to an oracle. `uniform_modulus` reads a uniform modulus
off an iterated whitelist that knows, for registered probe points, which pairs of
points are close while their images are far apart.
"""
from itertools import combinations
from typing import Any, Callable, NamedTuple, Protocol, Sequence

from pydantic import BaseModel, ConfigDict, Field

from baire.stream import Stream
from core.errors import BudgetExhausted, ContractViolation
from core.utils import log_message
from metric.cauchy import Ball, exact_limit
from metric.cms import CANTOR, CMS, REALS, UNIT
from metric.rationals import Q, Interval, dyadic, power_of_two, rational_index
from vm.oracle import Oracle

# 덮개 세분의 최대 깊이
COVER_DEPTH = 10
# modulus가 시도하는 m의 상한
MODULUS_SEARCH_LIMIT = 40


class IntervalExtension(Protocol):
    label: str
    domain: str

    def enclose(self, region: Any) -> Interval: ...

    def point(self, x: Any) -> Interval: ...


class ModulusCheck(NamedTuple):
    accepted: bool
    witness: Any | None
    depth: int


# ──────────────────────────────────────────
# 정의역: [0,1] 의 닫힌 구간, 2^N 의 원기둥
# ──────────────────────────────────────────


def _space_of(f: IntervalExtension) -> CMS:
    spaces = {"unit": UNIT, "cantor": CANTOR, "R": REALS}
    if f.domain not in spaces:
        raise ContractViolation(f"moduli are computed on [0,1], 2^N and R, not on {f.domain}")
    return spaces[f.domain]


def _clip(f: IntervalExtension, box: Interval) -> Interval:
    if f.domain == "unit":
        return Interval(max(box.lo, Q(0)), min(box.hi, Q(1)))
    return box


def _neighbourhood(f: IntervalExtension, x: Any, m: int) -> Any:
    if f.domain == "cantor":
        return tuple((tuple(x) + (0,) * m)[:m])
    return _clip(f, Interval.ball(x, power_of_two(m)))


def _split(f: IntervalExtension, region: Any) -> list:
    if f.domain == "cantor":
        return [region + (0,), region + (1,)]
    return region.split(2)


def _samples(f: IntervalExtension, region: Any) -> tuple:
    if f.domain == "cantor":
        return (region, region + (1,) * 8)
    return (region.lo, region.hi)


def _within(image: Interval, centre: Interval, limit: Q) -> bool:
    return image.hi - centre.lo <= limit and centre.hi - image.lo <= limit


def _violates(value: Interval, centre: Interval, limit: Q) -> bool:
    return (value - centre).lo > limit or (centre - value).lo > limit


def check_modulus(f: IntervalExtension, x: Any, n: int, m: int, depth: int = COVER_DEPTH) -> ModulusCheck:
    """|y − x| ≤ 2^{-m} ⟹ |f(y) − f(x)| ≤ 2^{-n} 인지 덮개로 판정합니다."""
    _space_of(f)
    centre = f.point(x)
    limit = power_of_two(n)
    pending = [_neighbourhood(f, x, m)]
    for level in range(depth + 1):
        refined = []
        for region in pending:
            if _within(f.enclose(region), centre, limit):
                continue
            for y in _samples(f, region):
                if _violates(f.point(y), centre, limit):
                    return ModulusCheck(False, y, level)
            refined.extend(_split(f, region))
        if not refined:
            return ModulusCheck(True, None, level)
        pending = refined
    raise BudgetExhausted(f"cover of the 2^-{m} ball around {x} undecided at depth {depth}")


def _narrow_image(f: IntervalExtension, region: Any, limit: Q, depth: int) -> Interval | None:
    """영역의 상을 limit 폭 안으로 둘러싸면 그 구간"""
    pieces = [region]
    for _ in range(depth + 1):
        hull = Interval.hull(f.enclose(piece) for piece in pieces)
        if hull.width <= limit:
            return hull
        pieces = [half for piece in pieces for half in _split(f, piece)]
    return None


def modulus(f: IntervalExtension, p: Stream, n: int, depth: int = COVER_DEPTH) -> int:
    """The least m accepted at precision n for the point named by p."""
    space = _space_of(f)
    exact = exact_limit(space, p)
    for m in range(MODULUS_SEARCH_LIMIT):
        if exact is not None:
            try:
                if check_modulus(f, exact, n, m, depth).accepted:
                    return m
            except BudgetExhausted:
                continue
        else:
            # 셀 m+2의 공을 2^{-m}만큼 넓히면 x의 2^{-m} 근방을 덮습니다.
            centre = space.alpha(p.at(m + 2))
            if f.domain == "cantor":
                region = _neighbourhood(f, centre, m)
            else:
                region = _clip(f, Interval.ball(centre, power_of_two(m + 2) + power_of_two(m)))
            if _narrow_image(f, region, power_of_two(n), depth) is not None:
                return m
    raise BudgetExhausted(f"no modulus for {f.label} at precision {n} below {MODULUS_SEARCH_LIMIT}")


def evaluate_to_precision(f: IntervalExtension, x: Any, k: int, depth: int = 4) -> Interval:
    """An enclosure of f(x) no wider than 2^{-k}; x is an exact point or a Cauchy name."""
    if not isinstance(x, Stream):
        value = f.point(x)
        if value.width <= power_of_two(k):
            return value
        raise BudgetExhausted(f"{f.label}({x}) is only known within {value}")
    space = _space_of(f)
    for j in range(MODULUS_SEARCH_LIMIT):
        image = _narrow_image(f, _neighbourhood(f, space.alpha(x.at(j)), j), power_of_two(k), depth)
        if image is not None:
            return image
    raise BudgetExhausted(f"{f.label} not resolved to 2^-{k} within {MODULUS_SEARCH_LIMIT} cells")


# ──────────────────────────────────────────
# 모듈러스로 다시 계산하기
# ──────────────────────────────────────────

NameSource = Callable[[int, Oracle], Stream]
ModulusSource = Callable[[int, Oracle], int]


def reconstruct_from_modulus(
    f_alpha: NameSource, m_source: ModulusSource, oracle: Oracle, p: Stream, k: int
) -> Ball:
    """
    B(f(x), 2^{-k}) from a name of f(α(i)) and a global modulus m: with m = m(k+1) the
    dense point α(p(m+1)) is strictly closer than 2^{-m} to x, so its image is within
    2^{-k-1} of f(x).
    """
    m = m_source(k + 1, oracle)
    c = p.at(m + 1)
    return Ball(f_alpha(c, oracle).at(k + 1), power_of_two(k))


def alpha_names(f: IntervalExtension, space: CMS = UNIT) -> NameSource:
    """f∘α 의 R-이름: 셀 k는 f(α(i))를 2^{-k-2} 안으로 둘러싼 구간의 중점"""
    def names(i: int, oracle: Oracle) -> Stream:
        point = space.alpha(i)

        def cell(k: int) -> int:
            value = f.point(point)
            if value.width > power_of_two(k + 2):
                raise BudgetExhausted(f"{f.label}(α({i})) is only known within {value}")
            return rational_index(value.mid)

        return Stream(cell, label=f"{f.label}∘α({i})")

    return names


# ──────────────────────────────────────────
# 균등 모듈러스
# ──────────────────────────────────────────


def dyadic_probes(depth: int) -> list[Q]:
    """[0,1]의 2^depth 등분 격자"""
    return [dyadic(i, depth) for i in range((1 << depth) + 1)]


class IteratedWhitelist:
    """
    Stands in for a double-jump oracle on a fixed probe set: (n, k) is in A when two
    probes closer than 2^{-n} have images certified farther apart than 2^{-k}.
    """

    def __init__(self, probes: Sequence[Q]):
        self.probes = list(probes)
        self._cache: dict[tuple[int, int, str], bool] = {}

    def in_a(self, f: IntervalExtension, n: int, k: int) -> bool:
        key = (n, k, f.label)
        if key not in self._cache:
            close = power_of_two(n)
            far = power_of_two(k)
            values = {x: f.point(x) for x in self.probes}
            self._cache[key] = any(
                abs(x - y) < close and _violates(values[x], values[y], far) for x, y in combinations(self.probes, 2)
            )
        return self._cache[key]

    def describe(self) -> str:
        return f"iterated:{len(self.probes)} probes"


class Modulus(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    function: Stream = Field(description="n ↦ m(n)")
    scope: str = Field(description="where the modulus has been validated")

    def __call__(self, n: int) -> int:
        return self.function.at(n)


def uniform_modulus(f: IntervalExtension, o2: IteratedWhitelist, limit: int = MODULUS_SEARCH_LIMIT) -> Modulus:
    """m(k) = 가장 작은 n with (n, k+1) ∉ A"""

    def cell(k: int) -> int:
        for n in range(limit):
            if not o2.in_a(f, n, k + 1):
                return n
        raise BudgetExhausted(f"no uniform modulus for {f.label} at 2^-{k} below {limit}")

    log_message(f"[moduli] uniform modulus of {f.label} relative to {o2.describe()}")
    return Modulus(function=Stream(cell, label=f"m[{f.label}]"), scope=f"registered probes ({o2.describe()})")
