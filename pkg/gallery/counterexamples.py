"""
Continuous functions that are computable with finitely many mind changes but whose
values encode Fin, run as limit machines over an explicit `FinUniverse`.

    f_cantor   2^N → R   2^{-n} on 0^n 1^{|W_n|+1} 0 2^N for n ∈ Fin, else 0
    f_unit     [0,1] → R Σ_{n∈Fin} 2^{-n} Δ_{n,|W_n|}
    f_smooth   R → R     Σ_{n∈Fin} bump_{n,|W_n|}
    chi_U      2^N → S   0 on 0̂ and on the clopen pieces above, 1 elsewhere

Each machine is a single NATIVE instruction whose argument encodes the universe, so
the Gödel number alone determines the function.
"""
import math
from itertools import count
from typing import Callable, Iterator

from baire.stream import Stream
from baire.words import pair
from core.utils import log_message
from gallery.fin import FinUniverse, universe_from_arg
from gallery.functions import IntervalFn, bump_piece, triangle_piece
from metric.cms import CMS, REALS, UNIT
from metric.rationals import Q, Interval, power_of_two
from vm.machine import LimitRun, run_limit
from vm.natives import TICK, Event, Source, microcode, read_when_ready, tag_of, write_event
from vm.program import Instruction, Kind, MachineCode, Op, Program

# 선언된 전역 마음 바꿈 상한
MIND_CHANGE_BOUNDS: dict[str, int] = {"f_cantor": 2, "chi_U": 3}

ZERO_NAME = REALS.index_of(Q(0))


class BlockPattern:
    """0^n 1^{k+1} 0 w 형태의 앞부분을 한 칸씩 읽습니다."""

    def __init__(self) -> None:
        self.n = 0
        self.ones = 0
        self.m = -1

    @property
    def complete(self) -> bool:
        return self.m >= 0

    @property
    def k(self) -> int:
        return self.ones - 1

    def feed(self, bit: int) -> None:
        if self.complete:
            self.m += 1
        elif bit == 0:
            if self.ones:
                self.m = 0
            else:
                self.n += 1
        else:
            self.ones += 1


def _fin_code(name: str, universe: FinUniverse) -> MachineCode:
    log_message(f"[gallery] {name} over {universe.describe()}")
    program = Program([Instruction(Op.NATIVE, pair(tag_of(name), universe.to_arg()))])
    return MachineCode.of(program, Kind.FMC, f"{name}[{universe.name}]")


def _write_all(written: dict[int, int], s: int, cell_value: Callable[[int], int]) -> Iterator[Event]:
    for j in range(s + 1):
        value = cell_value(j)
        if written.get(j) != value:
            written[j] = value
            yield write_event(j, value)


# ──────────────────────────────────────────
# 칸토어 공간 위의 반례
# ──────────────────────────────────────────


@microcode("f_cantor")
def _f_cantor_body(arg: int, source: Source) -> Iterator[Event]:
    universe = universe_from_arg(arg)
    pattern = BlockPattern()
    guess = ZERO_NAME
    written: dict[int, int] = {}
    for s in count():
        yield from read_when_ready(source, s)
        pattern.feed(source(s))
        if pattern.complete:
            hit = universe.distinct(pattern.n, pattern.m) == pattern.k
            guess = REALS.index_of(power_of_two(pattern.n)) if hit else ZERO_NAME
        yield from _write_all(written, s, lambda j: guess)
        yield TICK


def f_cantor_code(universe: FinUniverse) -> MachineCode:
    return _fin_code("f_cantor", universe)


def f_cantor(universe: FinUniverse, p: Stream, budget: int) -> LimitRun:
    return run_limit(f_cantor_code(universe), p, budget)


@microcode("chi_U")
def _chi_u_body(arg: int, source: Source) -> Iterator[Event]:
    """
    Cell 0 guesses 0 while only zeros were read, 1 inside the run of ones, and
    after the block 0^n 1^{k+1} 0 it follows whether e_n has shown exactly k values.
    """
    universe = universe_from_arg(arg)
    pattern = BlockPattern()
    guess = 0
    written: dict[int, int] = {}
    for s in count():
        yield from read_when_ready(source, s)
        pattern.feed(source(s))
        if pattern.complete:
            guess = 0 if universe.distinct(pattern.n, pattern.m) == pattern.k else 1
        elif pattern.ones:
            guess = 1
        yield from _write_all(written, s, lambda j: guess if j == 0 else 0)
        yield TICK


def chi_u_code(universe: FinUniverse) -> MachineCode:
    """Sierpiński 이름: 0은 0̂, 1은 10̂"""
    return _fin_code("chi_U", universe)


def chi_U_sierpinski(universe: FinUniverse, p: Stream, budget: int) -> LimitRun:
    return run_limit(chi_u_code(universe), p, budget)


# ──────────────────────────────────────────
# 조각 합으로 정의된 실함수
# ──────────────────────────────────────────


def _locate_unit(box: Interval) -> int | None:
    """box ⊆ (2^{-n-1}, 2^{-n}) 이면 n"""
    if box.lo <= 0:
        return None
    n = 0
    while power_of_two(n + 1) >= box.lo:
        n += 1
    return n if box.hi < power_of_two(n) else None


def _locate_line(box: Interval) -> int | None:
    """box ⊆ (n, n+1) 이면 n"""
    n = math.floor(box.lo)
    return n if n < box.lo and box.hi < n + 1 else None


def _piece_cell(fn: IntervalFn, space: CMS, source: Source, j: int) -> Iterator[Event]:
    """fn(x)를 2^{-j-1} 폭 안으로 둘러쌀 때까지 입력을 더 읽고 중점의 번호를 돌려줍니다."""
    for i in count(j):
        yield from read_when_ready(source, i)
        image = fn.enclose(Interval.ball(space.alpha(source(i)), power_of_two(i)))
        if image.width <= power_of_two(j + 1):
            return REALS.index_of(image.mid)


def _piece_sum_body(
    universe: FinUniverse,
    space: CMS,
    locate: Callable[[Interval], int | None],
    piece: Callable[[int, int], IntervalFn],
    source: Source,
) -> Iterator[Event]:
    """
    Outputs 0 until the input ball lands inside one block K_n, then the name of
    piece(n, k)(x) where k is the current count of distinct values of e_n.
    """
    block: int | None = None
    values: dict[tuple[int, int], int] = {}
    written: dict[int, int] = {}
    for s in count():
        yield from read_when_ready(source, s)
        if block is None:
            block = locate(Interval.ball(space.alpha(source(s)), power_of_two(s)))
        k = universe.distinct(block, s) if block is not None and block >= 0 else None
        if k is not None:
            for j in range(s + 1):
                if (k, j) not in values:
                    values[(k, j)] = yield from _piece_cell(piece(block, k), space, source, j)
        yield from _write_all(written, s, lambda j: ZERO_NAME if k is None else values[(k, j)])
        yield TICK


@microcode("f_unit")
def _f_unit_body(arg: int, source: Source) -> Iterator[Event]:
    return _piece_sum_body(universe_from_arg(arg), UNIT, _locate_unit, triangle_piece, source)


@microcode("f_smooth")
def _f_smooth_body(arg: int, source: Source) -> Iterator[Event]:
    return _piece_sum_body(universe_from_arg(arg), REALS, _locate_line, bump_piece, source)


def f_unit_code(universe: FinUniverse) -> MachineCode:
    return _fin_code("f_unit", universe)


def f_smooth_code(universe: FinUniverse) -> MachineCode:
    return _fin_code("f_smooth", universe)


def f_unit(universe: FinUniverse, x: Stream, budget: int) -> LimitRun:
    return run_limit(f_unit_code(universe), x, budget)


def f_smooth(universe: FinUniverse, x: Stream, budget: int) -> LimitRun:
    return run_limit(f_smooth_code(universe), x, budget)


def f_unit_exact(universe: FinUniverse, x: Q) -> Q:
    """정의식의 직접 계산 (W_n의 크기를 아는 경우)"""
    block = _locate_unit(Interval.point(x))
    if block is None or not universe.in_fin(block):
        return Q(0)
    return triangle_piece(block, universe.size(block)).point(x).lo
