"""
Composition of limit machines with monotone and fmc machines by restarting.

The composite runs f and g alternately, one step each. g reads f's output tape and
blocks on cells f has not written yet. Whenever f changes a cell that the current run
of g has already read, g starts over. For `monotone_after_limit` g's appended cells
become writes to cells 0, 1, 2, ... of the composite tape, so a restart revises them.
"""
from typing import Iterator

from baire.stream import ZERO, Stream, interleave_omega, prepend
from baire.words import Word, pair, unpair
from vm.machine import LimitRun, Simulation, output_stream, run_limit
from vm.natives import EV_APPEND, EV_WRITE, TICK, Event, Source, microcode, tag_of, write_event
from vm.program import Instruction, Kind, MachineCode, Op, Program, decode_program


class _RestartableRun:
    """f의 테이프를 읽는 g의 실행; 이번 실행에서 읽은 셀을 기억합니다."""

    def __init__(self, program: Program, tape: dict[int, int]):
        self.program = program
        self.tape = tape
        self.start()

    def start(self) -> None:
        self.read_cells: set[int] = set()
        self.appended = 0
        self.sim = Simulation(self.program, self._source, None)

    def _source(self, k: int) -> int | None:
        value = self.tape.get(k)
        if value is not None:
            self.read_cells.add(k)
        return value


def _composite(arg: int, source: Source, g_kind: Kind) -> Iterator[Event]:
    g_index, f_index = unpair(arg)
    f = Simulation(decode_program(f_index), source, Kind.LIMIT)
    g = _RestartableRun(decode_program(g_index), f.tape)
    while not (f.halted and g.sim.halted):
        event = f.step()
        if event is not None and event[0] == EV_WRITE:
            cell = event[1]
            if f.last_change.get(cell) == f.steps and cell in g.read_cells:
                g.start()
        yield TICK
        event = g.sim.step()
        if event is None:
            yield TICK
        elif event[0] == EV_APPEND and g_kind is Kind.MONOTONE:
            yield write_event(g.appended, event[1])
            g.appended += 1
        elif event[0] == EV_WRITE and g_kind is not Kind.MONOTONE:
            yield write_event(event[1], event[2])
        else:
            yield TICK


@microcode("monotone_after_limit")
def _monotone_after_limit_body(arg: int, source: Source) -> Iterator[Event]:
    yield from _composite(arg, source, Kind.MONOTONE)


@microcode("limit_after_fmc")
def _limit_after_fmc_body(arg: int, source: Source) -> Iterator[Event]:
    yield from _composite(arg, source, Kind.LIMIT)


def _composite_code(name: str, g: MachineCode, f: MachineCode, kind: Kind) -> MachineCode:
    program = Program([Instruction(Op.NATIVE, pair(tag_of(name), pair(g.index, f.index)))])
    return MachineCode.of(program, kind, f"{g.label}∘{f.label}")


def monotone_after_limit(g: MachineCode, f: MachineCode) -> MachineCode:
    """G∘F for monotone g and limit f, as a limit machine."""
    g.require(Kind.MONOTONE)
    f.require(Kind.LIMIT, Kind.FMC)
    return _composite_code("monotone_after_limit", g, f, Kind.LIMIT)


def limit_after_fmc(g: MachineCode, f: MachineCode) -> MachineCode:
    """
    G∘F for limit g and fmc f. Every restart of g is caused by a revision of f, so
    the composite stays limit computable; g's stale cells are overwritten by its
    final run.
    """
    g.require(Kind.LIMIT, Kind.FMC)
    f.require(Kind.FMC)
    return _composite_code("limit_after_fmc", g, f, Kind.LIMIT)


def two_stage(g: MachineCode, f: MachineCode, p: Stream, budget: int, cells: int) -> Word:
    """f를 끝까지 돌린 테이프 위에서 g를 따로 돌린 결과 (비교용)"""
    first = run_limit(f, p, budget)
    tape = Stream.from_word(first.written_prefix(budget), Stream.constant(0))
    if g.kind is Kind.MONOTONE:
        return output_stream(g, tape, budget).prefix(cells)
    return run_limit(g, tape, budget).written_prefix(cells)


# ──────────────────────────────────────────
# 순진한 합성 E∘lim
# ──────────────────────────────────────────


# 앞 단계들은 E가 셀 0을 한 번 쓸 시간을 줍니다.
ALTERNATION_DELAY = 4


class NaiveCompositionReport(LimitRun):
    """E∘lim 데모 한 건: 입력 수열의 교대 횟수 k와 관측된 마음 바꿈"""

    alternations: int = 0


def alternating_sequence(k: int) -> Stream:
    """
    ⟨p_0, p_1, ...⟩ with p_s = 1·0̂ for s = d, d + 2, ..., d + 2k − 2 (d = ALTERNATION_DELAY)
    and p_s = 0̂ otherwise, so lim p_s = 0̂ while cell 0 of the stages flips 2k times.
    """
    one = prepend(1, ZERO)
    d = ALTERNATION_DELAY

    def stage(s: int) -> Stream:
        return one if d <= s < d + 2 * k and (s - d) % 2 == 0 else ZERO

    return interleave_omega(stage, settle=lambda cell: d + 2 * k, label=f"alt{k}")


def naive_composition_demo(ks: range, budget: int) -> list[NaiveCompositionReport]:
    """
    Runs the restart composite of E after lim on inputs whose stages alternate k
    times. The mind changes on cell 0 grow with k, so no uniform bound exists.
    """
    from gallery.machines import E, LIM

    naive = _composite_code("limit_after_fmc", E, LIM, Kind.LIMIT)
    reports = []
    for k in ks:
        run = run_limit(naive, alternating_sequence(k), budget)
        reports.append(NaiveCompositionReport(**run.model_dump(), alternations=k))
    return reports
