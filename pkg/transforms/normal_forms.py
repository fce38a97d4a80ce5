"""
Normal forms for limit machines.

`limit_to_monotone(c)` turns a limit machine into a monotone machine emitting a
sequence ⟨q_0, q_1, ...⟩ whose componentwise limit is c's tape: q_i(j) is cell j
sampled i steps after the step that first filled it.

`fmc_normal_form(c)` does the same for machines with finitely many mind changes, but
samples at fresh-write steps so that consecutive q_i differ at most once per revision
episode. The emitted sequence is then eventually constant.
"""
from bisect import bisect_left, bisect_right
from itertools import count
from typing import Callable, Iterator

from baire.stream import Stream
from baire.words import Word, pair, unpair
from vm.certificates import FunctionCertificate, certificate_for, register_certificate
from vm.machine import Simulation, output_stream
from vm.natives import TICK, Event, Source, append_event, microcode, tag_of
from vm.program import Instruction, Kind, MachineCode, Op, Program, decode_program


class TapeTracker:
    """내부 limit 시뮬레이션과 셀별 변경 기록, 새 셀이 처음 쓰인 스텝 목록"""

    def __init__(self, program: Program, source: Source):
        self.sim = Simulation(program, source, Kind.LIMIT, record=True)
        self.fresh: list[int] = []

    @property
    def halted(self) -> bool:
        return self.sim.halted

    def first_fill(self, cell: int) -> int | None:
        writes = self.sim.history.get(cell)
        return writes[0][0] if writes else None

    def value_at(self, cell: int, time: int) -> int:
        """time 스텝이 끝났을 때 cell의 값"""
        writes = self.sim.history[cell]
        i = bisect_right(writes, (time, float("inf"))) - 1
        return writes[max(i, 0)][1]

    def fresh_at_or_after(self, time: int) -> int | None:
        i = bisect_left(self.fresh, time)
        return self.fresh[i] if i < len(self.fresh) else None

    def wait(self, ready: Callable[[], bool]) -> Iterator[Event]:
        """ready()가 참이 되거나 내부 기계가 정지할 때까지 한 스텝씩 진행"""
        sim = self.sim
        while not ready():
            seen = len(sim.history)
            if sim.step() is None:
                return
            if len(sim.history) > seen:
                self.fresh.append(sim.steps)
            yield TICK


def _stall() -> Iterator[Event]:
    while True:
        yield TICK


@microcode("limit_to_monotone")
def _limit_to_monotone_body(arg: int, source: Source) -> Iterator[Event]:
    tracker = TapeTracker(decode_program(arg), source)
    for m in count():
        i, j = unpair(m)
        yield from tracker.wait(lambda: tracker.first_fill(j) is not None)
        fill = tracker.first_fill(j)
        if fill is None:
            # 셀 j가 끝내 채워지지 않으면 출력도 여기서 멈춥니다.
            yield from _stall()
        target = fill + i
        yield from tracker.wait(lambda: tracker.sim.steps >= target)
        yield append_event(tracker.value_at(j, target))


@microcode("fmc_normal_form")
def _fmc_normal_form_body(arg: int, source: Source) -> Iterator[Event]:
    tracker = TapeTracker(decode_program(arg), source)
    for m in count():
        i, j = unpair(m)
        yield from tracker.wait(lambda: tracker.first_fill(j) is not None)
        fill = tracker.first_fill(j)
        if fill is None:
            yield from _stall()
        yield from tracker.wait(lambda: tracker.fresh_at_or_after(i) is not None)
        fresh = tracker.fresh_at_or_after(i)
        # 정지 후에는 새 셀이 없으므로 최종 테이프를 씁니다.
        target = max(fill, fresh if fresh is not None else tracker.sim.steps)
        yield from tracker.wait(lambda: tracker.sim.steps >= target)
        yield append_event(tracker.value_at(j, target))


def _wrap(name: str, c: MachineCode) -> MachineCode:
    program = Program([Instruction(Op.NATIVE, pair(tag_of(name), c.index))])
    return MachineCode.of(program, Kind.MONOTONE, f"{name}({c.label})")


def limit_to_monotone(c: MachineCode) -> MachineCode:
    c.require(Kind.LIMIT, Kind.FMC)
    code = _wrap("limit_to_monotone", c)
    # q_i(j)는 c의 셀 j가 정착한 스텝 이후로 바뀌지 않습니다.
    register_certificate(code.index, FunctionCertificate(lambda p, j: certificate_for(c.index).settle_step(p, j)))
    return code


def fmc_normal_form(c: MachineCode) -> MachineCode:
    c.require(Kind.FMC)
    return _wrap("fmc_normal_form", c)


def sequence_row(seq: Stream, i: int, cells: int) -> Word:
    """q_i의 앞 cells칸"""
    return tuple(seq.at(pair(i, j)) for j in range(cells))


def diagonal_limit(code: MachineCode, p: Stream, cells: int, stage: int) -> Word:
    """Componentwise limit of a sequence-emitting code, read at a late component."""
    return sequence_row(output_stream(code, p), stage, cells)


def sequence_changes(seq: Stream, cells: int, stages: int) -> int:
    """q_0..q_{stages-1}의 앞 cells칸이 바뀐 횟수"""
    rows = [sequence_row(seq, i, cells) for i in range(stages)]
    return sum(1 for a, b in zip(rows, rows[1:]) if a != b)
