"""
Execution of programs: the event interpreter, budgeted runs in the three output
disciplines, and machine-backed output streams.
"""
import threading
from typing import Iterator

from pydantic import BaseModel, Field

from baire.stream import Stream
from baire.words import Word, unpair
from core.errors import BudgetExhausted, NotInRange
from vm.natives import (
    EV_APPEND,
    EV_READ,
    EV_WRITE,
    TICK,
    Event,
    Source,
    append_event,
    lookup,
    read_event,
    strict_reader,
    write_event,
)
from vm.program import Kind, MachineCode, Op, Program

QUIET_FRACTION = 0.5
OUTPUT_BUDGET = 2_000_000


def execute(program: Program, source: Source) -> Iterator[Event]:
    """
    Runs `program` on the input behind `source`, yielding one event per step. The
    generator returns when the program halts. A READ whose cell is not available yet
    (source returns None) spends a step and retries.
    """
    instructions = program.instructions
    size = len(instructions)
    regs: dict[int, int] = {}
    pc = 0
    while 0 <= pc < size:
        op, a, b = instructions[pc]
        if op is Op.HALT:
            return
        if op is Op.INC:
            regs[a] = regs.get(a, 0) + 1
            pc += 1
            yield TICK
        elif op is Op.DEC:
            if regs.get(a, 0) > 0:
                regs[a] -= 1
            pc += 1
            yield TICK
        elif op is Op.JZ:
            pc = b if regs.get(a, 0) == 0 else pc + 1
            yield TICK
        elif op is Op.READ:
            index = regs.get(a, 0)
            value = source(index)
            if value is None:
                yield TICK
                continue
            regs[b] = value
            pc += 1
            yield read_event(index, value)
        elif op is Op.WRITE:
            pc += 1
            yield write_event(regs.get(a, 0), regs.get(b, 0))
        elif op is Op.APPEND:
            pc += 1
            yield append_event(regs.get(a, 0))
        else:
            tag, arg = unpair(a)
            spec = lookup(tag)
            pc += 1
            if spec is None:
                yield TICK
            else:
                yield from spec.body(arg, source)


def stream_source(p: Stream) -> Source:
    return p.at


class Simulation:
    """
    Step-by-step state of one run. Output events of the wrong discipline are counted
    as steps and otherwise ignored; `kind=None` ignores all output.
    """

    steps: int
    halted: bool
    reads: int
    tape: dict[int, int]
    output: list[int]

    def __init__(self, program: Program, source: Source, kind: Kind | None, *, record: bool = False):
        self._events = execute(program, source)
        self.kind = kind
        self.steps = 0
        self.halted = False
        self.reads = 0
        self.tape = {}
        self.output = []
        self.last_change: dict[int, int] = {}
        self.history: dict[int, list[tuple[int, int]]] | None = {} if record else None

    def step(self) -> Event | None:
        if self.halted:
            return None
        event = next(self._events, None)
        if event is None:
            self.halted = True
            return None
        self.steps += 1
        kind = event[0]
        if kind == EV_READ:
            self.reads += 1
        elif kind == EV_WRITE and self.kind in (Kind.LIMIT, Kind.FMC):
            cell, value = event[1], event[2]
            if self.tape.get(cell) != value:
                self.tape[cell] = value
                self.last_change[cell] = self.steps
                if self.history is not None:
                    self.history.setdefault(cell, []).append((self.steps, value))
        elif kind == EV_APPEND and self.kind is Kind.MONOTONE:
            self.output.append(event[1])
        return event

    def run(self, steps: int) -> bool:
        """최대 steps 스텝 진행; 정지했으면 True"""
        for _ in range(steps):
            if self.step() is None:
                return True
        return self.halted

    def run_until(self, budget: int) -> bool:
        """총 스텝 수가 budget에 이를 때까지 진행"""
        while self.steps < budget:
            if self.step() is None:
                return True
        return self.halted

    def halts_within(self, budget: int) -> bool:
        """정지 스텝(HALT은 0스텝)이 budget 이내인지; 필요하면 한 스텝 더 봅니다."""
        if self.run_until(budget):
            return True
        return self.step() is None


def simulate(code: MachineCode, p: Stream, *, record: bool = False) -> Simulation:
    return Simulation(code.program, stream_source(p), code.kind, record=record)


def halting_time(program: Program, p: Stream, budget: int) -> int | None:
    """budget 스텝 안에 정지하면 사용한 스텝 수"""
    sim = Simulation(program, stream_source(p), None)
    return sim.steps if sim.halts_within(budget) else None


def run_monotone(code: MachineCode, p: Stream, budget: int) -> Word:
    code.require(Kind.MONOTONE)
    sim = simulate(code, p)
    sim.run_until(budget)
    return tuple(sim.output)


class LimitRun(BaseModel):
    """Snapshot of a revisable output tape after a step budget."""

    tape: dict[int, int] = Field(default_factory=dict, description="cell → current value")
    history: dict[int, list[tuple[int, int]]] = Field(
        default_factory=dict, description="cell → (step, value) changes, steps counted from 1"
    )
    budget: int = Field(ge=0, description="step budget of the run")
    steps: int = Field(ge=0, description="steps actually spent")
    halted: bool = Field(default=False, description="whether the program halted within budget")
    quiet_fraction: float = Field(default=QUIET_FRACTION, gt=0, le=1, description="quiet window share of the budget")

    def value(self, cell: int) -> int | None:
        return self.tape.get(cell)

    def mind_changes(self, cell: int) -> int:
        return max(len(self.history.get(cell, ())) - 1, 0)

    def mind_change_counts(self, m: int) -> list[int]:
        return [self.mind_changes(cell) for cell in range(m)]

    @property
    def max_mind_changes(self) -> int:
        return max((self.mind_changes(cell) for cell in self.history), default=0)

    def last_change(self, cell: int) -> int | None:
        writes = self.history.get(cell)
        return writes[-1][0] if writes else None

    def _changes(self) -> list[tuple[int, int, bool]]:
        """(step, cell, 첫 쓰기 여부)를 스텝 순으로"""
        events = []
        for cell, writes in self.history.items():
            for i, (step, _) in enumerate(writes):
                events.append((step, cell, i == 0))
        events.sort()
        return events

    @property
    def global_mind_changes(self) -> int:
        """Revision episodes: maximal runs of revisions not interrupted by a fresh cell."""
        episodes = 0
        revising = False
        for _, _, fresh in self._changes():
            if fresh:
                revising = False
            elif not revising:
                episodes += 1
                revising = True
        return episodes

    @property
    def stabilized_prefix(self) -> int:
        horizon = self.budget * (1 - self.quiet_fraction)
        m = 0
        while m in self.tape:
            if not self.halted and (self.last_change(m) or 0) >= horizon:
                break
            m += 1
        return m

    def written_prefix(self, m: int) -> Word:
        """셀 0..m-1 중 연속으로 쓰여 있는 앞부분"""
        out = []
        for cell in range(m):
            if cell not in self.tape:
                break
            out.append(self.tape[cell])
        return tuple(out)

    def trace_records(self) -> list[dict]:
        records = []
        current: dict[int, int] = {}
        for step, cell, _ in self._changes():
            new = dict(self.history[cell])[step]
            records.append({"step": step, "cell": cell, "old": current.get(cell), "new": new})
            current[cell] = new
        return records


def run_limit(code: MachineCode, p: Stream, budget: int, quiet_fraction: float = QUIET_FRACTION) -> LimitRun:
    code.require(Kind.LIMIT, Kind.FMC)
    sim = simulate(code, p, record=True)
    halted = sim.run_until(budget)
    return LimitRun(
        tape=dict(sim.tape),
        history={cell: list(writes) for cell, writes in (sim.history or {}).items()},
        budget=budget,
        steps=sim.steps,
        halted=halted,
        quiet_fraction=quiet_fraction,
    )


# ──────────────────────────────────────────
# 출력 스트림
# ──────────────────────────────────────────


class _MachineOutput:
    """단조 기계의 출력을 필요한 만큼만 시뮬레이션합니다."""

    def __init__(self, code: MachineCode, p: Stream, budget: int):
        self._sim = simulate(code, p)
        self._budget = budget
        self._lock = threading.Lock()
        self._label = code.label

    def value(self, m: int) -> int:
        sim = self._sim
        with self._lock:
            while len(sim.output) <= m:
                if sim.halted:
                    raise NotInRange(f"{self._label} halted after {len(sim.output)} output cells")
                if sim.steps >= self._budget:
                    raise BudgetExhausted(
                        f"{self._label} produced {len(sim.output)} cells in {sim.steps} steps", spent=sim.steps
                    )
                sim.step()
            return sim.output[m]


def output_stream(code: MachineCode, p: Stream, budget: int = OUTPUT_BUDGET) -> Stream:
    """
    The output of a monotone code as a Stream. Cell natives are evaluated by random
    access; other programs are simulated on demand and charge `budget`.
    """
    code.require(Kind.MONOTONE)
    native = code.program.single_native()
    if native is not None:
        spec = lookup(native[0])
        if spec is not None and spec.stream_form is not None:
            return spec.stream_form(native[1], p)
        if spec is not None and spec.cell is not None:
            cell, arg, read = spec.cell, native[1], strict_reader(p.at)
            return Stream(lambda m: cell(arg, read, m), label=f"{code.label}({p.label})")
    backing = _MachineOutput(code, p, budget)
    return Stream(backing.value, label=f"{code.label}({p.label})")
