"""
Machines that read a jump J(p) instead of p.

    jump_inverse_realizer()   J(p) ↦ p, via the comparators r⟨n,k⟩
    jump_normal_form(c)       J(p) ↦ lim-output of c on p, via the change monitors
    jump_transport(F)         J(p) ↦ J(F(p)), via precompose
    low_apply(x, budget)      limit machine for J⁻¹∘lim

All of them are cell natives except the low map; reading their output cell by cell
queries the jump only at synthesized indices, so a whitelist oracle answers exactly.
"""
from itertools import count
from typing import Iterator

from baire.stream import Stream
from baire.words import pair
from core.errors import NotInRange
from vm.machine import LimitRun, Simulation, run_limit
from vm.natives import TICK, Event, Reader, Source, cell_native, microcode, read_when_ready, tag_of, write_event
from vm.program import Instruction, Kind, MachineCode, Op, Program
from vm.synthesis import change_monitor, comparator, precompose

# p(n)의 후보 값 상한
PROBE_BOUND = 256
# 변경 감시기의 t를 두 배씩 늘리는 상한
MONITOR_TIME_LIMIT = 1 << 22


def _native_code(name: str, arg: int, kind: Kind, label: str) -> MachineCode:
    return MachineCode.of(Program([Instruction(Op.NATIVE, pair(tag_of(name), arg))]), kind, label)


# ──────────────────────────────────────────
# J⁻¹
# ──────────────────────────────────────────


def invert_cell(read: Reader, n: int) -> int:
    """min{k : J-name의 r⟨n,k⟩ 비트가 1}"""
    for k in range(PROBE_BOUND):
        if read(comparator(n, k)) == 1:
            return k
    raise NotInRange(f"no comparator for cell {n} answers 1 below {PROBE_BOUND}")


@cell_native("jump_inverse")
def _jump_inverse_cell(arg: int, read: Reader, n: int) -> int:
    return invert_cell(read, n)


def jump_inverse_realizer() -> MachineCode:
    return _native_code("jump_inverse", 0, Kind.MONOTONE, "J⁻¹")


def reconstruct(read: Reader) -> Stream:
    """J-name에서 되살린 입력"""
    return Stream(lambda n: invert_cell(read, n), label="J⁻¹(h)")


# ──────────────────────────────────────────
# 점프 정규형
# ──────────────────────────────────────────


def settled_value(c: MachineCode, read: Reader, n: int) -> int:
    """
    Doubles t until the monitor bit for "c changes cell n after step t" is 0, then
    simulates c on the reconstructed input for t steps and reads cell n.
    """
    x = reconstruct(read)
    t = 1
    while t <= MONITOR_TIME_LIMIT:
        if read(change_monitor(c, n, t)) == 0:
            sim = Simulation(c.program, x.at, Kind.LIMIT)
            sim.run_until(t)
            if n in sim.tape:
                return sim.tape[n]
        t *= 2
    raise NotInRange(f"{c.label} never settles cell {n} within {MONITOR_TIME_LIMIT} steps")


@cell_native("jump_normal_form")
def _jump_normal_form_cell(arg: int, read: Reader, n: int) -> int:
    return settled_value(MachineCode(index=arg, kind=Kind.LIMIT), read, n)


def jump_normal_form(c: MachineCode) -> MachineCode:
    c.require(Kind.LIMIT, Kind.FMC)
    return _native_code("jump_normal_form", c.index, Kind.MONOTONE, f"jnf({c.label})")


# ──────────────────────────────────────────
# 점프 수송 J(p) ↦ J(F(p))
# ──────────────────────────────────────────


@cell_native("jump_transport")
def _jump_transport_cell(arg: int, read: Reader, i: int) -> int:
    return read(precompose(i, MachineCode(index=arg, kind=Kind.MONOTONE)))


def jump_transport(f: MachineCode) -> MachineCode:
    f.require(Kind.MONOTONE)
    return _native_code("jump_transport", f.index, Kind.MONOTONE, f"J∘{f.label}∘J⁻¹")


# ──────────────────────────────────────────
# 낮은 사상 L = J⁻¹∘lim
# ──────────────────────────────────────────


@microcode("low_apply")
def _low_apply_body(arg: int, source: Source) -> Iterator[Event]:
    # 단계 s에서 셀 n ≤ s의 추측: p_s(r⟨n,k⟩) = 1 인 가장 작은 k ≤ s
    for s in count():
        for n in range(s + 1):
            for k in range(s + 1):
                index = pair(s, comparator(n, k))
                yield from read_when_ready(source, index)
                if source(index) == 1:
                    yield write_event(n, k)
                    break
            else:
                yield TICK


LOW = _native_code("low_apply", 0, Kind.LIMIT, "L")


def low_apply(x: Stream, budget: int) -> LimitRun:
    """Runs the limit machine for J⁻¹∘lim on ⟨p_0, p_1, ...⟩."""
    return run_limit(LOW, x, budget)
