"""
The shipped machines: bytecode programs from data/programs and the native limit
machines, each registered with a settle certificate.

Limit machines: E, copier, lim, running_max, first_nonzero (plus the cell-0 reviser).
Monotone machines: identity copier, head reader. Halting-only: even, loop, halt.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Iterator

from baire.stream import Stream
from baire.words import pair
from core.errors import OracleGap
from core.utils import resolve_data_path
from vm.certificates import ReadHorizonCertificate, described, register_certificate
from vm.natives import Event, Source, microcode, read_when_ready, tag_of, write_event
from vm.program import Assembler, Instruction, Kind, MachineCode, Op, Program, parse_program


@lru_cache(maxsize=None)
def load_program(name: str) -> Program:
    path = resolve_data_path(name if name.endswith(".prog") else f"{name}.prog")
    return parse_program(path.read_text(encoding="utf-8"))


# ──────────────────────────────────────────
# 네이티브 limit 기계
# ──────────────────────────────────────────


@microcode("lim_map")
def _lim_map_body(arg: int, source: Source) -> Iterator[Event]:
    for s in count():
        for n in range(s + 1):
            index = pair(s, n)
            yield from read_when_ready(source, index)
            yield write_event(n, source(index))


@microcode("running_max")
def _running_max_body(arg: int, source: Source) -> Iterator[Event]:
    best = None
    for j in count():
        yield from read_when_ready(source, j)
        value = source(j)
        if best is None or value > best:
            best = value
            for i in range(j):
                yield write_event(i, best)
        yield write_event(j, best)


@microcode("first_nonzero")
def _first_nonzero_body(arg: int, source: Source) -> Iterator[Event]:
    found = 0
    for j in count():
        yield from read_when_ready(source, j)
        if not found and source(j) != 0:
            found = j + 1
            for i in range(j):
                yield write_event(i, found)
        yield write_event(j, found)


def _native_code(name: str, kind: Kind = Kind.LIMIT) -> MachineCode:
    return MachineCode.of(Program([Instruction(Op.NATIVE, pair(tag_of(name), 0))]), kind, name)


E = MachineCode.of(load_program("E"), Kind.FMC, "E")
COPIER = MachineCode.of(load_program("copier"), Kind.LIMIT, "copier")
LIM = _native_code("lim_map")
RUNNING_MAX = _native_code("running_max")
FIRST_NONZERO = _native_code("first_nonzero", Kind.FMC)
REVISER = MachineCode.of(load_program("reviser"), Kind.FMC, "reviser")

IDENTITY = MachineCode.of(load_program("monotone_copier"), Kind.MONOTONE, "identity")
HEAD = MachineCode.of(load_program("head"), Kind.MONOTONE, "head")

EVEN = load_program("even")
LOOP = load_program("loop")
HALT_NOW = load_program("halt")

LIMIT_MACHINES: dict[str, MachineCode] = {
    "E": E,
    "copier": COPIER,
    "lim": LIM,
    "running_max": RUNNING_MAX,
    "first_nonzero": FIRST_NONZERO,
    "reviser": REVISER,
}
MONOTONE_MACHINES: dict[str, MachineCode] = {"identity": IDENTITY, "head": HEAD}

# 유한 마음 바꿈 기계의 선언된 전역 마음 바꿈 상한
FMC_BOUNDS: dict[str, int] = {"E": 1, "first_nonzero": 1, "reviser": 1}


def eq_test_code() -> MachineCode:
    """0̂ 판정: 0̂ 에서 1̂, 그 밖에서 0̂ (마음 바꿈 한 번 이하)"""
    return E


def machine_by_name(name: str) -> MachineCode:
    for table in (LIMIT_MACHINES, MONOTONE_MACHINES):
        if name in table:
            return table[name]
    raise KeyError(name)


# ──────────────────────────────────────────
# 정착 인증서
# ──────────────────────────────────────────


def _fnz(p: Stream) -> int | None:
    return described(p).first_nonzero()


def _e_final(p: Stream, n: int) -> int:
    return 1 if _fnz(p) is None else 0


def _e_horizon(p: Stream, n: int) -> int:
    f = _fnz(p)
    return n + 1 if f is None else f + 1


def _max_final(p: Stream, n: int) -> int:
    return described(p).maximum()[0]


def _max_horizon(p: Stream, n: int) -> int:
    return max(n, described(p).maximum()[1]) + 1


def _fnz_final(p: Stream, n: int) -> int:
    f = _fnz(p)
    return 0 if f is None else f + 1


def _fnz_horizon(p: Stream, n: int) -> int:
    f = _fnz(p)
    return n + 1 if f is None else f + 1


def _lim_stage(x: Stream, n: int) -> int:
    settle = x.settle_index(n)
    if settle is None:
        raise OracleGap(f"sequence {x.label} carries no settle hint")
    return max(settle, n)


def _lim_final(x: Stream, n: int) -> int:
    return x.at(pair(_lim_stage(x, n), n))


def _lim_horizon(x: Stream, n: int) -> int:
    s = _lim_stage(x, n)
    return (s + 1) * (s + 2) // 2


register_certificate(E.index, ReadHorizonCertificate(E.index, _e_final, _e_horizon))
register_certificate(COPIER.index, ReadHorizonCertificate(COPIER.index, lambda p, n: p.at(n), lambda p, n: n + 1))
register_certificate(RUNNING_MAX.index, ReadHorizonCertificate(RUNNING_MAX.index, _max_final, _max_horizon))
register_certificate(FIRST_NONZERO.index, ReadHorizonCertificate(FIRST_NONZERO.index, _fnz_final, _fnz_horizon))
register_certificate(LIM.index, ReadHorizonCertificate(LIM.index, _lim_final, _lim_horizon))


# ──────────────────────────────────────────
# 상수 limit 기계
# ──────────────────────────────────────────


def constant_limit_program(value: int) -> Program:
    """모든 셀에 value를 쓰는 limit 프로그램"""
    asm = Assembler().inc(2, value)
    asm.label("loop").write(1, 2).inc(1).jump("loop")
    return asm.build()


def constant_limit_machine(value: int | Fraction) -> MachineCode:
    if isinstance(value, Fraction):
        from metric.rationals import rational_index

        value = rational_index(value)
    code = MachineCode.of(constant_limit_program(value), Kind.LIMIT, f"const:{value}")
    register_certificate(
        code.index, ReadHorizonCertificate(code.index, lambda p, n, v=value: v, lambda p, n: 0)
    )
    return code


# ──────────────────────────────────────────
# 계산 가능한 단조 기계 패밀리
# ──────────────────────────────────────────


def shift_add_program(shift: int, add: int) -> Program:
    """p ↦ (p(j + shift) + add)_j"""
    asm = Assembler().inc(1, shift)
    asm.label("loop").read(1, 2).inc(2, add).append(2).inc(1).jump("loop")
    return asm.build()


def shift_add_machine(shift: int, add: int) -> MachineCode:
    return MachineCode.of(shift_add_program(shift, add), Kind.MONOTONE, f"shift{shift}+{add}")


def odd_copier() -> MachineCode:
    """⟨a, p⟩ ↦ p (짝수 칸은 읽지 않음)"""
    asm = Assembler().inc(1)
    asm.label("loop").read(1, 2).append(2).inc(1, 2).jump("loop")
    return MachineCode.of(asm.build(), Kind.MONOTONE, "odd")
