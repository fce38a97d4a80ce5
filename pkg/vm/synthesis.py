"""
Machine synthesis: concrete program transformations that produce the auxiliary
machines the constructions query the jump about, together with the exact verdicts a
whitelist oracle gives for them.

    comparator(n, k)        halts iff p(n) = k
    change_monitor(c, n, t) halts iff limit machine c changes cell n after step t
    sequence_monitor(F,n,t) halts iff F(p)'s components differ from component t at cell n
    probe(a, b)             halts iff some component of p has value b at position a
    zero_input(i)           halts on every input iff machine i halts on 0̂
    precompose(i, F)        halts on p iff machine i halts on F(p)
    member(S)               halts iff p(0) ∈ S
"""
from functools import lru_cache
from typing import Iterator, Sequence

from baire.stream import ZERO, Stream
from baire.words import Word, decode_sequence, encode_sequence, pair, unpair
from core.errors import OracleGap
from vm.certificates import certificate_for
from vm.machine import Simulation, execute, output_stream
from vm.natives import TICK, Blocked, Event, Source, microcode, read_event, strict_reader, tag_of
from vm.oracle import Family, Oracle, Universal, Verdict, record_synthesized, register_family
from vm.program import Assembler, Instruction, Kind, MachineCode, Op, Program, decode_program, encode_program


def source_stream(source: Source, label: str = "input") -> Stream:
    """Source를 Stream으로; 준비되지 않은 셀은 Blocked를 던집니다."""
    return Stream(strict_reader(source), label=label)


def _forever() -> Iterator[Event]:
    while True:
        yield TICK


def _native_program(name: str, arg: int) -> int:
    return encode_program(Program([Instruction(Op.NATIVE, pair(tag_of(name), arg))]))


# ──────────────────────────────────────────
# 비교기 r⟨n,k⟩
# ──────────────────────────────────────────


def comparator_program(n: int, k: int) -> Program:
    asm = Assembler().inc(1, n).read(1, 2)
    for _ in range(k):
        asm.jz(2, "loop").dec(2)
    asm.jz(2, "END")
    asm.label("loop").jump("loop")
    return asm.build()


@lru_cache(maxsize=None)
def comparator(n: int, k: int) -> int:
    index = encode_program(comparator_program(n, k))
    record_synthesized(index, "comparator", (n, k))
    return index


def _comparator_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    n, k = params
    return Verdict.HALTS if p.at(n) == k else Verdict.LOOPS


def _comparator_universal(params: tuple, word: Word, oracle: Oracle) -> Universal:
    n, k = params
    if len(word) <= n:
        return Universal.MIXED
    return Universal.ALL if word[n] == k else Universal.NONE


register_family(Family("comparator", _comparator_verdict, universal=_comparator_universal))


# ──────────────────────────────────────────
# 변경 감시기
# ──────────────────────────────────────────


def change_monitor(c: MachineCode, n: int, t: int) -> int:
    c.require(Kind.LIMIT, Kind.FMC)
    return _native_program("change_monitor", pair(c.index, pair(n, t)))


def _unpack_monitor(arg: int) -> tuple:
    index, rest = unpair(arg)
    n, t = unpair(rest)
    return index, n, t


@microcode("change_monitor")
def _change_monitor_body(arg: int, source: Source) -> Iterator[Event]:
    index, n, t = _unpack_monitor(arg)
    sim = Simulation(decode_program(index), source, Kind.LIMIT)
    while sim.step() is not None:
        if sim.steps > t and sim.last_change.get(n) == sim.steps:
            return
        yield TICK
    yield from _forever()


def _change_monitor_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    index, n, t = params
    settle = certificate_for(index).settle_step(p, n)
    if t >= settle:
        return Verdict.LOOPS
    sim = Simulation(decode_program(index), p.at, Kind.LIMIT)
    sim.run_until(settle)
    last = sim.last_change.get(n)
    return Verdict.HALTS if last is not None and last > t else Verdict.LOOPS


register_family(
    Family("change_monitor", _change_monitor_verdict, native=_unpack_monitor), tag=tag_of("change_monitor")
)


# ──────────────────────────────────────────
# 수열 감시기
# ──────────────────────────────────────────


def sequence_monitor(f: MachineCode, n: int, t: int) -> int:
    f.require(Kind.MONOTONE)
    return _native_program("sequence_monitor", pair(f.index, pair(n, t)))


@microcode("sequence_monitor")
def _sequence_monitor_body(arg: int, source: Source) -> Iterator[Event]:
    index, n, t = _unpack_monitor(arg)
    out = output_stream(MachineCode(index=index, kind=Kind.MONOTONE), source_stream(source))
    first = None
    i = t
    while True:
        try:
            value = out.at(pair(i, n))
        except Blocked:
            yield TICK
            continue
        if first is None:
            first = value
        elif value != first:
            return
        i += 1
        yield TICK


def _sequence_monitor_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    index, n, t = params
    settle = certificate_for(index).settle_component(p, n)
    if t >= settle:
        return Verdict.LOOPS
    out = output_stream(MachineCode(index=index, kind=Kind.MONOTONE), p)
    first = out.at(pair(t, n))
    changed = any(out.at(pair(i, n)) != first for i in range(t + 1, settle + 1))
    return Verdict.HALTS if changed else Verdict.LOOPS


register_family(
    Family("sequence_monitor", _sequence_monitor_verdict, native=_unpack_monitor), tag=tag_of("sequence_monitor")
)


# ──────────────────────────────────────────
# 탐침 probe(a, b)
# ──────────────────────────────────────────


def probe_program(a: int, b: int) -> Program:
    # r2 = ⟨n,a⟩, r4 = n + a, r3 = 읽은 값
    asm = Assembler().inc(2, pair(0, a)).inc(4, a)
    asm.label("loop").read(2, 3)
    for _ in range(b):
        asm.jz(3, "next").dec(3)
    asm.jz(3, "END")
    asm.label("next").inc(4)
    asm.label("add").jz(4, "back").dec(4).inc(2).inc(5).jump("add")
    asm.label("back").jz(5, "loop").dec(5).inc(4).jump("back")
    return asm.build()


@lru_cache(maxsize=None)
def probe(a: int, b: int) -> int:
    index = encode_program(probe_program(a, b))
    record_synthesized(index, "probe", (a, b))
    return index


def _probe_candidates(a: int, p: Stream) -> range:
    """성분 n의 a 위치만 확인하면 되는 n의 범위"""
    settle = p.settle_index(a)
    if settle is not None:
        return range(settle + 1)
    d = p.description
    if d is not None:
        n = 0
        while pair(n, a) < len(d.head):
            n += 1
        return range(n + 2 * len(d.period))
    raise OracleGap(f"probe verdict needs a settle hint or a finite description of {p.label}")


def _probe_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    a, b = params
    hit = any(p.at(pair(n, a)) == b for n in _probe_candidates(a, p))
    return Verdict.HALTS if hit else Verdict.LOOPS


def _probe_extension(params: tuple, committed: Sequence[Stream], fixed: Word) -> Verdict:
    a, b = params
    if any(s.at(a) == b for s in committed):
        return Verdict.HALTS
    if a >= len(fixed) or fixed[a] == b:
        return Verdict.HALTS
    return Verdict.LOOPS


register_family(Family("probe", _probe_verdict, extension=_probe_extension))


# ──────────────────────────────────────────
# 입력 무시 변환 r(i)
# ──────────────────────────────────────────


def zero_input_program(program: Program) -> Program:
    """READ a r를 `r := 0` 루프로 바꾸고 점프 위치를 다시 매깁니다."""
    positions: list[int] = []
    size = 0
    for ins in program:
        positions.append(size)
        size += 3 if ins.op is Op.READ else 1
    end = size

    def relocate(target: int) -> int:
        return positions[target] if target < len(positions) else end

    out: list[Instruction] = []
    for ins in program:
        if ins.op is Op.READ:
            here = len(out)
            out += [
                Instruction(Op.JZ, ins.b, here + 3),
                Instruction(Op.DEC, ins.b),
                Instruction(Op.JZ, 0, here),
            ]
        elif ins.op is Op.JZ:
            out.append(Instruction(Op.JZ, ins.a, relocate(ins.b)))
        else:
            out.append(ins)
    return Program(out)


def zero_input(i: int) -> int:
    program = decode_program(i)
    if program.uses(Op.NATIVE):
        return _native_program("zero_input", i)
    index = encode_program(zero_input_program(program))
    if index != i:
        # READ가 없으면 변환 결과가 자기 자신입니다.
        record_synthesized(index, "zero_input", (i,))
    return index


@microcode("zero_input")
def _zero_input_body(arg: int, source: Source) -> Iterator[Event]:
    yield from execute(decode_program(arg), ZERO.at)


def _zero_input_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    return oracle.query(params[0], ZERO)


def _zero_input_universal(params: tuple, word: Word, oracle: Oracle) -> Universal:
    return Universal.ALL if oracle.query(params[0], ZERO) is Verdict.HALTS else Universal.NONE


register_family(
    Family("zero_input", _zero_input_verdict, universal=_zero_input_universal, native=lambda arg: (arg,)),
    tag=tag_of("zero_input"),
)


# ──────────────────────────────────────────
# 전합성 precompose(i, F)
# ──────────────────────────────────────────


def precompose(i: int, f: MachineCode) -> int:
    f.require(Kind.MONOTONE)
    return _native_program("precompose", pair(i, f.index))


@microcode("precompose")
def _precompose_body(arg: int, source: Source) -> Iterator[Event]:
    i, f_index = unpair(arg)
    out = output_stream(MachineCode(index=f_index, kind=Kind.MONOTONE), source_stream(source))

    def inner(m: int) -> int | None:
        try:
            return out.at(m)
        except Blocked:
            return None

    yield from execute(decode_program(i), inner)


def _precompose_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    i, f_index = params
    return oracle.query(i, output_stream(MachineCode(index=f_index, kind=Kind.MONOTONE), p))


register_family(Family("precompose", _precompose_verdict, native=unpair), tag=tag_of("precompose"))


# ──────────────────────────────────────────
# 유한 집합 소속 member(S)
# ──────────────────────────────────────────


def member(values: Sequence[int]) -> int:
    return _native_program("member", encode_sequence(sorted(set(values))))


@microcode("member")
def _member_body(arg: int, source: Source) -> Iterator[Event]:
    values = set(decode_sequence(arg))
    while (first := source(0)) is None:
        yield TICK
    yield read_event(0, first)
    if first not in values:
        yield from _forever()


def _member_params(arg: int) -> tuple:
    return (frozenset(decode_sequence(arg)),)


def _member_verdict(params: tuple, p: Stream, oracle: Oracle) -> Verdict:
    return Verdict.HALTS if p.at(0) in params[0] else Verdict.LOOPS


def _member_universal(params: tuple, word: Word, oracle: Oracle) -> Universal:
    if word:
        return Universal.ALL if word[0] in params[0] else Universal.NONE
    return Universal.MIXED if params[0] else Universal.NONE


register_family(
    Family(
        "member",
        _member_verdict,
        universal=_member_universal,
        members=lambda params: params[0],
        native=_member_params,
    ),
    tag=tag_of("member"),
)
