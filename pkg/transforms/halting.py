"""
Normal form for functions computable with the halting problem.

If F(p) = S⟨0′, p⟩ for a monotone S, then F = G∘H with G = S∘⟨R, T⟩, where an
H-name of p is a jump J(x) of a sequence x converging to p, and

    R(h)(i) = h(zero_input(i))      machine zero_input(i) halts on x iff i halts on 0̂
    T(h)    = jump_normal_form(lim) applied to h, which recovers lim x = p
"""
from baire.stream import ZERO, Stream, interleave2
from baire.words import pair
from core.errors import OracleGap
from vm.machine import output_stream
from vm.natives import Reader, cell_native, tag_of
from vm.oracle import Oracle
from vm.program import Instruction, Kind, MachineCode, Op, Program
from vm.synthesis import zero_input

REQUIRED_FAMILIES = ("zero_input", "comparator", "change_monitor")


def halting_bits(h: Stream) -> Stream:
    """R(h): H-name에서 읽은 0′"""
    return Stream(lambda i: h.at(zero_input(i)), label=f"R({h.label})")


def limit_part(h: Stream) -> Stream:
    """T(h) = lim J⁻¹(h)"""
    from gallery.machines import LIM
    from transforms.jump import jump_normal_form

    return output_stream(jump_normal_form(LIM), h)


def _halting_stream(arg: int, h: Stream) -> Stream:
    s = MachineCode(index=arg, kind=Kind.MONOTONE)
    return output_stream(s, interleave2(halting_bits(h), limit_part(h)))


@cell_native("halting_normal_form", stream_form=_halting_stream)
def _halting_normal_form_cell(arg: int, read: Reader, m: int) -> int:
    return _halting_stream(arg, Stream(read, label="h")).at(m)


def halting_normal_form(s: MachineCode, oracle: Oracle) -> MachineCode:
    s.require(Kind.MONOTONE)
    families = getattr(oracle, "families", None)
    if families is not None:
        missing = [name for name in REQUIRED_FAMILIES if name not in families]
        if missing:
            raise OracleGap(f"{oracle.describe()} does not cover {', '.join(missing)}")
    program = Program([Instruction(Op.NATIVE, pair(tag_of("halting_normal_form"), s.index))])
    return MachineCode.of(program, Kind.MONOTONE, f"{s.label}∘⟨R,T⟩")


def halting_problem(oracle: Oracle) -> Stream:
    """0′(i) = 1 iff 기계 i가 0̂에서 정지"""
    return Stream(lambda i: oracle.query(i, ZERO).bit, label=f"0′[{oracle.describe()}]")


def relative_output(s: MachineCode, p: Stream, oracle: Oracle) -> Stream:
    """F(p) = S⟨0′, p⟩ 를 직접 계산합니다 (비교용)."""
    return output_stream(s, interleave2(halting_problem(oracle), p))
