"""
Transparency witnesses: for a map T and a computable F, a computable G with
T∘G = F∘T, built from F's code.

    lim, lim_Δ   G applies F to every component
    J⁻¹          G = jump_transport(F)
    L            G applies jump_transport(F) to every component
    H⁻¹          G = jump_transport(componentwise F)
"""
from typing import Callable, NamedTuple

from baire.stream import Stream, interleave_omega
from baire.words import pair, unpair
from vm.machine import output_stream
from vm.natives import Reader, cell_native, tag_of
from vm.program import Instruction, Kind, MachineCode, Op, Program
from transforms.jump import jump_transport


def _componentwise_stream(arg: int, x: Stream) -> Stream:
    f = MachineCode(index=arg, kind=Kind.MONOTONE)
    return interleave_omega(lambda i: output_stream(f, x.component(i)), label=f"cw({x.label})")


@cell_native("componentwise", stream_form=_componentwise_stream)
def _componentwise_cell(arg: int, read: Reader, m: int) -> int:
    i, k = unpair(m)
    component = Stream(lambda j: read(pair(i, j)), label=f"x[{i}]")
    return output_stream(MachineCode(index=arg, kind=Kind.MONOTONE), component).at(k)


def componentwise(f: MachineCode) -> MachineCode:
    """⟨p_0, p_1, ...⟩ ↦ ⟨F(p_0), F(p_1), ...⟩"""
    f.require(Kind.MONOTONE)
    program = Program([Instruction(Op.NATIVE, pair(tag_of("componentwise"), f.index))])
    return MachineCode.of(program, Kind.MONOTONE, f"cw({f.label})")


class TransparencyWitness(NamedTuple):
    subject: str
    translator: Callable[[MachineCode], MachineCode]


WITNESSES: dict[str, TransparencyWitness] = {
    "lim": TransparencyWitness("lim", componentwise),
    "lim_Δ": TransparencyWitness("lim_Δ", componentwise),
    "J⁻¹": TransparencyWitness("J⁻¹", jump_transport),
    "L": TransparencyWitness("L", lambda f: componentwise(jump_transport(f))),
    "H⁻¹": TransparencyWitness("H⁻¹", lambda f: jump_transport(componentwise(f))),
}


def witness_for(subject: str) -> TransparencyWitness:
    if subject not in WITNESSES:
        raise KeyError(f"no transparency witness for {subject!r}; known: {', '.join(WITNESSES)}")
    return WITNESSES[subject]
