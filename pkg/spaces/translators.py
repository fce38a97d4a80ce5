"""
Translators: machine codes witnessing δ_X ≤ δ_Y, checked by decoding both sides.

The chain δ_J ≤ δ_H ≤ δ ≤ δ^Δ ≤ δ^L ≤ δ′ is realized over any base representation by

    J → H    jump_transport(constant embedding)     J(p) ↦ J(⟨p, p, ...⟩)
    H → δ    jump_normal_form(lim)                  J(x) ↦ lim x
    δ → Δ    constant embedding                     p ↦ ⟨p, p, ...⟩
    Δ → L    jumps of approximations                x ↦ ⟨J_i(x_i)⟩, J_i = i-step halting
    L → ′    limits of jump inverses                y ↦ ⟨n ↦ min{k < i : y_i(r⟨n,k⟩) = 1}⟩

all of them computable.
"""
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from baire.stream import Stream, constant_sequence, interleave2, interleave_omega
from baire.words import pair, unpair
from vm.certificates import FunctionCertificate, register_certificate
from vm.machine import halting_time, output_stream
from vm.natives import Reader, cell_native, tag_of
from vm.program import Instruction, Kind, MachineCode, Op, Program, decode_program
from vm.synthesis import comparator
from spaces.representations import Representation, jump
from transforms.witnesses import TransparencyWitness


class Regime(str, Enum):
    COMPUTABLE = "computable"
    LIMIT = "limit"
    ORACLE = "oracle"


def native_code(name: str, arg: int = 0, kind: Kind = Kind.MONOTONE, label: str | None = None) -> MachineCode:
    program = Program([Instruction(Op.NATIVE, pair(tag_of(name), arg))])
    return MachineCode.of(program, kind, label or name)


class Translator(BaseModel):
    """δ_source ≤ δ_target 의 증인 코드"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str = Field(description="display name, e.g. J→H")
    source: Representation = Field(description="representation of the input names")
    target: Representation = Field(description="representation of the output names")
    code: MachineCode = Field(description="monotone code, or a limit code for the limit regime")
    regime: Regime = Field(default=Regime.COMPUTABLE, description="what it takes to run the code")
    oracle: str | None = Field(default=None, description="oracle description for the oracle regime")

    @property
    def output_representation(self) -> Representation:
        """limit 코드의 출력은 target′ 이름으로 읽습니다."""
        if self.code.kind is Kind.MONOTONE:
            return self.target
        return jump(self.target, "lim")

    def apply(self, name: Stream) -> Stream:
        if self.code.kind is Kind.MONOTONE:
            return output_stream(self.code, name)
        from transforms.normal_forms import limit_to_monotone

        return output_stream(limit_to_monotone(self.code), name)

    def check(self, name: Stream, n: int) -> bool:
        """Both sides decoded at scale n describe the same point."""
        expected = self.source.decode(name, n)
        got = self.output_representation.decode(self.apply(name), n)
        return self.target.consistent(expected, got)

    def then(self, other: "Translator") -> "Translator":
        """self 다음에 other"""
        code = compose(other.code, self.code)
        regime = max(self.regime, other.regime, key=list(Regime).index)
        return Translator(
            label=f"{self.label};{other.label}",
            source=self.source,
            target=other.target,
            code=code,
            regime=regime,
            oracle=self.oracle or other.oracle,
        )


# ──────────────────────────────────────────
# 네이티브 실현자
# ──────────────────────────────────────────


def _constant_stream(arg: int, p: Stream) -> Stream:
    return constant_sequence(p)


@cell_native("constant_embedding", stream_form=_constant_stream)
def _constant_embedding_cell(arg: int, read: Reader, m: int) -> int:
    return read(unpair(m)[1])


@cell_native("diagonal", stream_form=lambda arg, p: interleave2(p, p))
def _diagonal_cell(arg: int, read: Reader, m: int) -> int:
    return read(m // 2)


def _bounded_jump(x: Stream, i: int) -> Stream:
    """J_i(x)(e) = 1 iff 기계 e가 x에서 i 스텝 안에 정지"""
    return Stream(lambda e: int(halting_time(decode_program(e), x, i) is not None), label=f"J_{i}({x.label})")


def _approximations_stream(arg: int, x: Stream) -> Stream:
    return interleave_omega(lambda i: _bounded_jump(x.component(i), i), label=f"Japprox({x.label})")


@cell_native("jump_of_approximations", stream_form=_approximations_stream)
def _jump_of_approximations_cell(arg: int, read: Reader, m: int) -> int:
    i, e = unpair(m)
    component = Stream(lambda k: read(pair(i, k)), label=f"x[{i}]")
    return _bounded_jump(component, i).at(e)


def _inverse_guess(read_component: Reader, i: int, n: int) -> int:
    for k in range(i):
        if read_component(comparator(n, k)) == 1:
            return k
    return 0


def _limit_inverse_stream(arg: int, y: Stream) -> Stream:
    def component(i: int) -> Stream:
        yi = y.component(i)
        return Stream(lambda n: _inverse_guess(yi.at, i, n), label=f"J⁻¹({yi.label})")

    return interleave_omega(component, label=f"limJ⁻¹({y.label})")


@cell_native("limit_of_jump_inverse", stream_form=_limit_inverse_stream)
def _limit_of_jump_inverse_cell(arg: int, read: Reader, m: int) -> int:
    i, n = unpair(m)
    return _inverse_guess(lambda e: read(pair(i, e)), i, n)


def _compose_stream(arg: int, p: Stream) -> Stream:
    g, f = unpair(arg)
    inner = output_stream(MachineCode(index=f, kind=Kind.MONOTONE), p)
    return output_stream(MachineCode(index=g, kind=Kind.MONOTONE), inner)


@cell_native("compose_monotone", stream_form=_compose_stream)
def _compose_cell(arg: int, read: Reader, m: int) -> int:
    return _compose_stream(arg, Stream(read, label="p")).at(m)


CONSTANT_EMBEDDING = native_code("constant_embedding", label="const-seq")
DIAGONAL = native_code("diagonal", label="Δ")
JUMP_OF_APPROXIMATIONS = native_code("jump_of_approximations", label="Japprox")
LIMIT_OF_JUMP_INVERSE = native_code("limit_of_jump_inverse", label="limJ⁻¹")

# 상수 수열은 성분 0부터 정착합니다.
register_certificate(CONSTANT_EMBEDDING.index, FunctionCertificate(lambda p, n: 0))


def compose(g: MachineCode, f: MachineCode) -> MachineCode:
    """g∘f for monotone codes"""
    g.require(Kind.MONOTONE)
    f.require(Kind.MONOTONE)
    return native_code("compose_monotone", pair(g.index, f.index), label=f"{g.label}∘{f.label}")


# ──────────────────────────────────────────
# 사슬과 들어올림
# ──────────────────────────────────────────


def lift_endofunctor(f: MachineCode, witness: TransparencyWitness) -> MachineCode:
    """A code G with T∘G = F∘T, for the map T the witness covers."""
    return witness.translator(f)


def lift_translator(t: Translator, witness: TransparencyWitness, tag: str) -> Translator:
    """δ_X ≤ δ_Y 에서 δ_X^T ≤ δ_Y^T 로"""
    return Translator(
        label=f"{t.label}^{witness.subject}",
        source=jump(t.source, tag),  # type: ignore[arg-type]
        target=jump(t.target, tag),  # type: ignore[arg-type]
        code=lift_endofunctor(t.code, witness),
        regime=t.regime,
    )


CHAIN_ORDER: tuple[str, ...] = ("J→H", "H→δ", "δ→Δ", "Δ→L", "L→′")


def chain_translators(base: Representation) -> dict[str, Translator]:
    from gallery.machines import LIM
    from transforms.jump import jump_normal_form, jump_transport

    j, h = jump(base, "J"), jump(base, "H")
    delta, low, prime = jump(base, "lim_Δ"), jump(base, "L"), jump(base, "lim")
    return {
        "J→H": Translator(label="J→H", source=j, target=h, code=jump_transport(CONSTANT_EMBEDDING)),
        "H→δ": Translator(label="H→δ", source=h, target=base, code=jump_normal_form(LIM)),
        "δ→Δ": Translator(label="δ→Δ", source=base, target=delta, code=CONSTANT_EMBEDDING),
        "Δ→L": Translator(label="Δ→L", source=delta, target=low, code=JUMP_OF_APPROXIMATIONS),
        "L→′": Translator(label="L→′", source=low, target=prime, code=LIMIT_OF_JUMP_INVERSE),
    }


def direct_translators(base: Representation) -> dict[str, Translator]:
    """사슬을 건너뛰는 직접 번역기 (사슬 합성과 비교용)"""
    from transforms.jump import jump_inverse_realizer

    return {
        "J→δ": Translator(label="J→δ", source=jump(base, "J"), target=base, code=jump_inverse_realizer()),
        "δ→′": Translator(label="δ→′", source=base, target=jump(base, "lim"), code=CONSTANT_EMBEDDING),
    }


def closure_translators(base: Representation) -> dict[str, Translator]:
    """δ ≤ δ^Δ and δ^Δ ≤ (δ^Δ)^Δ, both by constant sequences."""
    delta = jump(base, "lim_Δ")
    return {
        "δ→Δ": Translator(label="δ→Δ", source=base, target=delta, code=CONSTANT_EMBEDDING),
        "Δ→ΔΔ": Translator(label="Δ→ΔΔ", source=delta, target=jump(delta, "lim_Δ"), code=CONSTANT_EMBEDDING),
    }
