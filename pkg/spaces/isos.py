"""
Jumps commute with products, infima and (up to an oracle) function spaces.

    (X × Y)′ ≅ X′ × Y′        unzip / zip of sequences of pairs
    (X ∧ Y)′ ≅ X′ ∧ Y′        the same codes over meet representations
    C(X, Y)′ → C(X′, Y′)      computable: apply the i-th code to the i-th component
    C(X′, Y′) → C(X, Y)′      needs the jump: uniform limit control under a whitelist
"""
from typing import NamedTuple

from baire.stream import Stream, constant_sequence, interleave2, interleave_omega, split2
from baire.words import Word, decode_sequence, pair, unpair
from core.utils import log_message
from spaces.representations import (
    FunctionRepresentation,
    MeetRepresentation,
    ProductRepresentation,
    Representation,
    jump,
)
from spaces.translators import Regime, Translator, native_code
from transforms.control import uniform_limit_control
from vm.natives import Reader, cell_native
from vm.oracle import WhitelistOracle, whitelist_from_arg
from vm.phi import CUR, EV, PHI_TO_SEQ, SEQ_TO_PHI, PhiCode, rank
from vm.program import Kind, MachineCode

# ──────────────────────────────────────────
# 곱과 하한
# ──────────────────────────────────────────


def _unzip_stream(arg: int, x: Stream) -> Stream:
    def half(side: int) -> Stream:
        settle = (lambda k: x.settle_index(2 * k + side)) if x.has_settle else None
        return interleave_omega(
            lambda i: split2(x.component(i))[side], settle=settle, label=f"{'even' if side == 0 else 'odd'}({x.label})"
        )

    return interleave2(half(0), half(1))


@cell_native("unzip_sequence", stream_form=_unzip_stream)
def _unzip_cell(arg: int, read: Reader, m: int) -> int:
    side, j = m % 2, m // 2
    i, k = unpair(j)
    return read(pair(i, 2 * k + side))


def _zip_stream(arg: int, y: Stream) -> Stream:
    a, b = split2(y)
    settle = None
    if a.has_settle and b.has_settle:
        settle = lambda c: a.settle_index(c // 2) if c % 2 == 0 else b.settle_index(c // 2)  # noqa: E731
    return interleave_omega(
        lambda i: interleave2(a.component(i), b.component(i)), settle=settle, label=f"zip({y.label})"
    )


@cell_native("zip_sequences", stream_form=_zip_stream)
def _zip_cell(arg: int, read: Reader, m: int) -> int:
    i, c = unpair(m)
    return read(2 * pair(i, c // 2) + c % 2)


UNZIP = native_code("unzip_sequence", label="unzip")
ZIP = native_code("zip_sequences", label="zip")


def product_jump_iso(x: Representation, y: Representation) -> tuple[Translator, Translator]:
    """(X×Y)′ → X′×Y′ 와 그 역"""
    joint = jump(ProductRepresentation(x, y), "lim")
    split = ProductRepresentation(jump(x, "lim"), jump(y, "lim"))
    return (
        Translator(label="unzip", source=joint, target=split, code=UNZIP),
        Translator(label="zip", source=split, target=joint, code=ZIP),
    )


def infimum_jump_iso(x: Representation, y: Representation) -> tuple[Translator, Translator]:
    """(X∧Y)′ → X′∧Y′ 와 그 역; 하한의 이름도 쌍이므로 같은 코드를 씁니다."""
    joint = jump(MeetRepresentation(x, y), "lim")
    split = MeetRepresentation(jump(x, "lim"), jump(y, "lim"))
    return (
        Translator(label="unzip∧", source=joint, target=split, code=UNZIP),
        Translator(label="zip∧", source=split, target=joint, code=ZIP),
    )


# ──────────────────────────────────────────
# 함수 공간
# ──────────────────────────────────────────


def _component_entry(read: Reader, j: int, xs: Word) -> Word:
    """c_j가 xs의 앞부분들에서 강제하는 가장 긴 출력"""
    code = PhiCode(Stream(lambda r: read(pair(j, r)), label=f"c[{j}]"))
    best: Word = ()
    for n in range(len(xs) + 1):
        v = code.entry(xs[:n])
        if v is not None and len(v) > len(best):
            best = v
    return best


@cell_native("funcspace_easy")
def _funcspace_easy_cell(arg: int, read: Reader, m: int) -> int:
    """⟨c_0, c_1, ...⟩ ↦ ⟨x_j⟩ ↦ ⟨Φ_{c_j}(x_j)⟩ 의 연관 항목"""
    u = decode_sequence(m)
    out: list[int] = []
    entries: dict[int, Word] = {}
    for o in range(len(u)):
        j, k = unpair(o)
        if j not in entries:
            xs: list[int] = []
            while pair(j, len(xs)) < len(u):
                xs.append(u[pair(j, len(xs))])
            entries[j] = _component_entry(read, j, tuple(xs))
        v = entries[j]
        if len(v) <= k:
            break
        out.append(v[k])
    return 1 + rank(tuple(out)) if out else 0


FUNCSPACE_EASY = native_code("funcspace_easy", label="C′→C(′,′)")


def _funcspace_hard_stream(arg: int, s: Stream) -> Stream:
    return uniform_limit_control(PhiCode(s), whitelist_from_arg(arg)).codes


@cell_native("funcspace_hard", stream_form=_funcspace_hard_stream)
def _funcspace_hard_cell(arg: int, read: Reader, m: int) -> int:
    """인자는 화이트리스트 매니페스트의 부호"""
    return _funcspace_hard_stream(arg, Stream(read, label="phi")).at(m)


def function_space_hard(oracle: WhitelistOracle) -> MachineCode:
    """C(X′, Y′) → C(X, Y)′ under the given whitelist."""
    log_message(f"[isos] funcspace_hard under {oracle.describe()}")
    return native_code("funcspace_hard", oracle.manifest.to_arg(), Kind.MONOTONE, f"R[{oracle.describe()}]")


def funcspace_jump_iso(
    x: Representation, y: Representation, probes: list[Stream], oracle: WhitelistOracle
) -> tuple[Translator, Translator]:
    plain = FunctionRepresentation(x, y, probes)
    jumped_space = jump(plain, "lim")
    lifted = FunctionRepresentation(jump(x, "lim"), jump(y, "lim"), [constant_sequence(p) for p in probes])
    easy = Translator(label="C′→C(′,′)", source=jumped_space, target=lifted, code=FUNCSPACE_EASY)
    hard = Translator(
        label="C(′,′)→C′",
        source=lifted,
        target=jumped_space,
        code=function_space_hard(oracle),
        regime=Regime.ORACLE,
        oracle=oracle.describe(),
    )
    return easy, hard


class FunctionSpaceRealizers(NamedTuple):
    ev: MachineCode
    cur: MachineCode
    seq_to_phi: MachineCode
    phi_to_seq: MachineCode


def ev_cur_seq_realizers() -> FunctionSpaceRealizers:
    """ev, cur, 수열↔함수 실현자; 점프 아래에서도 같은 코드가 그대로 쓰입니다."""
    return FunctionSpaceRealizers(EV, CUR, SEQ_TO_PHI, PHI_TO_SEQ)
