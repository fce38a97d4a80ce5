"""
Function-space codes Φ as monotone associates.

A `PhiCode` is a Stream. Its entry at index rank(u) = encode_sequence(u) is 0 when the
code says nothing about inputs extending u, and 1 + encode_sequence(v) when every input
extending u must produce an output extending v. Evaluation reads the entries at the
prefixes of the input; smn rewrites entry indices.
"""
from typing import Callable, Iterator, Mapping

from baire.stream import Stream, interleave2
from baire.words import EMPTY, Word, comparable, decode_sequence, encode_sequence, pair, unpair
from core.errors import BudgetExhausted, MalformedCode
from vm.machine import output_stream
from vm.natives import TICK, Event, Reader, Source, append_event, cell_native, microcode, tag_of
from vm.program import Instruction, Kind, MachineCode, Op, Program

PHI_SEARCH_LIMIT = 256


def rank(u: Word) -> int:
    return encode_sequence(u)


def _entry_value(raw: int) -> Word | None:
    return None if raw == 0 else decode_sequence(raw - 1)


def _longer(label: str, v: Word, w: Word | None) -> Word:
    if w is None:
        return v
    if not comparable(v, w):
        raise MalformedCode(f"{label} lists incomparable outputs {v} and {w}")
    return w if len(w) > len(v) else v


class PhiCode:
    """Φ 코드: 단조 연관 스트림"""

    associate: Stream

    def __init__(self, associate: Stream, label: str | None = None):
        self.associate = associate
        self.label = label or associate.label

    def entry(self, u: Word) -> Word | None:
        return _entry_value(self.associate.at(rank(u)))

    def apply(self, q: Stream, budget: int) -> Word:
        return phi_apply(self, q, budget)

    def __repr__(self) -> str:
        return f"PhiCode({self.label})"

    # ── 생성자 ────────────────────────────

    @classmethod
    def from_function(cls, fn: Callable[[Word], Word | None], label: str = "phi") -> "PhiCode":
        """u ↦ v(또는 None)로 주어지는 연관; fn은 ⊑에 대해 단조여야 합니다."""

        def produce(m: int) -> int:
            v = fn(decode_sequence(m))
            return 0 if v is None else 1 + rank(v)

        return cls(Stream(produce, label=label), label)

    @classmethod
    def from_pairs(cls, pairs: Mapping[Word, Word], label: str = "pairs") -> "PhiCode":
        table = {rank(tuple(u)): 1 + rank(tuple(v)) for u, v in pairs.items()}
        return cls(Stream(lambda m: table.get(m, 0), label=label), label)

    @classmethod
    def identity(cls) -> "PhiCode":
        return cls(Stream(lambda m: 1 + m, label="phi:id"), "phi:id")

    @classmethod
    def constant(cls, value: Callable[[int], int] | Stream) -> "PhiCode":
        """모든 입력에 같은 출력 스트림 (u 길이만큼의 앞부분)"""
        stream = value if isinstance(value, Stream) else Stream(value)
        return cls.from_function(lambda u: stream.prefix(len(u)), label=f"phi:const({stream.label})")

    @classmethod
    def pointwise(cls, fn: Callable[[int], int], label: str = "phi:pointwise") -> "PhiCode":
        """셀마다 작용하는 함수 p ↦ (fn(p(0)), fn(p(1)), ...)"""
        return cls.from_function(lambda u: tuple(fn(x) for x in u), label=label)


def phi_apply(code: PhiCode, q: Stream, budget: int) -> Word:
    """
    The longest output listed at the prefixes q|0, ..., q|(budget-1).

    `budget` counts input prefixes, not listed pairs. Consistency is checked along q
    only; entries at words off q are never looked up.
    """
    best: Word = EMPTY
    for n in range(budget):
        best = _longer(code.label, best, code.entry(q.prefix(n)))
    return best


def phi_smn(code: PhiCode, r: Stream) -> PhiCode:
    """
    A code for p ↦ Φ_code(⟨r, p⟩): the entry at w combines the entries at the prefixes of
    ⟨r, w⟩ of length 2|w| and 2|w| + 1.
    """

    def fn(w: Word) -> Word | None:
        n = len(w)
        rs = r.prefix(n + 1)
        even = tuple(x for i in range(n) for x in (rs[i], w[i]))
        odd = even + (rs[n],)
        v = code.entry(even)
        w2 = code.entry(odd)
        if v is None:
            return w2
        return _longer(code.label, v, w2)

    return PhiCode.from_function(fn, label=f"smn({code.label},{r.label})")


# ──────────────────────────────────────────
# ev / cur / seq 실현자
# ──────────────────────────────────────────


@microcode("phi_eval")
def _phi_eval_body(arg: int, source: Source) -> Iterator[Event]:
    """입력 ⟨f, p⟩에서 Φ_f(p)를 출력합니다 (짝수 칸 f, 홀수 칸 p)."""
    out: Word = EMPTY
    u: list[int] = []
    while True:
        while (raw := source(2 * rank(tuple(u)))) is None:
            yield TICK
        v = _entry_value(raw)
        if v is not None:
            v = _longer("ev", out, v)
            for x in v[len(out):]:
                yield append_event(x)
            out = v
        while (x := source(2 * len(u) + 1)) is None:
            yield TICK
        u.append(x)
        yield TICK


def _smn_cell(arg: int, read: Reader, m: int) -> int:
    """입력 ⟨f, r⟩에서 smn(f, r)의 연관 항목 m"""
    f = PhiCode(Stream(lambda i: read(2 * i), label="f"))
    r = Stream(lambda i: read(2 * i + 1), label="r")
    return phi_smn(f, r).associate.at(m)


def _seq_to_phi_cell(arg: int, read: Reader, m: int) -> int:
    """⟨p_0, p_1, ...⟩ ↦ n·q ↦ p_n 의 Φ 코드"""
    u = decode_sequence(m)
    if not u:
        return 0
    return 1 + rank(tuple(read(pair(u[0], j)) for j in range(len(u) - 1)))


def _phi_to_seq_cell(arg: int, read: Reader, m: int) -> int:
    n, k = unpair(m)
    code = PhiCode(Stream(read, label="f"))
    out: Word = EMPTY
    for length in range(1, PHI_SEARCH_LIMIT):
        out = _longer("seq", out, code.entry((n,) + (0,) * (length - 1)))
        if len(out) > k:
            return out[k]
    raise BudgetExhausted(f"code gives no cell {k} of component {n} within {PHI_SEARCH_LIMIT} prefixes")


cell_native("phi_curry")(_smn_cell)
cell_native("seq_to_phi")(_seq_to_phi_cell)
cell_native("phi_to_seq")(_phi_to_seq_cell)


def _realizer(name: str) -> MachineCode:
    return MachineCode.of(Program([Instruction(Op.NATIVE, pair(tag_of(name), 0))]), Kind.MONOTONE, name)


EV = _realizer("phi_eval")
CUR = _realizer("phi_curry")
SEQ_TO_PHI = _realizer("seq_to_phi")
PHI_TO_SEQ = _realizer("phi_to_seq")


def evaluate(code: PhiCode, q: Stream) -> Stream:
    """ev 실현자를 ⟨code, q⟩에 돌린 출력"""
    return output_stream(EV, interleave2(code.associate, q))


def curry(code: PhiCode, r: Stream) -> PhiCode:
    return PhiCode(output_stream(CUR, interleave2(code.associate, r)), label=f"cur({code.label})")


def sequence_code(seq: Stream) -> PhiCode:
    """⟨p_0, p_1, ...⟩에 대응하는 n ↦ p_n 코드"""
    return PhiCode(output_stream(SEQ_TO_PHI, seq), label=f"seq({seq.label})")


def code_sequence(code: PhiCode) -> Stream:
    return output_stream(PHI_TO_SEQ, code.associate)
