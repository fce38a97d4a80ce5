"""
Limit inversion by finite extensions.

Given q, `LimitInversion` builds a sequence r = ⟨r_0, r_1, ...⟩ with lim r = q whose
jump at the whitelist positions is decided along the way. r_0 = 0̂; stage i appends
one block of components, each of the form q|_{i+1}·w·0̂. If machine position(i) halts
on some continuation of the components committed so far by components extending
q|_{i+1}, the block is a witness for that (found by length-lexicographic search and
confirmed by simulation) and b_i = 1; otherwise the block is q|_{i+1}·0̂ and b_i = 0.

Cell c of every component from block c + 1 on equals q(c), which is the settle hint
the returned sequence carries.
"""
import threading
from functools import cached_property
from typing import Sequence

from pydantic import BaseModel, Field

from baire.stream import ZERO, Stream, interleave_omega
from baire.words import Word, format_word, length_lex, unpair
from core.errors import BudgetExhausted, OracleGap
from core.utils import log_message
from vm.machine import Simulation
from vm.oracle import Verdict, WhitelistOracle
from vm.program import decode_program

WITNESS_ALPHABET = 4
WITNESS_LENGTH = 8
WITNESS_BUDGET = 20_000


class _Uncommitted(Exception):
    """후보 확인 중 아직 정해지지 않은 성분을 읽으려 할 때"""


class StageRecord(BaseModel):
    """invert-limit 추적 한 줄"""

    stage: int = Field(ge=0, description="stage number i")
    block: list[str] = Field(description="finite parts of the components appended at this stage")
    bits: str = Field(description="b_0 ... b_i so far")


class LimitInversion:
    """Staged construction of a sequence converging to q, with its jump bits."""

    def __init__(self, q: Stream, oracle: WhitelistOracle):
        self.q = q
        self.oracle = oracle
        self.words: list[Word] = [()]
        self.components: list[Stream] = [ZERO]
        self.block_starts: list[int] = [0]
        self.bit_values: list[int] = []
        self.records: list[StageRecord] = []
        self._lock = threading.RLock()

    @property
    def stages_done(self) -> int:
        return len(self.bit_values)

    def run_stages(self, n: int) -> None:
        """스테이지 0..n-1을 (아직이면) 진행"""
        with self._lock:
            while self.stages_done < n:
                self._stage(self.stages_done)

    def _stage(self, i: int) -> None:
        fixed = self.q.prefix(i + 1)
        index = self.oracle.position(i)
        verdict = self.oracle.extension_verdict(index, self.components, fixed)
        if verdict is Verdict.UNKNOWN:
            raise OracleGap(f"stage {i}: {self.oracle.describe()} has no verdict for position {i}")
        if verdict is Verdict.HALTS:
            block = self._witness(i, index, fixed)
        else:
            block = [fixed]
        self.block_starts.append(len(self.components))
        for word in block:
            self.words.append(word)
            self.components.append(Stream.from_word(word, ZERO))
        self.bit_values.append(verdict.bit)
        record = StageRecord(
            stage=i, block=[format_word(w) for w in block], bits="".join(map(str, self.bit_values))
        )
        self.records.append(record)
        log_message(f"[invert-limit] stage {i}: bit {verdict.bit}, block {record.block}")

    def _witness(self, i: int, index: int, fixed: Word) -> list[Word]:
        program = decode_program(index)
        for w in length_lex(WITNESS_LENGTH, WITNESS_ALPHABET):
            candidate = fixed + w
            if self._halts_on(program, self.components + [Stream.from_word(candidate, ZERO)]):
                return [candidate]
        raise BudgetExhausted(
            f"stage {i}: no witness of length ≤ {WITNESS_LENGTH} over {WITNESS_ALPHABET} symbols"
        )

    @staticmethod
    def _halts_on(program, components: Sequence[Stream]) -> bool:
        """확정된 성분만 읽고 정지하는지 확인합니다."""

        def source(m: int) -> int:
            n, k = unpair(m)
            if n >= len(components):
                raise _Uncommitted(n)
            return components[n].at(k)

        sim = Simulation(program, source, None)
        try:
            return sim.halts_within(WITNESS_BUDGET)
        except _Uncommitted:
            return False

    # ── 결과 ──────────────────────────────

    def component(self, j: int) -> Stream:
        with self._lock:
            while len(self.components) <= j:
                self._stage(self.stages_done)
            return self.components[j]

    def settle_index(self, cell: int) -> int:
        """블록 cell + 1의 첫 성분부터 셀 cell 값이 q(cell)"""
        self.run_stages(cell + 1)
        return self.block_starts[cell + 1]

    def bit(self, i: int) -> int:
        self.run_stages(i + 1)
        return self.bit_values[i]

    @cached_property
    def sequence(self) -> Stream:
        return interleave_omega(self.component, settle=self.settle_index, label=f"I({self.q.label})")

    @cached_property
    def bits(self) -> Stream:
        return Stream(self.bit, label=f"b({self.q.label})")

    def trace_records(self, stages: int) -> list[dict]:
        self.run_stages(stages)
        return [record.model_dump() for record in self.records[:stages]]


def limit_inversion(q: Stream, oracle: WhitelistOracle) -> tuple[Stream, Stream]:
    """(r, bits) with lim r = q and bits(i) = J(r)(position(i))."""
    inversion = LimitInversion(q, oracle)
    return inversion.sequence, inversion.bits
