"""
Halting oracles and the observational Turing jump.

Two regimes answer "does machine i halt on p": `StepOracle(t)` simulates for t steps
and answers HALTS or UNKNOWN; `WhitelistOracle` answers exactly, but only for machines
it can certify: explicit manifest entries plus the synthesized families it enables
(comparators, change monitors, probes, ...). Anything else raises `OracleGap`.
"""
import json
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Literal, NamedTuple, Sequence

from pydantic import BaseModel, Field, model_validator

from baire.stream import ZERO, Stream, prepend
from baire.words import Word, decode_text, encode_text
from core.context import registry_lock
from core.errors import OracleGap, WorkbenchError
from core.utils import resolve_data_path
from vm.machine import Simulation, halting_time, stream_source
from vm.program import Program, decode_program, encode_program, parse_program


class Verdict(str, Enum):
    HALTS = "halts"
    LOOPS = "loops"
    UNKNOWN = "unknown"

    @property
    def bit(self) -> int:
        return 1 if self is Verdict.HALTS else 0


class Universal(str, Enum):
    """단어 w의 모든 연장에 대한 판정: 모두 정지 / 모두 무한 / 섞임"""

    ALL = "all"
    NONE = "none"
    MIXED = "mixed"


# ──────────────────────────────────────────
# 합성 기계 장부와 패밀리 판정기
# ──────────────────────────────────────────


class Family(NamedTuple):
    name: str
    verdict: Callable[[tuple, Stream, "Oracle"], Verdict]
    universal: Callable[[tuple, Word, "Oracle"], Universal] | None = None
    extension: Callable[[tuple, Sequence[Stream], Word], Verdict] | None = None
    members: Callable[[tuple], frozenset[int]] | None = None
    native: Callable[[int], tuple] | None = None


_families: dict[str, Family] = {}
_family_by_tag: dict[int, str] = {}
_ledger: dict[int, tuple[str, tuple]] = {}


def register_family(family: Family, *, tag: int | None = None) -> None:
    """
    Registers a synthesized family. Families built on a single NATIVE instruction pass
    `tag`; their parameters are read back from the instruction argument through
    `family.native`.
    """
    with registry_lock:
        _families[family.name] = family
        if tag is not None:
            _family_by_tag[tag] = family.name


def record_synthesized(index: int, family: str, params: tuple) -> None:
    if index in _ledger:
        return
    with registry_lock:
        _ledger.setdefault(index, (family, params))


def identify(index: int) -> tuple[Family, tuple] | None:
    """Gödel 번호를 합성 패밀리와 매개변수로 되돌립니다."""
    entry = _ledger.get(index)
    if entry is not None:
        return _families[entry[0]], entry[1]
    native = decode_program(index).single_native()
    if native is not None:
        from vm.natives import lookup

        lookup(native[0])
        name = _family_by_tag.get(native[0])
        if name is not None:
            family = _families[name]
            return family, family.native(native[1])
    return None


# ──────────────────────────────────────────
# 오라클
# ──────────────────────────────────────────


class Oracle:
    """정지 질의 응답원의 공통 인터페이스"""

    exact: bool = False

    def query(self, index: int, p: Stream) -> Verdict:
        raise NotImplementedError

    def universal(self, index: int, word: Word) -> Universal:
        raise OracleGap(f"{type(self).__name__} gives no universal verdicts")

    def describe(self) -> str:
        return type(self).__name__


class StepOracle(Oracle):
    """t 스텝 시뮬레이션: HALTS 또는 UNKNOWN만 답합니다."""

    def __init__(self, bound: int):
        if bound < 0:
            raise ValueError("step bound must be non-negative")
        self.bound = bound

    def query(self, index: int, p: Stream) -> Verdict:
        if halting_time(decode_program(index), p, self.bound) is not None:
            return Verdict.HALTS
        return Verdict.UNKNOWN

    def describe(self) -> str:
        return f"step:{self.bound}"


class TableVerdict(BaseModel):
    """입력의 첫 셀 p(0)에 따라 갈리는 판정표"""

    table: dict[int, Literal["halts", "loops"]] = Field(default_factory=dict, description="p(0) → verdict")
    modulus: int | None = Field(default=None, gt=0, description="look up p(0) mod modulus instead of p(0)")
    default: Literal["halts", "loops"] = Field(default="loops", description="verdict for values not in the table")

    def at(self, first: int) -> Verdict:
        key = first % self.modulus if self.modulus else first
        return Verdict(self.table.get(key, self.default))

    def outcomes(self) -> set[Verdict]:
        values = {Verdict(v) for v in self.table.values()}
        if self.modulus is None or len(self.table) < self.modulus:
            values.add(Verdict(self.default))
        return values


class UniverseEntry(BaseModel):
    """화이트리스트 매니페스트의 한 항목"""

    index: int | None = Field(default=None, ge=0, description="Gödel number of the certified machine")
    program_file: str | None = Field(default=None, description="program text, resolved against data/programs")
    verdict: Literal["halts", "loops", "table"] = Field(description="certified behaviour")
    table: TableVerdict | None = Field(default=None, description="per-input verdicts for verdict=table")
    note: str = Field(default="", description="free text")

    @model_validator(mode="after")
    def _resolve(self) -> "UniverseEntry":
        if self.program_file is not None:
            path = resolve_data_path(self.program_file)
            index = encode_program(parse_program(path.read_text(encoding="utf-8")))
            if self.index is not None and self.index != index:
                raise ValueError(f"{self.program_file} has index {index}, manifest says {self.index}")
            self.index = index
        if self.index is None:
            raise ValueError("an entry needs index or program_file")
        if self.verdict == "table" and self.table is None:
            raise ValueError("verdict=table needs a table")
        return self

    def query(self, p: Stream) -> Verdict:
        if self.verdict == "table":
            return self.table.at(p.at(0))
        return Verdict(self.verdict)

    def universal(self, word: Word) -> Universal:
        if self.verdict == "halts":
            return Universal.ALL
        if self.verdict == "loops":
            return Universal.NONE
        outcomes = {self.table.at(word[0])} if word else self.table.outcomes()
        if outcomes == {Verdict.HALTS}:
            return Universal.ALL
        if outcomes == {Verdict.LOOPS}:
            return Universal.NONE
        return Universal.MIXED


class UniverseManifest(BaseModel):
    name: str = Field(default="universe", description="display name")
    families: list[str] = Field(default_factory=list, description="synthesized families answered exactly")
    entries: list[UniverseEntry] = Field(default_factory=list, description="explicitly certified machines")
    probes: list[tuple[int, int]] = Field(
        default_factory=list, description="probe machines (position, value) in whitelist order"
    )

    def to_arg(self) -> int:
        """NATIVE 인자로 쓰는 자연수 (프로그램 파일은 번호로 풀어 둡니다)"""
        data = self.model_dump(exclude={"entries": {"__all__": {"program_file"}}})
        return encode_text(json.dumps(data, ensure_ascii=False))


class WhitelistOracle(Oracle):
    """인증된 부분 우주에 대한 정확한 오라클"""

    exact = True

    def __init__(self, manifest: UniverseManifest):
        self.manifest = manifest
        self.entries: dict[int, UniverseEntry] = {e.index: e for e in manifest.entries}
        self.families = frozenset(manifest.families)

    @classmethod
    def load(cls, path: str | Path) -> "WhitelistOracle":
        resolved = resolve_data_path(path)
        with open(resolved, "r", encoding="utf-8") as f:
            return cls(UniverseManifest.model_validate(json.load(f)))

    def _family(self, index: int) -> tuple[Family, tuple]:
        found = identify(index)
        if found is None or found[0].name not in self.families:
            raise OracleGap(f"machine {_short(index)} is not certified by {self.manifest.name}")
        return found

    def registered(self, index: int) -> bool:
        if index in self.entries:
            return True
        found = identify(index)
        return found is not None and found[0].name in self.families

    def query(self, index: int, p: Stream) -> Verdict:
        entry = self.entries.get(index)
        if entry is not None:
            return entry.query(p)
        family, params = self._family(index)
        return family.verdict(params, p, self)

    def universal(self, index: int, word: Word) -> Universal:
        entry = self.entries.get(index)
        if entry is not None:
            return entry.universal(word)
        family, params = self._family(index)
        if family.universal is None:
            raise OracleGap(f"family {family.name} gives no universal verdicts")
        return family.universal(params, word, self)

    def extension_verdict(self, index: int, committed: Sequence[Stream], fixed: Word) -> Verdict:
        """
        Whether machine `index` halts on some sequence that starts with the `committed`
        components and continues with components extending `fixed`.
        """
        entry = self.entries.get(index)
        if entry is not None:
            if entry.verdict == "table":
                # 판정표는 입력의 첫 셀, 즉 성분 0의 셀 0만 봅니다.
                if not committed:
                    raise OracleGap("a table verdict needs a committed first component")
                return entry.table.at(committed[0].at(0))
            return Verdict(entry.verdict)
        family, params = self._family(index)
        if family.extension is None:
            raise OracleGap(f"family {family.name} gives no extension verdicts")
        return family.extension(params, committed, fixed)

    def members(self, index: int) -> frozenset[int]:
        """W_index, 유한 집합으로 인증된 경우"""
        family, params = self._family(index)
        if family.members is None:
            raise OracleGap(f"machine {_short(index)} has no certified finite domain")
        return family.members(params)

    def position(self, i: int) -> int:
        """i번째 화이트리스트 위치의 기계 번호 (탐침 뒤는 무한 루프로 채움)"""
        from vm.synthesis import probe

        if i < len(self.manifest.probes):
            a, b = self.manifest.probes[i]
            return probe(a, b)
        return NEVER_HALTS_INDEX

    def describe(self) -> str:
        return f"whitelist:{self.manifest.name}"


@lru_cache(maxsize=16)
def whitelist_from_arg(arg: int) -> WhitelistOracle:
    return WhitelistOracle(UniverseManifest.model_validate(json.loads(decode_text(arg))))


def _short(index: int) -> str:
    text = str(index)
    return text if len(text) <= 24 else f"{text[:10]}…({len(text)} digits)"


NEVER_HALTS = parse_program("loop: JZ 0 loop\n")
NEVER_HALTS_INDEX = encode_program(NEVER_HALTS)


def parse_oracle(spec: str) -> Oracle:
    """`step:N` 또는 `whitelist:FILE`"""
    mode, _, arg = spec.partition(":")
    if mode == "step" and arg.isdigit():
        return StepOracle(int(arg))
    if mode == "whitelist" and arg:
        return WhitelistOracle.load(arg)
    raise WorkbenchError(f"malformed oracle spec {spec!r}; expected step:N or whitelist:FILE")


# ──────────────────────────────────────────
# 점프 연산
# ──────────────────────────────────────────


def oracle_query(o: Oracle, i: int, p: Stream) -> Verdict:
    return o.query(i, p)


def jump_stream(p: Stream, oracle: Oracle) -> Stream:
    """J(p)(i) = 1 iff 기계 i가 p에서 정지 (오라클이 답하는 범위에서)"""
    return Stream(lambda i: oracle.query(i, p).bit, label=f"J[{oracle.describe()}]({p.label})")


def jump_approx(p: Stream, budget: int, width: int = 64) -> Word:
    oracle = StepOracle(budget)
    return tuple(oracle.query(i, p).bit for i in range(width))


def we_stages(n: int, budget: int) -> Iterator[tuple[int, frozenset[int]]]:
    """
    Dovetailed enumeration of W_n (input x given as x·0̂). Stage s starts x = s and runs
    every pending x ≤ s up to s steps; it yields (s, the x that halted at this stage).
    The last stage is s = budget and starts nothing.
    """
    program = decode_program(n)
    pending: dict[int, Simulation] = {}
    for s in range(budget + 1):
        if s < budget:
            pending[s] = Simulation(program, stream_source(prepend(s, ZERO)), None)
        halted = frozenset(x for x, sim in pending.items() if sim.halts_within(s))
        for x in halted:
            del pending[x]
        yield s, halted


def we_enumerate(n: int, budget: int) -> frozenset[int]:
    """budget 안에 확인된 W_n 원소들: x < budget 이고 budget 스텝 안에 정지"""
    found: set[int] = set()
    for _, halted in we_stages(n, budget):
        found |= halted
    return frozenset(found)


def jump_bits(p: Stream, oracle: Oracle, indices: Iterable[int]) -> dict[int, int]:
    return {i: oracle.query(i, p).bit for i in indices}
