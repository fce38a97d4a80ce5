"""
Presentations of the sets W_n behind Fin = {n : W_n finite}.

Membership in Fin is not decidable, so the counterexample functions take an explicit
universe of presentations. Each entry enumerates W_n through e_n:

    finite      a list; e_n(i) cycles through it (an empty list presents W_n = ∅)
    generator   a stream literal (`word:... then const:...`, `periodic:...`) or
                `count:a,b` for the infinite progression a, a+b, a+2b, ...
    machine     a monotone machine, by gallery name or decimal Gödel number;
                e_n is its output on 0̂. |W_n| is whatever `size` declares.

Indices without an entry present the empty set.
"""
import json
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator

from baire.stream import ZERO, Stream, parse_stream
from baire.words import decode_text, encode_text
from core.utils import resolve_data_path
from gallery.machines import MONOTONE_MACHINES
from vm.machine import output_stream
from vm.program import Kind, MachineCode


class FinEntry(BaseModel):
    n: int = Field(ge=0, description="index of the presented set W_n")
    kind: Literal["finite", "generator", "machine"] = Field(description="explicit list, stream or program")
    data: list[int] | str = Field(description="the list, a generator literal, or a machine name or index")
    size: int | None = Field(default=None, ge=0, description="declared |W_n| of a machine entry, None if infinite")
    note: str = Field(default="", description="free text")

    @model_validator(mode="after")
    def _check_data(self) -> "FinEntry":
        if self.kind == "finite" and not isinstance(self.data, list):
            raise ValueError(f"finite entry {self.n} needs a list")
        if self.kind != "finite" and not isinstance(self.data, str):
            raise ValueError(f"{self.kind} entry {self.n} needs a literal")
        if self.kind != "machine" and self.size is not None:
            raise ValueError(f"only machine entries declare a size (entry {self.n})")
        if self.kind == "generator" and self._progression() is None:
            parse_stream(self.data)
        if self.kind == "machine":
            self.machine()
        return self

    def _progression(self) -> tuple[int, int] | None:
        if not self.data.startswith("count:"):
            return None
        start, _, step = self.data[len("count:"):].partition(",")
        return int(start), int(step or 1)

    def machine(self) -> MachineCode:
        """machine 항목의 단조 기계"""
        name = self.data.strip()
        if name in MONOTONE_MACHINES:
            return MONOTONE_MACHINES[name]
        if not name.isdigit():
            raise ValueError(f"machine entry {self.n}: {name!r} is neither a monotone machine nor an index")
        return MachineCode(index=int(name), kind=Kind.MONOTONE, name=f"e_{self.n}")

    @cached_property
    def stream(self) -> Stream | None:
        """e_n, W_n이 비었으면 None"""
        if self.kind == "finite":
            return Stream.periodic(self.data) if self.data else None
        if self.kind == "machine":
            return output_stream(self.machine(), ZERO)
        progression = self._progression()
        if progression is not None:
            start, step = progression
            return Stream(lambda i: start + step * i, label=f"count:{start},{step}")
        return parse_stream(self.data)

    def cardinality(self) -> int | None:
        """|W_n|, 무한이면 None"""
        if self.kind == "finite":
            return len(set(self.data))
        if self.kind == "machine":
            return self.size
        progression = self._progression()
        if progression is not None:
            return None if progression[1] > 0 else 1
        d = self.stream.description
        return len(set(d.head + d.period))


class FinUniverse(BaseModel):
    name: str = Field(default="fin", description="display name")
    entries: list[FinEntry] = Field(default_factory=list, description="presented sets W_n")

    @classmethod
    def load(cls, path: str | Path = "fin.json") -> "FinUniverse":
        with open(resolve_data_path(path), "r", encoding="utf-8") as f:
            return cls.model_validate(json.load(f))

    @classmethod
    def of(cls, sets: dict[int, list[int] | str], name: str = "inline") -> "FinUniverse":
        """{n: 목록 또는 생성 리터럴}로 바로 만듭니다."""
        entries = [
            FinEntry(n=n, kind="finite" if isinstance(data, list) else "generator", data=data)
            for n, data in sorted(sets.items())
        ]
        return cls(name=name, entries=entries)

    @cached_property
    def _by_index(self) -> dict[int, FinEntry]:
        return {e.n: e for e in self.entries}

    def enumerate(self, n: int, i: int) -> int | None:
        """e_n(i), W_n = ∅ 이면 None"""
        entry = self._by_index.get(n)
        if entry is None or entry.stream is None:
            return None
        return entry.stream.at(i)

    def distinct(self, n: int, m: int) -> int:
        """e_n(0), ..., e_n(m) 중 서로 다른 값의 개수"""
        entry = self._by_index.get(n)
        if entry is None or entry.stream is None:
            return 0
        return len(set(entry.stream.prefix(m + 1)))

    def size(self, n: int) -> int | None:
        entry = self._by_index.get(n)
        return 0 if entry is None else entry.cardinality()

    def in_fin(self, n: int) -> bool:
        return self.size(n) is not None

    def describe(self) -> str:
        return f"fin:{self.name}"

    def to_arg(self) -> int:
        """NATIVE 인자로 쓰는 자연수: JSON 텍스트의 부호"""
        return encode_text(json.dumps(self.model_dump(exclude_defaults=True), ensure_ascii=False))


@lru_cache(maxsize=32)
def universe_from_arg(arg: int) -> FinUniverse:
    return FinUniverse.model_validate(json.loads(decode_text(arg)))
