"""
Demand-driven points of Baire space.

A `Stream` pairs a producer (index → natural) with a memo table. Streams that come
from finite data keep their finite description (head word plus repeating period) so
that equality, first-nonzero and maxima are decidable on them. Sequence streams
built by `interleave_omega` may carry a settle hint: for each cell, a component
index from which every component agrees with the componentwise limit.
"""
import threading
from typing import Callable, Sequence

from baire.words import EMPTY, Word, pair, unpair, parse_word

SettleHint = Callable[[int], int]


class Description:
    """최종 주기적 스트림의 유한 기술: head 뒤에 period 반복"""

    head: Word
    period: Word

    def __init__(self, head: Sequence[int], period: Sequence[int]):
        if not period:
            raise ValueError("period must be non-empty")
        self.head = tuple(head)
        self.period = tuple(period)

    def value(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        return self.period[(n - len(self.head)) % len(self.period)]

    def first_nonzero(self) -> int | None:
        for i, v in enumerate(self.head):
            if v:
                return i
        for j, v in enumerate(self.period):
            if v:
                return len(self.head) + j
        return None

    def maximum(self) -> tuple[int, int]:
        """(최댓값, 최댓값이 처음 나타나는 위치)"""
        values = self.head + self.period
        best = max(values)
        return best, values.index(best)

    def horizon(self) -> int:
        """이 위치부터는 주기 부분만 남습니다."""
        return len(self.head) + len(self.period)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Description):
            return NotImplemented
        n = max(len(self.head), len(other.head)) + len(self.period) * len(other.period)
        return all(self.value(i) == other.value(i) for i in range(n))

    def __hash__(self) -> int:
        return hash(tuple(self.value(i) for i in range(self.horizon())))

    def __repr__(self) -> str:
        return f"Description(head={self.head}, period={self.period})"


class Stream:
    label: str
    description: Description | None

    def __init__(
        self,
        producer: Callable[[int], int],
        *,
        label: str = "func",
        description: Description | None = None,
        parts: tuple["Stream", ...] | None = None,
        component: Callable[[int], "Stream"] | None = None,
        settle: SettleHint | None = None,
    ):
        self._producer = producer
        self._memo: dict[int, int] = {}
        self._lock = threading.Lock()
        self.label = label
        self.description = description
        self._parts = parts
        self._component = component
        self._settle = settle

    # ── 접근 ──────────────────────────────

    def at(self, n: int) -> int:
        if n < 0:
            raise IndexError(f"negative stream index {n}")
        cached = self._memo.get(n)
        if cached is not None:
            return cached
        value = self._producer(n)
        if value < 0:
            raise ValueError(f"stream {self.label} produced negative value {value} at {n}")
        with self._lock:
            # 멱등 채우기: 먼저 채워진 값이 있으면 그대로 둡니다.
            return self._memo.setdefault(n, value)

    def __getitem__(self, key: int | slice) -> int | Word:
        if isinstance(key, slice):
            if key.stop is None:
                raise IndexError("stream slices need an explicit stop")
            return tuple(self.at(i) for i in range(*key.indices(key.stop)))
        return self.at(key)

    def prefix(self, n: int) -> Word:
        return tuple(self.at(i) for i in range(n))

    # ── 유한 기술 기반 질의 ───────────────

    @property
    def described(self) -> bool:
        return self.description is not None

    def first_nonzero(self) -> int | None:
        if self.description is None:
            raise ValueError(f"stream {self.label} has no finite description")
        return self.description.first_nonzero()

    def maximum(self) -> tuple[int, int]:
        if self.description is None:
            raise ValueError(f"stream {self.label} has no finite description")
        return self.description.maximum()

    def constant_value(self) -> int | None:
        d = self.description
        if d is not None and len(set(d.head + d.period)) == 1:
            return d.period[0]
        return None

    def same_as(self, other: "Stream", check: int = 64) -> bool:
        """유한 기술이 있으면 정확히, 아니면 앞 check칸으로 비교합니다."""
        if self.description is not None and other.description is not None:
            return self.description == other.description
        return self.prefix(check) == other.prefix(check)

    # ── 수열(⟨p_0, p_1, ...⟩) 구조 ──────────

    @property
    def parts(self) -> tuple["Stream", ...] | None:
        return self._parts

    def component(self, n: int) -> "Stream":
        if self._component is not None:
            return self._component(n)
        return Stream(lambda k: self.at(pair(n, k)), label=f"{self.label}[{n}]")

    def settle_index(self, cell: int) -> int | None:
        if self._settle is None:
            return None
        return self._settle(cell)

    @property
    def has_settle(self) -> bool:
        return self._settle is not None

    def limit_value(self, cell: int) -> int:
        """정착 힌트로 성분별 극한의 cell 값을 읽습니다."""
        s = self.settle_index(cell)
        if s is None:
            raise ValueError(f"stream {self.label} carries no settle hint")
        return self.at(pair(s, cell))

    def limit_stream(self) -> "Stream":
        return Stream(self.limit_value, label=f"lim {self.label}")

    # ── 생성자 ────────────────────────────

    @classmethod
    def constant(cls, n: int) -> "Stream":
        return cls.eventually(EMPTY, (n,), label=f"const:{n}")

    @classmethod
    def periodic(cls, values: Sequence[int]) -> "Stream":
        return cls.eventually(EMPTY, values, label="periodic:" + ",".join(map(str, values)))

    @classmethod
    def eventually(cls, head: Sequence[int], period: Sequence[int], label: str | None = None) -> "Stream":
        d = Description(head, period)
        return cls(d.value, label=label or f"word:{d.head} then {d.period}", description=d)

    @classmethod
    def from_word(cls, word: Sequence[int], tail: "Stream") -> "Stream":
        word = tuple(word)
        if tail.description is not None:
            d = Description(word + tail.description.head, tail.description.period)
            return cls(d.value, label=f"word:{word} then {tail.label}", description=d)
        n = len(word)
        return cls(lambda i: word[i] if i < n else tail.at(i - n), label=f"word:{word} then {tail.label}")

    @classmethod
    def from_function(cls, fn: Callable[[int], int], label: str = "func") -> "Stream":
        return cls(fn, label=label)


def const(n: int) -> Stream:
    return Stream.constant(n)


ZERO = Stream.constant(0)


def prepend(n: int, p: Stream) -> Stream:
    """⟨n,p⟩ = np"""
    return Stream.from_word((n,), p)


def tail(p: Stream, k: int = 1) -> Stream:
    if p.description is not None and k <= len(p.description.head):
        d = p.description
        return Stream.eventually(d.head[k:], d.period, label=f"tail{k}({p.label})")
    return Stream(lambda i: p.at(i + k), label=f"tail{k}({p.label})")


def interleave2(p: Stream, q: Stream) -> Stream:
    """⟨p,q⟩(2n) = p(n), ⟨p,q⟩(2n+1) = q(n)"""

    def produce(i: int) -> int:
        return p.at(i // 2) if i % 2 == 0 else q.at(i // 2)

    return Stream(produce, label=f"<{p.label},{q.label}>", parts=(p, q))


def split2(r: Stream) -> tuple[Stream, Stream]:
    if r.parts is not None and len(r.parts) == 2:
        return r.parts[0], r.parts[1]
    return (
        Stream(lambda n: r.at(2 * n), label=f"even({r.label})"),
        Stream(lambda n: r.at(2 * n + 1), label=f"odd({r.label})"),
    )


def interleave_omega(
    parts: Sequence[Stream] | Callable[[int], Stream],
    *,
    tail_part: Stream | None = None,
    settle: SettleHint | None = None,
    label: str = "omega",
) -> Stream:
    """
    ⟨p_0, p_1, p_2, ...⟩⟨n,k⟩ = p_n(k).

    `parts` is either a finite list (components past its end are `tail_part`, default
    0̂) or a function n ↦ p_n.
    """
    if callable(parts):
        lookup = parts
        cache: dict[int, Stream] = {}

        def component(n: int) -> Stream:
            s = cache.get(n)
            if s is None:
                s = cache.setdefault(n, lookup(n))
            return s
    else:
        items = tuple(parts)
        filler = tail_part if tail_part is not None else ZERO

        def component(n: int) -> Stream:
            return items[n] if n < len(items) else filler

        if settle is None and tail_part is not None:
            settle = lambda cell, _n=len(items): _n  # noqa: E731

    def produce(m: int) -> int:
        n, k = unpair(m)
        return component(n).at(k)

    return Stream(produce, label=label, component=component, settle=settle)


def constant_sequence(p: Stream) -> Stream:
    """⟨p, p, p, ...⟩ (극한이 이산적으로 수렴하는 상수 수열)"""
    return interleave_omega(lambda n: p, settle=lambda cell: 0, label=f"const-seq({p.label})")


# 리터럴 구문
# ──────────────────────────────────────────


def parse_stream(text: str, resolve_machine: Callable[[str], Stream] | None = None) -> Stream:
    """
    Parses the stream literals used on the command line:
    `const:n`, `periodic:a,b,c`, `word:w then const:n`, `word:w then periodic:a,b`,
    `machine:<code>`.
    """
    text = text.strip()
    if text.startswith("word:"):
        body, sep, rest = text[len("word:"):].partition(" then ")
        word = parse_word(body)
        tail_stream = parse_stream(rest, resolve_machine) if sep else ZERO
        return Stream.from_word(word, tail_stream)
    if text.startswith("const:"):
        return Stream.constant(int(text[len("const:"):]))
    if text.startswith("periodic:"):
        values = [int(v) for v in text[len("periodic:"):].split(",") if v.strip()]
        return Stream.periodic(values)
    if text.startswith("machine:"):
        if resolve_machine is None:
            raise ValueError("machine literals need a machine resolver")
        return resolve_machine(text[len("machine:"):])
    raise ValueError(f"unknown stream literal: {text!r}")
