"""
id : R_< → R and id : R_> → R as limit machines.

A lower name lists rationals whose supremum is x. After reading q_0..q_s the machine
holds b = max q_i and writes, for every cell j ≤ s, b rounded down to the grid
2^{-j-2}. Each cell only moves up and stays below x, so it changes finitely often,
and every snapshot of the tape is a Cauchy name of a point within 2^{-j-2} of b.
Upper names are handled by the mirror image.
"""
import math
from itertools import count
from typing import Iterator, Literal

from metric.rationals import Q, rational_at, rational_index
from spaces.translators import native_code
from vm.natives import TICK, Event, Source, microcode, read_when_ready, write_event
from vm.program import Kind, MachineCode

Direction = Literal["lower", "upper"]


def grid_below(b: Q, j: int) -> Q:
    scale = 1 << (j + 2)
    return Q(math.floor(b * scale), scale)


@microcode("semicomputable")
def _semicomputable_body(arg: int, source: Source) -> Iterator[Event]:
    sign = 1 if arg == 0 else -1
    best: Q | None = None
    written: dict[int, int] = {}
    for s in count():
        yield from read_when_ready(source, s)
        q = sign * rational_at(source(s))
        best = q if best is None else max(best, q)
        for j in range(s + 1):
            value = rational_index(sign * grid_below(best, j))
            if written.get(j) != value:
                written[j] = value
                yield write_event(j, value)
        yield TICK


def semicomputable_translator(direction: Direction = "lower") -> MachineCode:
    if direction not in ("lower", "upper"):
        raise ValueError(f"direction must be lower or upper, not {direction!r}")
    arrow = "<" if direction == "lower" else ">"
    return native_code("semicomputable", 0 if direction == "lower" else 1, Kind.LIMIT, f"id:R_{arrow}→R")
