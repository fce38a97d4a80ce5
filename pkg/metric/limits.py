"""
The metric limit lim_X and the metric jump J_X as limit machines, their inverse on the
real line, and the limit normal form for limit machines with values in a CMS.

lim_X reads a sequence ⟨p_0, p_1, ...⟩ of Cauchy names and searches, for every k, the
least i > i_{k−1} for which no later point is certified to be farther than 2^{-k-2}.
Certificates only ever appear, so each guess i_k moves finitely often, and the output
cell k is p_{i_k}(k+2).

J_X starts every cell at 0 and flips cell j to 1 once a decoded ball of the input is
formally included in a ball enumerated into the j-th open set.
"""
from functools import lru_cache
from itertools import count
from typing import Iterator, Sequence

from baire.stream import Stream
from baire.words import Word, decode_sequence, encode_sequence, pair, unpair
from core.errors import ContractViolation, NotInRange
from core.utils import log_message
from metric.cauchy import Ball, Relation, formal_relations
from metric.cms import CMS, cms_from_id, cms_id
from metric.rationals import ZERO_Q, Interval, Q, power_of_two
from spaces.translators import native_code
from transforms.normal_forms import TapeTracker
from vm.machine import LimitRun, run_limit
from vm.natives import TICK, Event, Source, append_event, microcode, read_when_ready, write_event
from vm.oracle import identify, we_enumerate
from vm.program import Kind, MachineCode, decode_program

# jump_X_inverse가 열린 집합을 나열할 때 쓰는 스텝 예산
ENUMERATION_BUDGET = 256
# 정확한 점으로 좁혀질 때 내보내는 이름 앞부분의 최대 길이
INVERSE_LENGTH = 16
# 행 경주에서 거리 한계를 정밀화하는 최대 라운드 수
RACE_ROUNDS = 64


def _cell(source: Source, cache: dict[int, int], index: int) -> Iterator[Event]:
    """입력 셀을 한 번만 읽고 값을 돌려줍니다."""
    if index not in cache:
        yield from read_when_ready(source, index)
        cache[index] = source(index)
    return cache[index]


@lru_cache(maxsize=512)
def open_balls(n: int, budget: int) -> frozenset[int]:
    """W_n 중 budget 안에 확인된 공 번호 (유한 집합으로 합성된 기계는 그 집합 전체)"""
    found = identify(n)
    if found is not None and found[0].members is not None:
        return found[0].members(found[1])
    return we_enumerate(n, budget)


def ball_open(balls: Sequence[Ball]) -> int:
    """주어진 공들의 합집합을 나열하는 기계 번호"""
    from vm.synthesis import member

    return member([b.index for b in balls])


# ──────────────────────────────────────────
# lim_X
# ──────────────────────────────────────────


@microcode("metric_limit")
def _metric_limit_body(arg: int, source: Source) -> Iterator[Event]:
    space = cms_from_id(arg)
    cells: dict[int, int] = {}
    far: dict[int, Q] = {}
    written: dict[int, int] = {}
    for s in count():
        slack = 2 * power_of_two(s)
        heads: list[int] = []
        for n in range(s + 1):
            value = yield from _cell(source, cells, pair(n, s))
            heads.append(value)
        for i in range(s):
            for n in range(i + 1, s + 1):
                gap = space.dist_bounds(heads[n], heads[i], s + 4).lo - slack
                if gap > far.get(i, ZERO_Q):
                    far[i] = gap
        previous = -1
        for k in range(s + 1):
            bound = power_of_two(k + 2)
            chosen = next((i for i in range(previous + 1, s + 1) if far.get(i, ZERO_Q) <= bound), None)
            if chosen is None:
                break
            value = yield from _cell(source, cells, pair(chosen, k + 2))
            if written.get(k) != value:
                written[k] = value
                yield write_event(k, value)
            previous = chosen
        yield TICK


def metric_limit(space: CMS) -> MachineCode:
    """lim_X: 코시 이름의 수열 → 극한점의 이름 (limit 기계)"""
    return native_code("metric_limit", cms_id(space), Kind.LIMIT, f"lim_{space.name}")


def limit_run(space: CMS, seq: Stream, budget: int) -> LimitRun:
    return run_limit(metric_limit(space), seq, budget)


# ──────────────────────────────────────────
# J_X 와 그 역
# ──────────────────────────────────────────


@microcode("metric_jump")
def _metric_jump_body(arg: int, source: Source) -> Iterator[Event]:
    space_id, opens_code = unpair(arg)
    space = cms_from_id(space_id)
    opens = decode_sequence(opens_code)
    for j in range(len(opens)):
        yield write_event(j, 0)
    flagged: set[int] = set()
    for s in count():
        yield from read_when_ready(source, s)
        here = Ball(source(s), power_of_two(s))
        budget = 1 << max(s, 1).bit_length()
        for j, n in enumerate(opens):
            if j in flagged:
                continue
            if any(formal_relations(space, here, Ball.from_index(m)) is Relation.INCLUDED for m in open_balls(n, budget)):
                flagged.add(j)
                yield write_event(j, 1)
        yield TICK


def metric_jump(space: CMS, opens: Sequence[int]) -> MachineCode:
    """J_X 제한: 셀 j = [x ∈ U_{opens[j]}]"""
    arg = pair(cms_id(space), encode_sequence(list(opens)))
    return native_code("metric_jump", arg, Kind.FMC, f"J_{space.name}[{len(opens)}]")


def jump_run(space: CMS, p: Stream, opens: Sequence[int], budget: int) -> LimitRun:
    return run_limit(metric_jump(space, opens), p, budget)


def _dense_center(space: CMS, x: Q, length: int) -> int:
    if space.name == "R":
        return space.index_of(x)
    scale = 1 << (length + 2)
    return space.index_of(min(max(Q(round(x * scale), scale), ZERO_Q), Q(1)))


def jump_inverse_prefix(
    space: CMS,
    bits: Word,
    opens: Sequence[int],
    budget: int = ENUMERATION_BUDGET,
    length: int = INVERSE_LENGTH,
) -> Word:
    """
    A Cauchy-name prefix for a point lying in every open set whose bit is 1.

    Only R and [0,1] are supported: the flagged unions are intersected as interval lists,
    and the name repeats the centre of their hull for as long as the hull is no wider
    than 2^{-k}. Bits of 0 impose nothing, so all-zero bits give the empty prefix.
    """
    if space.name not in ("R", "unit"):
        raise ContractViolation(f"inverse jump is only implemented on R and [0,1], not {space.name}")
    region: list[Interval] | None = None
    for bit, n in zip(bits, opens):
        if bit != 1:
            continue
        pieces = [b.interval(space) for b in map(Ball.from_index, sorted(open_balls(n, budget))) if b.radius > 0]
        if region is None:
            region = pieces
        else:
            region = [c for a in region for b in pieces if (c := a.intersection(b)) is not None]
        if not region:
            raise NotInRange(f"the open sets flagged by {bits} have no common point")
    if region is None:
        return ()
    hull = Interval.hull(region)
    center = _dense_center(space, hull.mid, length)
    out: list[int] = []
    for k in range(length):
        if hull.width > power_of_two(k):
            break
        out.append(center)
    log_message(f"[metric] inverse jump: {len(region)} pieces, hull {hull}, prefix length {len(out)}")
    return tuple(out)


# ──────────────────────────────────────────
# 거리 공간 값 limit 정규형
# ──────────────────────────────────────────


def race_row(space: CMS, row: list[int], value: int) -> Iterator[Event]:
    """
    Races the two verdicts on appending `value` to `row`, one refinement of the distance
    bounds per round:

        (1)  d(value, row[j]) < 2^{-j} for every j      the row may continue
        (2)  d(value, row[j]) > 2^{-j-1} for some j     the row repeats its last value

    Condition (1) is checked first in every round. Returns True when it wins. After
    `RACE_ROUNDS` undecided rounds the row repeats.
    """
    for precision in range(RACE_ROUNDS):
        bounds = [space.dist_bounds(value, c, precision) for c in row]
        if all(b.hi < power_of_two(j) for j, b in enumerate(bounds)):
            return True
        if any(b.lo > power_of_two(j + 1) for j, b in enumerate(bounds)):
            return False
        yield TICK
    return False


@microcode("metric_limit_normal_form")
def _metric_limit_normal_form_body(arg: int, source: Source) -> Iterator[Event]:
    index, space_id = unpair(arg)
    space = cms_from_id(space_id)
    tracker = TapeTracker(decode_program(index), source)
    rows: dict[int, list[int]] = {}
    frozen: set[int] = set()
    for m in count():
        i, k = unpair(m)
        row = rows.setdefault(i, [])
        if i in frozen:
            row.append(row[-1])
            yield append_event(row[-1])
            continue
        yield from tracker.wait(lambda: tracker.first_fill(k) is not None)
        fill = tracker.first_fill(k)
        if fill is None:
            while True:
                yield TICK
        target = fill + i
        yield from tracker.wait(lambda: tracker.sim.steps >= target)
        value = tracker.value_at(k, target)
        if row and not (yield from race_row(space, row, value)):
            # 이 행은 여기서부터 마지막 값을 되풀이합니다.
            frozen.add(i)
            value = row[-1]
        row.append(value)
        yield append_event(value)


def metric_limit_normal_form(f: MachineCode, space: CMS) -> MachineCode:
    """
    From a limit machine whose tape converges to a Cauchy name in `space`, a monotone
    code emitting ⟨r_0, r_1, ...⟩ where every r_i is a valid Cauchy name and the points
    they name converge to the point named by the tape.
    """
    f.require(Kind.LIMIT, Kind.FMC)
    return native_code("metric_limit_normal_form", pair(f.index, cms_id(space)), label=f"lnf_{space.name}({f.label})")
