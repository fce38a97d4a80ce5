"""
Host microcode behind the NATIVE instruction.

`NATIVE k` with k = pair(tag, arg) runs the microcode registered under `tag`. Microcode
is a Python generator yielding machine events; every event costs one step. Cell
natives are monotone realizers given as a function (arg, read, m) ↦ m-th output cell,
which gives random access to their output stream.

Fixed tags are listed in `NATIVE_TAGS` together with the module that registers them,
so a program can be decoded and run before that module was imported. Natives that
depend on data (a Fin universe, a whitelist manifest) read it from their argument.
"""
import importlib
import threading
from typing import Callable, Iterator, NamedTuple

from core.context import registry_lock
from core.errors import MalformedCode

# ──────────────────────────────────────────
# 이벤트
# ──────────────────────────────────────────

EV_TICK = 0
EV_READ = 1
EV_WRITE = 2
EV_APPEND = 3

Event = tuple[int, int, int]
TICK: Event = (EV_TICK, 0, 0)

# 입력 셀을 읽습니다. 아직 값이 없으면 None (막힘)
Source = Callable[[int], int | None]
Reader = Callable[[int], int]
Microcode = Callable[[int, Source], Iterator[Event]]
CellFunction = Callable[[int, Reader, int], int]


def write_event(cell: int, value: int) -> Event:
    return (EV_WRITE, cell, value)


def append_event(value: int) -> Event:
    return (EV_APPEND, value, 0)


def read_event(index: int, value: int) -> Event:
    return (EV_READ, index, value)


class Blocked(Exception):
    """셀 함수가 아직 준비되지 않은 입력 셀을 읽으려 할 때 (내부 신호)"""


def strict_reader(source: Source) -> Reader:
    def read(i: int) -> int:
        value = source(i)
        if value is None:
            raise Blocked(i)
        return value

    return read


# ──────────────────────────────────────────
# 태그 표
# ──────────────────────────────────────────

NATIVE_TAGS: dict[str, tuple[int, str]] = {
    "lim_map": (1, "gallery.machines"),
    "running_max": (2, "gallery.machines"),
    "first_nonzero": (3, "gallery.machines"),
    "change_monitor": (4, "vm.synthesis"),
    "sequence_monitor": (5, "vm.synthesis"),
    "precompose": (6, "vm.synthesis"),
    "member": (7, "vm.synthesis"),
    "zero_input": (8, "vm.synthesis"),
    "limit_to_monotone": (9, "transforms.normal_forms"),
    "fmc_normal_form": (10, "transforms.normal_forms"),
    "monotone_after_limit": (11, "transforms.compose"),
    "limit_after_fmc": (12, "transforms.compose"),
    "jump_normal_form": (13, "transforms.jump"),
    "jump_inverse": (14, "transforms.jump"),
    "jump_transport": (15, "transforms.jump"),
    "low_apply": (16, "transforms.jump"),
    "phi_eval": (17, "vm.phi"),
    "phi_curry": (18, "vm.phi"),
    "seq_to_phi": (19, "vm.phi"),
    "phi_to_seq": (20, "vm.phi"),
    "constant_embedding": (21, "spaces.translators"),
    "diagonal": (22, "spaces.translators"),
    "jump_of_approximations": (23, "spaces.translators"),
    "limit_of_jump_inverse": (24, "spaces.translators"),
    "galois_forward": (25, "spaces.galois"),
    "galois_backward": (26, "spaces.galois"),
    "halting_normal_form": (27, "transforms.halting"),
    "componentwise": (28, "transforms.witnesses"),
    "real_add": (29, "metric.arithmetic"),
    "real_sub": (30, "metric.arithmetic"),
    "real_mul": (31, "metric.arithmetic"),
    "unzip_sequence": (32, "spaces.isos"),
    "zip_sequences": (33, "spaces.isos"),
    "funcspace_easy": (34, "spaces.isos"),
    "compose_monotone": (35, "spaces.translators"),
    "metric_limit": (36, "metric.limits"),
    "metric_jump": (37, "metric.limits"),
    "metric_limit_normal_form": (38, "metric.limits"),
    "points_as_names": (39, "metric.naive"),
    "diagonal_extraction": (40, "metric.naive"),
    "semicomputable": (41, "gallery.semicomputable"),
    "f_cantor": (42, "gallery.counterexamples"),
    "chi_U": (43, "gallery.counterexamples"),
    "f_unit": (44, "gallery.counterexamples"),
    "f_smooth": (45, "gallery.counterexamples"),
    "funcspace_hard": (46, "spaces.isos"),
}

_TAG_NAMES = {tag: name for name, (tag, _) in NATIVE_TAGS.items()}
_TAG_MODULES = {tag: module for tag, module in NATIVE_TAGS.values()}


class NativeSpec(NamedTuple):
    name: str
    tag: int
    body: Microcode
    cell: CellFunction | None = None
    stream_form: Callable | None = None


_registry: dict[int, NativeSpec] = {}
_import_lock = threading.Lock()


def tag_of(name: str) -> int:
    if name not in NATIVE_TAGS:
        raise MalformedCode(f"unknown native name {name!r}")
    return NATIVE_TAGS[name][0]


def name_of(tag: int) -> str | None:
    spec = _registry.get(tag)
    if spec is not None:
        return spec.name
    return _TAG_NAMES.get(tag)


def _cell_body(fn: CellFunction) -> Microcode:
    """셀 함수를 순차 마이크로코드로: m = 0, 1, ...을 차례로 출력합니다."""

    def body(arg: int, source: Source) -> Iterator[Event]:
        read = strict_reader(source)
        m = 0
        while True:
            try:
                value = fn(arg, read, m)
            except Blocked:
                yield TICK
                continue
            yield append_event(value)
            m += 1

    return body


def _install(spec: NativeSpec) -> None:
    with registry_lock:
        _registry[spec.tag] = spec


def microcode(name: str):
    """고정 태그에 순차 마이크로코드를 등록하는 데코레이터"""

    def decorator(fn: Microcode) -> Microcode:
        _install(NativeSpec(name, tag_of(name), fn))
        return fn

    return decorator


def cell_native(name: str, stream_form: Callable | None = None):
    """고정 태그에 셀 함수를 등록하는 데코레이터"""

    def decorator(fn: CellFunction) -> CellFunction:
        _install(NativeSpec(name, tag_of(name), _cell_body(fn), fn, stream_form))
        return fn

    return decorator


def lookup(tag: int) -> NativeSpec | None:
    """등록된 마이크로코드; 알 수 없는 태그는 None"""
    spec = _registry.get(tag)
    if spec is not None:
        return spec
    module = _TAG_MODULES.get(tag)
    if module is None:
        return None
    with _import_lock:
        importlib.import_module(module)
    return _registry.get(tag)


def read_when_ready(source: Source, index: int) -> Iterator[Event]:
    """셀이 준비될 때까지 TICK, 그다음 읽기 이벤트"""
    while (value := source(index)) is None:
        yield TICK
    yield read_event(index, value)
