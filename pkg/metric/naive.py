"""
Naive Cauchy names against jumped Cauchy names.

A naive name is any sequence of α-indices converging in X. Reading it as a sequence of
constant Cauchy names and applying the limit normal form of lim_X gives a δ_X′ name;
in the other direction the i-th point of the naive name is the last cell of r_i's
longest valid prefix among r_i(0..i).
"""
from baire.stream import Stream, interleave_omega
from baire.words import pair, unpair
from metric.cauchy import fast_convergence_violation
from metric.cms import CMS, cms_from_id, cms_id
from metric.limits import metric_limit, metric_limit_normal_form
from spaces.representations import CauchyRepresentation, JumpedRepresentation, NaiveCauchyRepresentation
from spaces.translators import Translator, compose, native_code
from vm.natives import Reader, cell_native
from vm.program import MachineCode

# 순진한 이름과 점프 이름을 읽는 성분 번호
NAIVE_DECODE_STAGE = 256


def _points_stream(arg: int, p: Stream) -> Stream:
    return interleave_omega(lambda i: Stream.constant(p.at(i)), label=f"points({p.label})")


@cell_native("points_as_names", stream_form=_points_stream)
def _points_as_names_cell(arg: int, read: Reader, m: int) -> int:
    i, _ = unpair(m)
    return read(i)


POINTS_AS_NAMES = native_code("points_as_names", label="points")


def valid_index(space: CMS, row: tuple[int, ...]) -> int:
    """row의 가장 긴 유효 앞부분의 마지막 위치"""
    found = fast_convergence_violation(space, row)
    return len(row) - 1 if found is None else found[1] - 1


@cell_native("diagonal_extraction")
def _diagonal_extraction_cell(arg: int, read: Reader, i: int) -> int:
    space = cms_from_id(arg)
    row = tuple(read(pair(i, j)) for j in range(i + 1))
    return row[valid_index(space, row)]


def naive_to_jump(space: CMS) -> MachineCode:
    return compose(metric_limit_normal_form(metric_limit(space), space), POINTS_AS_NAMES)


def diagonal_extraction(space: CMS) -> MachineCode:
    return native_code("diagonal_extraction", cms_id(space), label=f"diag_{space.name}")


def naive_translators(space: CMS, stage: int = NAIVE_DECODE_STAGE) -> tuple[Translator, Translator]:
    """δ_X^n → δ_X′ 와 δ_X′ → δ_X^n"""
    naive = NaiveCauchyRepresentation(space, stage)
    jumped = JumpedRepresentation(CauchyRepresentation(space), "lim", stage)
    return (
        Translator(label="n→′", source=naive, target=jumped, code=naive_to_jump(space)),
        Translator(label="′→n", source=jumped, target=naive, code=diagonal_extraction(space)),
    )
