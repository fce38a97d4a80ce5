import math

import numpy as np
import pytest
from pydantic import ValidationError

from baire.stream import ZERO, Stream
from gallery.analysis import (
    derivative_pointwise,
    derivative_uniform,
    escapes,
    grid_sup_distance,
    mandelbrot_distance_lower,
)
from gallery.counterexamples import (
    MIND_CHANGE_BOUNDS,
    ZERO_NAME,
    chi_U_sierpinski,
    chi_u_code,
    f_cantor,
    f_cantor_code,
    f_smooth,
    f_unit,
    f_unit_exact,
)
from gallery.demos import DEMO_SAMPLES, DEMOS, demo_samples, run_demo
from gallery.fin import FinEntry, FinUniverse, universe_from_arg
from gallery.functions import BumpFn, gallery_function, polynomial, triangle_piece
from gallery.machines import FMC_BOUNDS, eq_test_code
from gallery.semicomputable import semicomputable_translator
from metric.cauchy import is_cauchy_prefix
from metric.cms import REALS, UNIT
from metric.rationals import Q, Interval, power_of_two, rational_index
from tests.conftest import random_stream
from vm.machine import run_limit
from vm.oracle import WhitelistOracle
from vm.program import Kind, MachineCode, encode_program, format_program, parse_program


@pytest.fixture(scope="module")
def desk() -> FinUniverse:
    return FinUniverse.load("fin.json")


def close_to(index: int, x: Q | float, k: int) -> bool:
    return abs(float(REALS.alpha(index)) - float(x)) <= float(power_of_two(k))


# ──────────────────────────────────────────
# Fin 우주
# ──────────────────────────────────────────


def test_desk_universe_sizes(desk: FinUniverse) -> None:
    assert [desk.size(n) for n in range(6)] == [None, 1, 2, 2, None, 0]
    assert [desk.in_fin(n) for n in range(6)] == [False, True, True, True, False, True]
    assert desk.enumerate(2, 3) == 4
    assert desk.enumerate(7, 0) is None
    assert desk.describe() == "fin:desk"


def test_distinct_values_count_late_arrivals(desk: FinUniverse) -> None:
    assert desk.distinct(3, 5) == 1
    assert desk.distinct(3, 6) == 2
    assert desk.distinct(2, 0) == 1 and desk.distinct(2, 10) == 2
    assert desk.distinct(0, 9) == 10


def test_fin_entries_are_validated() -> None:
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="finite", data="count:0,1")
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="generator", data=[1, 2])
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="generator", data="nonsense")
    inline = FinUniverse.of({0: [], 1: "periodic:2,3"})
    assert inline.size(0) == 0 and inline.size(1) == 2


COUNTER = "loop: APPEND 1\n      INC 1\n      JZ 0 loop\n"


def test_machine_entries_enumerate_by_output() -> None:
    index = encode_program(parse_program(COUNTER))
    universe = FinUniverse(
        name="machines",
        entries=[
            FinEntry(n=0, kind="machine", data=str(index)),
            FinEntry(n=1, kind="machine", data="head", size=1),
        ],
    )
    assert [universe.enumerate(0, i) for i in range(4)] == [0, 1, 2, 3]
    assert universe.distinct(0, 9) == 10 and not universe.in_fin(0)
    assert universe.enumerate(1, 5) == 0 and universe.distinct(1, 5) == 1
    assert universe.size(1) == 1 and universe.in_fin(1)


def test_machine_entries_are_validated() -> None:
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="machine", data="E")
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="machine", data=[1])
    with pytest.raises(ValidationError):
        FinEntry(n=0, kind="finite", data=[1], size=1)


# ──────────────────────────────────────────
# 0̂ 판정
# ──────────────────────────────────────────


def test_eq_test_examples() -> None:
    e = eq_test_code()
    assert run_limit(e, ZERO, 1000).written_prefix(8) == (1,) * 8
    late = run_limit(e, Stream.eventually((0, 0, 0, 1), (0,)), 1000)
    assert late.written_prefix(8) == (0,) * 8
    assert late.global_mind_changes == 1
    early = run_limit(e, Stream.eventually((7,), (0,)), 1000)
    assert early.written_prefix(8) == (0,) * 8
    assert early.global_mind_changes == 0


def test_eq_test_mind_change_bound(rng: np.random.Generator) -> None:
    for _ in range(100):
        run = run_limit(eq_test_code(), random_stream(rng, alphabet=2), 1000)
        assert run.global_mind_changes <= FMC_BOUNDS["E"]


# ──────────────────────────────────────────
# Fin 반례 함수
# ──────────────────────────────────────────


def test_f_cantor_examples(desk: FinUniverse) -> None:
    hit = f_cantor(desk, Stream.eventually((0, 0, 1, 1, 1, 0), (0,)), 2000)
    assert hit.written_prefix(8) == (REALS.index_of(Q(1, 4)),) * 8
    assert f_cantor(desk, ZERO, 2000).written_prefix(8) == (ZERO_NAME,) * 8


def test_f_cantor_changes_twice_when_a_value_arrives_late(desk: FinUniverse) -> None:
    run = f_cantor(desk, Stream.eventually((0, 0, 0, 1, 1, 0), (0,)), 2000)
    assert run.written_prefix(8) == (ZERO_NAME,) * 8
    assert run.global_mind_changes == 2


def test_f_cantor_mind_change_bound(desk: FinUniverse, rng: np.random.Generator) -> None:
    for _ in range(100):
        run = f_cantor(desk, random_stream(rng, head=10, alphabet=2), 2000)
        assert run.global_mind_changes <= MIND_CHANGE_BOUNDS["f_cantor"]


def test_chi_u_examples(desk: FinUniverse) -> None:
    assert chi_U_sierpinski(desk, ZERO, 2000).written_prefix(8) == (0,) * 8
    inside = chi_U_sierpinski(desk, Stream.eventually((0, 0, 1, 1, 1, 0), (0,)), 2000)
    assert inside.written_prefix(8) == (0,) * 8
    outside = chi_U_sierpinski(desk, Stream.eventually((1,), (0,)), 2000)
    assert outside.written_prefix(4) == (1, 0, 0, 0)


def test_chi_u_reaches_three_changes(desk: FinUniverse) -> None:
    run = chi_U_sierpinski(desk, Stream.eventually((0, 0, 0, 0, 1, 1, 1, 0), (0,)), 2000)
    assert run.written_prefix(4) == (1, 0, 0, 0)
    assert run.global_mind_changes == 3


def test_chi_u_mind_change_bound(desk: FinUniverse, rng: np.random.Generator) -> None:
    for _ in range(100):
        run = chi_U_sierpinski(desk, random_stream(rng, head=10, alphabet=2), 2000)
        assert run.global_mind_changes <= MIND_CHANGE_BOUNDS["chi_U"]


def test_chi_u_tracks_late_values_after_the_block(desk: FinUniverse) -> None:
    # W_3 = {5, 8}: 3 ∈ Fin이지만 8은 e_3(6)에서야 나옵니다. 블록 뒤에 1이 와도 0으로 돌아갑니다.
    run = chi_U_sierpinski(desk, Stream.eventually((0, 0, 0, 1, 1, 1, 0, 1), (0,)), 2000)
    assert run.written_prefix(4) == (0, 0, 0, 0)
    assert run.global_mind_changes == 2


def test_chi_u_unfinished_block_is_outside(desk: FinUniverse) -> None:
    run = chi_U_sierpinski(desk, Stream.eventually((0, 0), (1,)), 2000)
    assert run.written_prefix(4) == (1, 0, 0, 0)
    assert run.global_mind_changes == 1


def test_counterexample_codes_carry_their_universe(desk: FinUniverse) -> None:
    code = chi_u_code(desk)
    assert "NATIVE chi_U " in format_program(code.program)
    assert chi_u_code(FinUniverse.load("fin.json")) == code
    assert universe_from_arg(desk.to_arg()).model_dump() == desk.model_dump()
    assert f_cantor_code(desk) != f_cantor_code(FinUniverse.of({2: [4]}))

    p = Stream.eventually((0, 0, 1, 1, 1, 0), (0,))
    bare = MachineCode(index=code.index, kind=Kind.FMC)
    assert run_limit(bare, p, 2000).written_prefix(4) == chi_U_sierpinski(desk, p, 2000).written_prefix(4)


def test_chi_u_over_machine_presented_sets() -> None:
    universe = FinUniverse(entries=[FinEntry(n=2, kind="machine", data="head", size=1)])
    inside = chi_U_sierpinski(universe, Stream.eventually((0, 0, 1, 1, 0), (0,)), 2000)
    assert inside.written_prefix(2) == (0, 0)
    outside = chi_U_sierpinski(universe, Stream.eventually((0, 0, 1, 0), (0,)), 2000)
    assert outside.written_prefix(2) == (1, 0)


def test_triangle_piece_support() -> None:
    piece = triangle_piece(1, 1)
    assert piece.point(Q(5, 16)) == Interval.point(Q(1, 2))
    assert piece.enclose(Interval(Q(3, 8), Q(1, 2))) == Interval.point(0)
    assert piece.enclose(Interval(0, Q(1, 4))) == Interval.point(0)


def test_f_unit_examples(desk: FinUniverse) -> None:
    assert f_unit_exact(desk, Q(5, 16)) == Q(1, 2)
    assert f_unit_exact(desk, Q(3, 4)) == 0
    assert f_unit_exact(desk, Q(1, 2)) == 0
    peak = f_unit(desk, Stream.constant(UNIT.index_of(Q(5, 16))), 5000).written_prefix(6)
    assert all(close_to(cell, Q(1, 2), j) for j, cell in enumerate(peak))
    right = f_unit(desk, Stream.constant(UNIT.index_of(Q(3, 4))), 5000)
    assert right.written_prefix(6) == (ZERO_NAME,) * 6


def test_f_unit_on_dyadic_grid(desk: FinUniverse) -> None:
    for i in range(8, 33):
        x = Q(i, 64)
        run = f_unit(desk, Stream.constant(UNIT.index_of(x)), 3000)
        assert run.global_mind_changes <= 1
        cells = run.written_prefix(4)
        assert all(close_to(cell, f_unit_exact(desk, x), j) for j, cell in enumerate(cells))


def test_f_smooth_examples(desk: FinUniverse) -> None:
    peak = f_smooth(desk, Stream.constant(REALS.index_of(Q(9, 8))), 5000).written_prefix(5)
    assert all(close_to(cell, math.exp(-1), j) for j, cell in enumerate(peak))
    left = f_smooth(desk, Stream.constant(REALS.index_of(Q(-1, 2))), 2000)
    assert left.written_prefix(6) == (ZERO_NAME,) * 6


def test_bump_is_flat_at_its_peak() -> None:
    bump = BumpFn()
    for n in range(4, 12):
        h = power_of_two(n)
        quotient = (bump.point(h) - bump.point(-h)) * (1 / (2 * h))
        assert quotient.straddles_zero()
    assert bump.enclose(Interval(2, 3)) == Interval.point(0)


# ──────────────────────────────────────────
# 도함수
# ──────────────────────────────────────────


def test_pointwise_derivative_examples() -> None:
    square = gallery_function("square")
    cube = gallery_function("cube")
    constant = polynomial(5)
    for n in range(8):
        ball = derivative_pointwise(square, Q(1, 2), n)
        assert REALS.alpha(ball.center) == 1 and ball.radius == 0
        assert REALS.alpha(derivative_pointwise(cube, 0, n).center) == power_of_two(2 * n)
        assert REALS.alpha(derivative_pointwise(constant, Q(1, 3), n).center) == 0


def test_difference_quotient_of_square_is_tilted() -> None:
    square = gallery_function("square")
    for n in range(1, 6):
        for x in Interval(0, 1).grid(3):
            expected = 2 * x + power_of_two(n) * (1 - 2 * x)
            assert REALS.alpha(derivative_pointwise(square, x, n).center) == expected


def test_pointwise_derivative_of_a_kink_free_region() -> None:
    triangle = gallery_function("triangle")
    for n in range(2, 8):
        ball = derivative_pointwise(triangle, Q(1, 4), n)
        assert REALS.alpha(ball.center) == 2 and ball.radius == 0


def test_pointwise_derivative_from_a_name() -> None:
    square = gallery_function("square")
    ball = derivative_pointwise(square, Stream.constant(UNIT.index_of(Q(1, 2))), 4)
    assert Interval.ball(REALS.alpha(ball.center), ball.radius).contains(1)


def test_uniform_derivative_sequences() -> None:
    square = polynomial(0, 0, 1)
    sequence = derivative_uniform(square)
    for n in range(13):
        assert grid_sup_distance(sequence[n], square.derivative(), 5) == power_of_two(n)
    cube = polynomial(0, 0, 0, 1)
    assert grid_sup_distance(derivative_uniform(cube)[10], cube.derivative(), 5) <= power_of_two(6)
    line = polynomial(3, 7)
    assert derivative_uniform(line)[4].coefficients() == [7]


def test_uniform_derivative_of_interval_functions() -> None:
    f_n = derivative_uniform(gallery_function("triangle"))[6]
    assert f_n.point(Q(1, 4)) == Interval.point(2)
    assert f_n.point(Q(3, 4)) == Interval.point(-2)


# ──────────────────────────────────────────
# 망델브로 거리
# ──────────────────────────────────────────


def test_escape_certificates() -> None:
    assert escapes(Interval(3), Interval(0))
    assert escapes(Interval(1, Q(5, 4)), Interval(1, Q(5, 4)))
    assert not escapes(Interval(-2), Interval(0))
    assert not escapes(Interval(Q(-1, 8), Q(1, 8)), Interval(Q(-1, 8), Q(1, 8)))


def test_mandelbrot_distance_inside() -> None:
    assert mandelbrot_distance_lower((0, 0), depth=3) == [0, 0, 0]


@pytest.mark.acceptance
def test_mandelbrot_distance_outside() -> None:
    bounds = mandelbrot_distance_lower((-3, 0), depth=6)
    assert bounds == [1 - power_of_two(d) for d in range(1, 7)]
    assert bounds == sorted(bounds)
    assert bounds[-1] > Q(9, 10)
    assert bounds[-1] <= 1 + power_of_two(8)


# ──────────────────────────────────────────
# 반계산 가능 실수
# ──────────────────────────────────────────


def test_lower_translator_converges_to_sup() -> None:
    ramp = Stream(lambda i: rational_index(1 - power_of_two(i)), label="ramp")
    run = run_limit(semicomputable_translator("lower"), ramp, 4000)
    cells = run.written_prefix(6)
    assert cells == tuple(rational_index(1 - power_of_two(j + 2)) for j in range(6))
    assert is_cauchy_prefix(REALS, cells)


def test_upper_translator_mirrors_lower() -> None:
    ramp = Stream(lambda i: rational_index(1 + power_of_two(i)), label="ramp")
    run = run_limit(semicomputable_translator("upper"), ramp, 4000)
    assert run.written_prefix(6) == tuple(rational_index(1 + power_of_two(j + 2)) for j in range(6))


def test_constant_enumeration_names_its_value() -> None:
    third = Stream.constant(rational_index(Q(1, 3)))
    cells = run_limit(semicomputable_translator("lower"), third, 2000).written_prefix(8)
    assert is_cauchy_prefix(REALS, cells)
    assert all(0 <= Q(1, 3) - REALS.alpha(cell) < power_of_two(j + 2) for j, cell in enumerate(cells))


def test_translator_direction_is_checked() -> None:
    assert semicomputable_translator("upper").label == "id:R_>→R"
    with pytest.raises(ValueError):
        semicomputable_translator("sideways")


# ──────────────────────────────────────────
# 데스크 데모
# ──────────────────────────────────────────


def test_demo_samples_are_seeded() -> None:
    assert [p.prefix(10) for p in demo_samples(7, 3)] == [p.prefix(10) for p in demo_samples(7, 3)]


@pytest.mark.acceptance
@pytest.mark.parametrize("name", sorted(DEMOS))
def test_desk_demos_pass(name: str, universe: WhitelistOracle) -> None:
    report = run_demo(name, universe, count=DEMO_SAMPLES)
    assert report.passed, report.failures
    assert report.checks > 0 and report.trace


@pytest.mark.parametrize("name", ["shoenfield", "friedberg"])
def test_desk_demo_on_one_sample(name: str, universe: WhitelistOracle) -> None:
    report = run_demo(name, universe, count=1)
    assert report.passed, report.failures
    assert report.checks > 0 and report.trace


def test_unknown_demo(universe: WhitelistOracle) -> None:
    with pytest.raises(KeyError):
        run_demo("gödel", universe)
