from itertools import combinations

import pytest

from baire.stream import Stream, constant_sequence, interleave_omega
from core.errors import BudgetExhausted, ContractViolation, InvalidName, NotInRange
from gallery.functions import BinaryValueFn, gallery_function, identity, polynomial
from metric.arithmetic import REAL_ADD, REAL_MUL, apply_operation
from metric.cauchy import (
    Ball,
    Relation,
    check_cauchy_prefix,
    exact_limit,
    formal_relations,
    is_cauchy_prefix,
    rounded_name,
)
from metric.cms import CANTOR, NATURALS, POLYNOMIALS, REALS, UNIT, cms_by_name, cms_from_id, cms_id
from metric.generics import jump_on_generics_metric
from metric.limits import (
    ball_open,
    jump_inverse_prefix,
    jump_run,
    limit_run,
    metric_limit,
    metric_limit_normal_form,
    race_row,
)
from metric.moduli import (
    IteratedWhitelist,
    alpha_names,
    check_modulus,
    dyadic_probes,
    evaluate_to_precision,
    modulus,
    reconstruct_from_modulus,
    uniform_modulus,
)
from metric.naive import naive_translators, valid_index
from metric.rationals import Q, Interval, power_of_two, rational_at
from metric.zeros import certified_sign, unique_zero
from vm.machine import output_stream
from vm.oracle import Verdict, WhitelistOracle


def r(x: int | Q) -> int:
    return REALS.index_of(Q(x))


def unit_name(x: Q) -> Stream:
    """[0,1]의 이름: 셀 k는 2^{-k-1} 격자로 반올림한 x"""
    return Stream(lambda k: UNIT.index_of(Q(round(x * (1 << (k + 1))), 1 << (k + 1))), label=f"unit:{x}")


def assert_fast(space, name: Stream, length: int = 12) -> None:
    assert is_cauchy_prefix(space, name.prefix(length))


# ──────────────────────────────────────────
# 공간과 공
# ──────────────────────────────────────────


def test_space_numbers_round_trip() -> None:
    for space in (REALS, UNIT, CANTOR, NATURALS, POLYNOMIALS):
        assert cms_from_id(cms_id(space)).name == space.name
    assert cms_by_name("Rxunit").name == "Rxunit"
    with pytest.raises(KeyError):
        cms_by_name("hilbert")


def test_dense_points() -> None:
    assert REALS.alpha(REALS.index_of(Q(-3, 7))) == Q(-3, 7)
    assert UNIT.alpha(UNIT.index_of(Q(3, 8))) == Q(3, 8)
    assert CANTOR.dist(CANTOR.index_of((1, 0, 1)), CANTOR.index_of((1, 0, 0, 1))) == Q(1, 4)
    with pytest.raises(ValueError):
        UNIT.index_of(Q(1, 3))


def test_formal_relations() -> None:
    assert formal_relations(REALS, Ball(r(0), Q(1, 4)), Ball(r(0), Q(1))) is Relation.INCLUDED
    assert formal_relations(REALS, Ball(r(0), Q(1, 4)), Ball(r(1), Q(1, 4))) is Relation.DISJOINT
    for precision in (4, 16, 64):
        assert formal_relations(REALS, Ball(r(0), Q(1, 2)), Ball(r(1), Q(1, 2)), precision) is Relation.UNKNOWN


def test_ball_numbers() -> None:
    ball = Ball(r(Q(1, 3)), Q(1, 8))
    assert Ball.from_index(ball.index) == ball
    assert ball.interval(REALS) == Interval(Q(5, 24), Q(11, 24))


def test_cauchy_prefix_check() -> None:
    check_cauchy_prefix(REALS, rounded_name(Q(1, 3)).prefix(16))
    with pytest.raises(InvalidName):
        check_cauchy_prefix(REALS, (r(0), r(1)))
    assert exact_limit(REALS, Stream.constant(r(Q(2, 5)))) == Q(2, 5)
    assert exact_limit(REALS, rounded_name(Q(1, 3))) is None


def test_field_operations() -> None:
    third, sixth = rounded_name(Q(1, 3)), rounded_name(Q(1, 6))
    total = apply_operation(REAL_ADD, third, sixth)
    product = apply_operation(REAL_MUL, rounded_name(Q(3)), third)
    for k in range(10):
        assert abs(rational_at(total.at(k)) - Q(1, 2)) < power_of_two(k)
        assert abs(rational_at(product.at(k)) - 1) < power_of_two(k)
    assert_fast(REALS, total)


# ──────────────────────────────────────────
# lim_X 와 J_X
# ──────────────────────────────────────────


def test_metric_limit_of_powers_of_two() -> None:
    seq = interleave_omega(lambda n: rounded_name(power_of_two(n)))
    run = limit_run(REALS, seq, 2000)
    for k in range(5):
        assert abs(rational_at(run.tape[k])) <= power_of_two(k)


def test_metric_limit_of_constant_sequence() -> None:
    run = limit_run(REALS, constant_sequence(rounded_name(Q(1, 3))), 600)
    for k in range(6):
        assert abs(rational_at(run.tape[k]) - Q(1, 3)) < power_of_two(k)
        assert run.mind_changes(k) == 0


def test_metric_limit_on_cantor_space() -> None:
    seq = interleave_omega(lambda n: Stream.constant(CANTOR.index_of((0,) * n + (1,))))
    run = limit_run(CANTOR, seq, 2000)
    for k in range(4):
        assert CANTOR.dist(run.tape[k], 0) < power_of_two(k)


def test_metric_jump_flags_interior_points() -> None:
    opens = [ball_open([Ball(r(0), Q(1, 2))]), ball_open([])]
    inside = jump_run(REALS, Stream.constant(r(0)), opens, 200)
    outside = jump_run(REALS, Stream.constant(r(2)), opens, 200)
    assert (inside.tape[0], inside.tape[1]) == (1, 0)
    assert (outside.tape[0], outside.tape[1]) == (0, 0)
    assert inside.mind_changes(0) == 1
    assert metric_limit(REALS).label == "lim_R"


def test_jump_inverse_prefix() -> None:
    opens = [ball_open([Ball(r(Q(1, 4)), Q(1, 8))]), ball_open([Ball(r(Q(1, 4)), Q(1, 16))])]
    prefix = jump_inverse_prefix(REALS, (1, 1), opens)
    assert prefix == (r(Q(1, 4)),) * 4
    assert jump_inverse_prefix(REALS, (0, 0), opens) == ()
    assert is_cauchy_prefix(REALS, prefix)


def test_jump_inverse_prefix_contradiction() -> None:
    opens = [ball_open([Ball(r(0), Q(1, 4))]), ball_open([Ball(r(1), Q(1, 4))])]
    with pytest.raises(NotInRange):
        jump_inverse_prefix(REALS, (1, 1), opens)
    with pytest.raises(ContractViolation):
        jump_inverse_prefix(CANTOR, (1,), opens[:1])


# ──────────────────────────────────────────
# limit 정규형과 순진한 이름
# ──────────────────────────────────────────


def test_metric_limit_normal_form_rows_are_names() -> None:
    code = metric_limit_normal_form(metric_limit(REALS), REALS)
    out = output_stream(code, constant_sequence(rounded_name(Q(1, 3))))
    for i in range(4):
        row = out.component(i).prefix(5)
        assert is_cauchy_prefix(REALS, row)
        assert all(abs(rational_at(v) - Q(1, 3)) < 1 for v in row)


def race_winner(space, row: list[int], value: int) -> tuple[bool, int]:
    """(조건 (1)이 이겼는지, 걸린 라운드 수)"""
    race = race_row(space, row, value)
    rounds = 0
    while True:
        try:
            next(race)
        except StopIteration as stop:
            return stop.value, rounds
        rounds += 1


def test_row_race_ties_go_to_continuation() -> None:
    # d = 3/4 은 두 조건을 모두 만족합니다.
    assert race_winner(REALS, [r(0)], r(Q(3, 4))) == (True, 0)
    assert race_winner(REALS, [r(0)], r(1)) == (False, 0)
    assert race_winner(REALS, [r(0), r(Q(1, 4))], r(Q(1, 2))) == (True, 0)
    assert race_winner(REALS, [r(0), r(Q(1, 4))], r(Q(3, 4))) == (False, 0)


def test_valid_index() -> None:
    assert valid_index(REALS, (r(0), r(Q(1, 4)), r(Q(1, 8)))) == 2
    assert valid_index(REALS, (r(0), r(5), r(5))) == 0


def test_naive_constant_name() -> None:
    to_jump, _ = naive_translators(REALS, stage=8)
    name = Stream.constant(r(Q(1, 3)))
    out = to_jump.apply(name)
    assert out.component(2).prefix(4) == (r(Q(1, 3)),) * 4
    assert to_jump.check(name, 3)


def test_naive_wandering_name() -> None:
    to_jump, _ = naive_translators(REALS, stage=96)
    name = Stream.eventually((r(0), r(1), r(Q(3, 4))), (r(Q(1, 2)),))
    assert to_jump.check(name, 2)


def test_naive_round_trip() -> None:
    to_jump, to_naive = naive_translators(REALS, stage=8)
    name = Stream.constant(r(Q(1, 3)))
    assert to_naive.apply(to_jump.apply(name)).prefix(6) == (r(Q(1, 3)),) * 6


def test_diagonal_extraction_skips_invalid_rows() -> None:
    _, to_naive = naive_translators(REALS)
    good = interleave_omega(lambda i: rounded_name(Q(1, 2) + power_of_two(i + 3)))
    out = to_naive.apply(good)
    assert abs(rational_at(out.at(10)) - Q(1, 2)) < power_of_two(8)
    bad = interleave_omega(lambda i: Stream.eventually((r(0),), (r(5),)))
    assert to_naive.apply(bad).prefix(4) == (r(0),) * 4


# ──────────────────────────────────────────
# 모듈러스
# ──────────────────────────────────────────


def test_identity_modulus_is_accepted() -> None:
    f = identity()
    for n in range(1, 6):
        assert check_modulus(f, Q(1, 2), n, n).accepted
    assert modulus(f, Stream.constant(UNIT.index_of(Q(1, 2))), 3) == 3


def test_doubling_needs_one_more_bit() -> None:
    f = polynomial(0, 2, label="2x")
    rejected = check_modulus(f, Q(1, 2), 3, 3)
    assert not rejected.accepted
    assert abs(f.point(rejected.witness).lo - 1) > Q(1, 8)
    assert check_modulus(f, Q(1, 2), 3, 4).accepted
    assert modulus(f, Stream.constant(UNIT.index_of(Q(1, 2))), 3) == 4


def test_triangle_modulus() -> None:
    f = gallery_function("triangle")
    assert not check_modulus(f, Q(1, 2), 2, 2).accepted
    assert check_modulus(f, Q(1, 2), 2, 3).accepted


def test_binary_value_on_cantor_space() -> None:
    f = BinaryValueFn()
    assert check_modulus(f, (1,), 3, 3).accepted
    assert not check_modulus(f, (1,), 3, 2).accepted
    assert modulus(f, Stream.constant(CANTOR.index_of((1,))), 3) == 3


def test_evaluate_to_precision() -> None:
    f = gallery_function("square")
    assert evaluate_to_precision(f, Q(1, 2), 3) == Interval.point(Q(1, 4))
    image = evaluate_to_precision(f, unit_name(Q(1, 3)), 6)
    assert image.width <= power_of_two(6)
    assert image.contains(Q(1, 9))


def test_reconstruct_from_modulus(universe: WhitelistOracle) -> None:
    f = polynomial(0, 2, label="2x")
    x = Q(1, 3)
    for k in range(6):
        ball = reconstruct_from_modulus(alpha_names(f), lambda j, o: j + 1, universe, unit_name(x), k)
        assert ball.interval(REALS).contains(2 * x)


def test_reconstruct_from_modulus_reads_past_the_modulus(universe: WhitelistOracle) -> None:
    # 이름의 셀 j는 x에서 정확히 2^{-j} 떨어져 있어도 됩니다.
    x = Q(1, 4)
    seen: list[int] = []

    def cell(j: int) -> int:
        seen.append(j)
        return UNIT.index_of(x + power_of_two(j) if j else Q(1))

    f = polynomial(0, 2, label="2x")
    ball = reconstruct_from_modulus(alpha_names(f), lambda j, o: j + 1, universe, Stream(cell, label="edge"), 2)
    assert max(seen) == 5
    assert ball.interval(REALS).contains(2 * x)


def test_uniform_modulus_of_identity_and_doubling() -> None:
    o2 = IteratedWhitelist(dyadic_probes(6))
    m_id = uniform_modulus(identity(), o2)
    m_double = uniform_modulus(polynomial(0, 2, label="2x"), o2)
    assert [m_id(k) for k in range(4)] == [1, 2, 3, 4]
    assert [m_double(k) for k in range(4)] == [2, 3, 4, 5]
    assert "probes" in m_id.scope


def test_uniform_modulus_of_triangle_holds_on_probes() -> None:
    probes = dyadic_probes(6)
    f = gallery_function("triangle")
    m = uniform_modulus(f, IteratedWhitelist(probes))
    for k in range(5):
        close = power_of_two(m(k))
        for x, y in combinations(probes, 2):
            if abs(x - y) < close:
                assert abs(f.point(x).lo - f.point(y).lo) <= power_of_two(k)


# ──────────────────────────────────────────
# 영점과 일반점
# ──────────────────────────────────────────


@pytest.mark.parametrize(
    "coefficients, zero",
    [((Q(-1, 2), 1), Q(1, 2)), ((Q(-1, 2), 2), Q(1, 4)), ((Q(-1, 8), 0, 0, 1), Q(1, 2))],
)
def test_unique_zero(coefficients: tuple, zero: Q) -> None:
    f = polynomial(*coefficients)
    name = unique_zero(f, 0, 1)
    assert_fast(REALS, name)
    for k in range(12):
        ball = Ball(name.at(k), power_of_two(k))
        assert ball.interval(REALS).contains(zero)
        assert f.enclose(ball.interval(REALS)).straddles_zero()


def test_unique_zero_at_an_endpoint_and_without_sign_change() -> None:
    assert unique_zero(polynomial(0, 1), 0, 1).constant_value() == r(0)
    with pytest.raises(ContractViolation):
        unique_zero(polynomial(1, 1), 0, 1)
    assert certified_sign(Interval(-1, 1)) is None


def test_jump_on_generics_metric(universe: WhitelistOracle) -> None:
    around_zero = ball_open([Ball(r(0), Q(1, 2))])
    inside = jump_on_generics_metric(REALS, Stream.constant(r(0)), universe, around_zero)
    outside = jump_on_generics_metric(REALS, Stream.constant(r(2)), universe, around_zero)
    assert inside.verdict is Verdict.HALTS and inside.bit == 1
    assert outside.verdict is Verdict.LOOPS and outside.bit == 0
    assert jump_on_generics_metric(REALS, Stream.constant(r(0)), universe, ball_open([])).bit == 0


def test_jump_on_generics_agrees_with_metric_jump(universe: WhitelistOracle) -> None:
    opens = [ball_open([Ball(r(Q(1, 4)), Q(1, 8))]), ball_open([Ball(r(1), Q(1, 4))])]
    for x in (Q(1, 4), Q(7, 8), Q(-1)):
        p = Stream.constant(r(x))
        run = jump_run(REALS, p, opens, 300)
        for j, n in enumerate(opens):
            assert jump_on_generics_metric(REALS, p, universe, n).bit == run.tape[j]


def test_boundary_points_stay_undecided(universe: WhitelistOracle) -> None:
    edge = jump_on_generics_metric(REALS, Stream.constant(r(Q(1, 2))), universe, ball_open([Ball(r(0), Q(1, 2))]), 12)
    assert edge.verdict is Verdict.UNKNOWN


def test_unique_zero_without_certified_signs() -> None:
    with pytest.raises(BudgetExhausted):
        unique_zero(_Opaque(), 0, 1).at(3)


class _Opaque:
    """부호를 끝내 확정하지 못하는 함수"""

    label = "opaque"

    def point(self, x: Q) -> Interval:
        if x in (0, 1):
            return Interval.point(-1 if x == 0 else 1)
        return Interval(-1, 1)
