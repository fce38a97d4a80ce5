import numpy as np
import pytest

from baire.stream import ZERO, Stream, const, interleave2, interleave_omega, prepend
from baire.words import pair
from core.errors import KindMismatch, MalformedCode, OracleGap
from gallery.machines import COPIER, E, EVEN, FIRST_NONZERO, FMC_BOUNDS, HEAD, IDENTITY, LIMIT_MACHINES, LOOP, REVISER
from vm.machine import halting_time, output_stream, run_limit, run_monotone
from vm.oracle import (
    StepOracle,
    Universal,
    Verdict,
    WhitelistOracle,
    jump_approx,
    oracle_query,
    we_enumerate,
    we_stages,
)
from vm.phi import PhiCode, code_sequence, curry, evaluate, phi_apply, phi_smn, sequence_code
from vm.program import (
    Instruction,
    Kind,
    MachineCode,
    Op,
    Program,
    decode_program,
    encode_program,
    format_program,
    parse_program,
)
from vm.synthesis import change_monitor, comparator, member, precompose, probe, zero_input

NATURALS = Stream(lambda i: i, label="naturals")


def random_bytecode(rng: np.random.Generator, size: int = 6) -> Program:
    """NATIVE 없는 임의 프로그램"""
    out = []
    for _ in range(size):
        op = [Op.INC, Op.DEC, Op.JZ, Op.READ, Op.APPEND][int(rng.integers(0, 5))]
        a, b = int(rng.integers(0, 4)), int(rng.integers(0, size + 1))
        out.append(Instruction(op, a, b) if op in (Op.JZ, Op.READ) else Instruction(op, a))
    return Program(out)


def counting_program(steps: int) -> Program:
    return Program([Instruction(Op.INC, 1)] * steps)


# ──────────────────────────────────────────
# 부호화와 텍스트 형식
# ──────────────────────────────────────────


def test_numbering_round_trip_below_5000() -> None:
    for n in range(5000):
        assert encode_program(decode_program(n)) == n


def test_empty_program_is_index_zero() -> None:
    assert encode_program(Program([])) == 0
    assert len(decode_program(0)) == 0


def test_text_format_round_trip(rng: np.random.Generator) -> None:
    for n in rng.integers(0, 10**9, size=50):
        program = decode_program(int(n))
        assert parse_program(format_program(program)) == program


def test_gallery_programs_parse() -> None:
    assert E.program.uses(Op.WRITE)
    assert not E.program.uses(Op.APPEND)
    assert parse_program("loop: JZ 0 loop") == LOOP
    assert parse_program("NATIVE lim_map 0").single_native() == (1, 0)


def test_kind_discipline_checks() -> None:
    with pytest.raises(KindMismatch):
        run_monotone(E, ZERO, 10)
    with pytest.raises(KindMismatch):
        run_limit(IDENTITY, ZERO, 10)
    with pytest.raises(KindMismatch):
        E.program.check(Kind.MONOTONE)


# ──────────────────────────────────────────
# 실행
# ──────────────────────────────────────────


def test_run_monotone_copier() -> None:
    out = run_monotone(IDENTITY, NATURALS, 10_000)
    assert len(out) > 100
    assert out == tuple(range(len(out)))
    halt_now = MachineCode.of(Program([Instruction(Op.HALT)]), Kind.MONOTONE)
    assert run_monotone(halt_now, NATURALS, 1000) == ()


def test_run_monotone_is_prefix_monotone_in_budget(rng: np.random.Generator) -> None:
    for _ in range(50):
        code = MachineCode.of(random_bytecode(rng), Kind.MONOTONE)
        p = Stream.eventually(tuple(int(v) for v in rng.integers(0, 3, size=5)), (1,))
        t = int(rng.integers(1, 60))
        short, long = run_monotone(code, p, t), run_monotone(code, p, 2 * t)
        assert long[: len(short)] == short


def test_run_limit_e_machine() -> None:
    run = run_limit(E, ZERO, 1000)
    assert run.written_prefix(4) == (1, 1, 1, 1)
    assert run.mind_change_counts(4) == [0, 0, 0, 0]

    run = run_limit(E, Stream.eventually((0, 0, 0, 1), (0,)), 1000)
    assert run.written_prefix(4) == (0, 0, 0, 0)
    assert max(run.mind_change_counts(4)) <= 1
    assert run.mind_changes(0) == 1


def test_run_limit_budget_zero_has_empty_history() -> None:
    for code in LIMIT_MACHINES.values():
        run = run_limit(code, ZERO, 0)
        assert run.history == {}
        assert run.steps == 0


def test_limit_run_history_invariants() -> None:
    run = run_limit(E, Stream.eventually((0, 0, 0, 0, 0, 2), (0,)), 2000)
    for cell, writes in run.history.items():
        steps = [s for s, _ in writes]
        assert steps == sorted(set(steps))
        assert run.tape[cell] == writes[-1][1]
    assert run.stabilized_prefix >= 5
    records = run.trace_records()
    assert records[0]["old"] is None
    assert [r["step"] for r in records] == sorted(r["step"] for r in records)


def test_runs_are_deterministic() -> None:
    p = Stream.eventually((3, 0, 2), (1,))
    for code in LIMIT_MACHINES.values():
        assert run_limit(code, p, 500) == run_limit(code, p, 500)


def test_fmc_machines_respect_declared_bounds() -> None:
    inputs = [ZERO, Stream.eventually((0, 0, 5), (0,)), Stream.eventually((1,), (0,)), const(2)]
    for name, bound in FMC_BOUNDS.items():
        for p in inputs:
            assert run_limit(LIMIT_MACHINES[name], p, 3000).global_mind_changes <= bound


def test_native_limit_machines() -> None:
    run = run_limit(LIMIT_MACHINES["running_max"], Stream.eventually((1, 3, 2, 7), (0,)), 400)
    assert run.written_prefix(6) == (7,) * 6
    run = run_limit(FIRST_NONZERO, Stream.eventually((0, 0, 4), (0,)), 400)
    assert run.written_prefix(5) == (3,) * 5
    seq = interleave_omega([const(5), const(6)], tail_part=Stream.eventually((1, 2), (3,)))
    run = run_limit(LIMIT_MACHINES["lim"], seq, 3000)
    assert run.written_prefix(4) == (1, 2, 3, 3)
    assert run_limit(REVISER, ZERO, 50).mind_changes(0) == 2


def test_copier_reproduces_input() -> None:
    p = Stream.eventually((4, 1, 4), (2,))
    assert run_limit(COPIER, p, 300).written_prefix(6) == p.prefix(6)


def test_output_stream_of_monotone_code() -> None:
    s = output_stream(HEAD, Stream.eventually((9,), (0,)))
    assert s.prefix(5) == (9,) * 5


# ──────────────────────────────────────────
# 정지 집합과 점프
# ──────────────────────────────────────────


def test_we_enumerate() -> None:
    assert we_enumerate(LOOP.index, 200) == frozenset()
    # 짝수 x는 2.5x + 2 스텝에 정지합니다.
    assert we_enumerate(EVEN.index, 300) == frozenset(range(0, 119, 2))


def test_we_enumerate_is_monotone(rng: np.random.Generator) -> None:
    for _ in range(20):
        index = encode_program(random_bytecode(rng))
        assert we_enumerate(index, 20) <= we_enumerate(index, 40)


def test_we_stages_dovetail() -> None:
    stages = list(we_stages(EVEN.index, 40))
    assert [s for s, _ in stages] == list(range(41))
    for s, halted in stages:
        for x in halted:
            assert s == max(x, halting_time(EVEN, prepend(x, ZERO), 40))
    assert frozenset().union(*(h for _, h in stages)) == we_enumerate(EVEN.index, 40)
    assert stages[2][1] == frozenset({0})


def test_jump_approx_bits_only_flip_up() -> None:
    p = Stream.eventually((2, 1), (0,))
    a, b, c = (jump_approx(p, t) for t in (8, 16, 32))
    assert all(x <= y <= z for x, y, z in zip(a, b, c))
    assert a[0] == 1
    assert all(bits[LOOP.index] == 0 for bits in (a, b, c))


def test_oracle_query_examples(universe: WhitelistOracle) -> None:
    assert oracle_query(universe, LOOP.index, ZERO) is Verdict.LOOPS
    assert oracle_query(universe, EVEN.index, const(4)) is Verdict.HALTS
    assert oracle_query(universe, EVEN.index, const(3)) is Verdict.LOOPS
    fast, slow = encode_program(counting_program(5)), encode_program(counting_program(50))
    assert oracle_query(StepOracle(10), fast, ZERO) is Verdict.HALTS
    assert oracle_query(StepOracle(10), slow, ZERO) is Verdict.UNKNOWN
    with pytest.raises(OracleGap):
        universe.query(slow, ZERO)


def test_comparators_agree_with_simulation(universe: WhitelistOracle) -> None:
    p = Stream.eventually((2, 0, 3), (1,))
    step = StepOracle(100)
    for n in range(5):
        for k in range(4):
            index = comparator(n, k)
            exact = universe.query(index, p)
            assert exact is (Verdict.HALTS if p.at(n) == k else Verdict.LOOPS)
            assert step.query(index, p).bit == exact.bit
    assert universe.universal(comparator(1, 0), (2, 0)) is Universal.ALL
    assert universe.universal(comparator(1, 0), (2, 5)) is Universal.NONE
    assert universe.universal(comparator(4, 0), (2, 5)) is Universal.MIXED


def test_change_monitor_verdicts_match_simulation(universe: WhitelistOracle) -> None:
    p = Stream.eventually((0, 0, 0, 1), (0,))
    last = run_limit(E, p, 1000).last_change(1)
    step = StepOracle(2000)
    for t in (0, last - 1, last, last + 5):
        index = change_monitor(E, 1, t)
        exact = universe.query(index, p)
        assert exact is (Verdict.HALTS if t < last else Verdict.LOOPS)
        assert step.query(index, p).bit == exact.bit


def test_change_monitor_needs_described_input(universe: WhitelistOracle) -> None:
    with pytest.raises(OracleGap):
        universe.query(change_monitor(E, 0, 3), NATURALS)


def test_probe_verdicts(universe: WhitelistOracle) -> None:
    seq = interleave_omega([const(0), Stream.eventually((0, 0, 7), (0,))], tail_part=const(1))
    assert universe.query(probe(2, 7), seq) is Verdict.HALTS
    assert universe.query(probe(2, 1), seq) is Verdict.HALTS
    assert universe.query(probe(2, 4), seq) is Verdict.LOOPS
    assert StepOracle(5000).query(probe(2, 7), seq) is Verdict.HALTS


def test_zero_input_and_precompose(universe: WhitelistOracle) -> None:
    r = zero_input(EVEN.index)
    assert universe.query(r, const(3)) is Verdict.HALTS
    assert StepOracle(50).query(r, const(3)) is Verdict.HALTS
    assert universe.query(zero_input(LOOP.index), ZERO) is Verdict.LOOPS
    # even ∘ (p ↦ p(0) p(0) ...)
    composed = precompose(EVEN.index, HEAD)
    assert universe.query(composed, const(6)) is Verdict.HALTS
    assert universe.query(composed, prepend(1, ZERO)) is Verdict.LOOPS
    assert StepOracle(100).query(composed, const(6)) is Verdict.HALTS


def test_member_machine(universe: WhitelistOracle) -> None:
    index = member([3, 5])
    assert universe.query(index, prepend(5, ZERO)) is Verdict.HALTS
    assert universe.query(index, prepend(4, ZERO)) is Verdict.LOOPS
    assert universe.members(index) == frozenset({3, 5})
    assert we_enumerate(index, 10) == frozenset({3, 5})


# ──────────────────────────────────────────
# Φ 코드
# ──────────────────────────────────────────


def test_phi_apply_examples() -> None:
    p = Stream.eventually((4, 1, 4, 2), (0,))
    assert phi_apply(PhiCode.from_pairs({(): (42,)}), p, 5) == (42,)
    assert phi_apply(PhiCode.identity(), p, 6) == p.prefix(5)
    assert phi_apply(PhiCode.identity(), p, 0) == ()


def test_phi_apply_rejects_incomparable_entries() -> None:
    code = PhiCode.from_pairs({(): (1,), (0,): (2,)})
    with pytest.raises(MalformedCode):
        phi_apply(code, ZERO, 3)


def test_phi_apply_budget_counts_input_prefixes() -> None:
    seen: list[int] = []

    def cell(i: int) -> int:
        seen.append(i)
        return 0

    code = PhiCode.from_pairs({(): (1,), (5,): (2,), (0, 0): (1, 7)})
    assert phi_apply(code, Stream(cell, label="zeros"), 3) == (1, 7)
    assert max(seen) == 1
    assert phi_apply(code, ZERO, 2) == (1,)


def test_phi_smn_matches_direct_evaluation(rng: np.random.Generator) -> None:
    codes = [PhiCode.identity(), PhiCode.pointwise(lambda x: x + 1), PhiCode.from_pairs({(): (42,)})]
    for _ in range(50):
        code = codes[int(rng.integers(0, len(codes)))]
        r = Stream.eventually(tuple(int(v) for v in rng.integers(0, 5, size=4)), (0,))
        p = Stream.eventually(tuple(int(v) for v in rng.integers(0, 5, size=4)), (1,))
        assert phi_apply(phi_smn(code, r), p, 8) == phi_apply(code, interleave2(r, p), 16)
    p = const(3)
    assert phi_apply(phi_smn(PhiCode.identity(), ZERO), p, 9) == interleave2(ZERO, p).prefix(17)
    assert phi_apply(phi_smn(codes[2], const(9)), p, 4) == (42,)


def test_ev_cur_seq_realizers() -> None:
    p = Stream.eventually((5, 1, 2), (3,))
    assert evaluate(PhiCode.identity(), p).prefix(16) == p.prefix(16)

    plus_one = PhiCode.pointwise(lambda x: x + 1)
    r = const(7)
    curried = curry(plus_one, r)
    expected = tuple(x + 1 for x in interleave2(r, p).prefix(8))
    assert evaluate(curried, p).prefix(8) == expected

    seq = interleave_omega([const(1), Stream.eventually((2,), (0,))], tail_part=const(4))
    back = code_sequence(sequence_code(seq))
    assert all(back.at(pair(n, k)) == seq.at(pair(n, k)) for n in range(4) for k in range(4))
