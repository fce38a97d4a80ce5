import json

import pytest
from pydantic import ValidationError

from cli import RunConfig, main
from cli.config import BUDGET_ENV, DEFAULT_BUDGET
from vm.oracle import StepOracle, WhitelistOracle


def test_run_limit_program_file(capsys) -> None:
    assert main(["run", "--kind=limit", "--program=E.prog", "--input=const:0", "--budget=1000", "--prefix=8"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["11111111", "0 0 0 0 0 0 0 0"]


def test_run_gallery_machine_on_word_input(capsys) -> None:
    assert main(["run", "--program=E", "--input=word:0001 then const:0", "--budget=2000", "--prefix=4"]) == 0
    tape, changes = capsys.readouterr().out.splitlines()
    assert tape == "0000"
    assert sum(int(c) for c in changes.split()) <= 4


def test_run_unknown_program_is_usage_error(capsys) -> None:
    assert main(["run", "--program=no_such_machine"]) == 1
    assert "no_such_machine" in capsys.readouterr().err


def test_run_bad_input_literal(capsys) -> None:
    assert main(["run", "--program=E", "--input=nonsense"]) == 1


def test_convert_to_monotone(capsys) -> None:
    assert main(["convert", "--from=limit", "--to=monotone", "--program=E.prog"]) == 0
    text = capsys.readouterr().out
    assert "NATIVE limit_to_monotone" in text
    assert text.endswith("\n")


def test_convert_limit_to_fmc_needs_fmc_code(capsys) -> None:
    # fmc 정규형은 fmc 기계만 받습니다.
    assert main(["convert", "--from=limit", "--to=fmc", "--program=E"]) == 2


def test_translate_constant_embedding(capsys) -> None:
    assert main(["translate", "--translator=δ→Δ", "--input=const:3", "--prefix=4"]) == 0
    assert len(capsys.readouterr().out.strip()) >= 4


def test_translate_unknown_label() -> None:
    assert main(["translate", "--translator=Δ→J", "--input=const:3"]) == 1
    assert main(["translate", "--base=hilbert", "--translator=δ→Δ", "--input=const:3"]) == 1


def test_eval_counterexample_away_from_support(capsys) -> None:
    assert main(["eval", "--space=unit", "--function=f_unit", "--universe=fin.json", "--point=3/4", "--precision=6"]) == 0
    assert capsys.readouterr().out.strip() == "B(0, 1/64)"


def test_eval_gallery_polynomial(capsys) -> None:
    assert main(["eval", "--function=square", "--point=1/2", "--precision=4"]) == 0
    assert capsys.readouterr().out.strip() == "[1/4, 1/4]"


def test_eval_unknown_function(capsys) -> None:
    assert main(["eval", "--function=sine", "--point=0"]) == 1


def test_trace_round_trip(tmp_path, capsys) -> None:
    path = tmp_path / "run.jsonl"
    assert main(["run", "--program=E", "--input=word:0001 then const:0", "--budget=2000", f"--trace={path}"]) == 0
    records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    assert records and all(r["step"] >= 1 for r in records)
    capsys.readouterr()

    assert main(["trace", str(path)]) == 0
    echoed = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert echoed == records


def test_trace_rejects_malformed_records(tmp_path) -> None:
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"step": 0, "cell": 0, "old": None, "new": 1}) + "\n", encoding="utf-8")
    assert main(["trace", str(path)]) == 2

    path.write_text(json.dumps({"step": 1, "cell": 0, "new": 1, "extra": True}) + "\n", encoding="utf-8")
    assert main(["trace", str(path)]) == 2


def test_invert_limit_needs_whitelist(capsys) -> None:
    assert main(["invert-limit", "--input=const:1", "--oracle=step:100"]) == 2
    assert "whitelist" in capsys.readouterr().err


def test_demo_unknown_name() -> None:
    assert main(["demo", "no_such_demo"]) == 1


# ──────────────────────────────────────────
# 설정
# ──────────────────────────────────────────


def test_config_defaults(monkeypatch) -> None:
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    config = RunConfig()
    assert config.budget == DEFAULT_BUDGET
    assert isinstance(config.build_oracle(), WhitelistOracle)


def test_config_budget_from_environment(monkeypatch) -> None:
    monkeypatch.setenv(BUDGET_ENV, "1234")
    assert RunConfig().budget == 1234
    assert RunConfig(budget=5).budget == 5


@pytest.mark.parametrize("spec", ["step:", "step:x", "whitelist:", "halting", "oracle:1"])
def test_config_rejects_bad_oracles(spec: str) -> None:
    with pytest.raises(ValidationError):
        RunConfig(oracle=spec)


def test_config_step_oracle() -> None:
    oracle = RunConfig(oracle="step:50").build_oracle()
    assert isinstance(oracle, StepOracle)


def test_config_rejects_nonpositive_budget() -> None:
    with pytest.raises(ValidationError):
        RunConfig(budget=0)
