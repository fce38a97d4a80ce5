"""
limitbench command line.

    run           execute a machine and print its tape and mind changes
    convert       normal forms of machine codes (program text on stdout)
    translate     apply a representation translator to a name
    eval          evaluate a gallery function to precision 2^-k
    invert-limit  stages of the limit inversion as JSONL
    demo          desk demos
    trace         validate and re-emit a stored JSONL run trace

Exit status: 0 on success, 2 on contract violations, 1 on usage errors, exhausted
budgets and failed demos.
"""
import sys
from pathlib import Path
from typing import Callable

import click
from colorama import Fore, Style
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from baire.stream import ZERO, Stream, parse_stream
from baire.words import format_word, parse_word
from cli.config import RunConfig
from core.errors import BudgetExhausted, ContractViolation, WorkbenchError
from core.utils import log_message, read_jsonl, resolve_data_path, to_jsonl, write_jsonl
from metric.cauchy import Ball
from metric.cms import CANTOR, REALS, UNIT, CMS, cms_by_name
from metric.rationals import Q, power_of_two, to_q
from vm.machine import output_stream, run_limit, run_monotone
from vm.oracle import Oracle, WhitelistOracle, jump_stream
from vm.program import Kind, MachineCode, format_program, parse_program

KINDS = [k.value for k in Kind]
COUNTEREXAMPLES = ("f_unit", "f_smooth", "f_cantor", "chi_U")


class TraceRecord(BaseModel):
    """실행 추적 한 줄: 첫 쓰기는 old가 null"""

    model_config = ConfigDict(extra="forbid")

    step: int = Field(ge=1, description="step of the write, counted from 1")
    cell: int = Field(ge=0, description="output cell")
    old: int | None = Field(description="previous value, null for a first write")
    new: int = Field(description="value written")


def _print_step(label: str, value: str, color: str = Fore.CYAN) -> None:
    click.echo(f"  {color}▶ {label}:{Style.RESET_ALL} {value}", err=True)


# ──────────────────────────────────────────
# 공통 옵션과 입력 해석
# ──────────────────────────────────────────


def config_options(fn: Callable) -> Callable:
    """--budget --prefix --precision --oracle --seed 를 붙이고 RunConfig로 묶습니다."""
    options = [
        click.option("--budget", type=int, default=None, help="step budget (default: $LIMITBENCH_BUDGET or 10000)"),
        click.option("--prefix", type=int, default=None, help="number of output cells"),
        click.option("--precision", type=int, default=None, help="k in 2^-k"),
        click.option("--oracle", type=str, default=None, help="step:N or whitelist:FILE"),
        click.option("--seed", type=int, default=None, help="seed of randomized corpora"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def build_config(**values) -> RunConfig:
    return RunConfig(**{key: value for key, value in values.items() if value is not None})


def load_code(program: str, kind: str) -> MachineCode:
    """프로그램 파일(.prog) 또는 갤러리 기계 이름"""
    path = resolve_data_path(program)
    if path.is_file():
        return MachineCode.of(parse_program(path.read_text(encoding="utf-8")), Kind(kind), Path(program).stem)
    from gallery.machines import machine_by_name

    try:
        return machine_by_name(program)
    except KeyError:
        raise click.BadParameter(f"no program file or gallery machine named {program!r}", param_hint="--program")


def parse_input(literal: str, oracle: Oracle | None = None) -> Stream:
    """스트림 리터럴; `jump:<리터럴>` 은 오라클로 만든 점프 이름"""
    if literal.startswith("jump:"):
        if oracle is None:
            raise click.BadParameter("jump literals need an oracle", param_hint="--input")
        return jump_stream(parse_input(literal[len("jump:"):], oracle), oracle)
    try:
        return parse_stream(literal, lambda name: output_stream(load_code(name, "monotone"), ZERO))
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--input")


def point_name(space: CMS, x: Q) -> Stream:
    """x의 이름: 셀 k는 2^{-k-1} 격자로 반올림한 x"""
    if space is UNIT:
        return Stream(lambda k: UNIT.index_of(Q(round(x * (1 << (k + 1))), 1 << (k + 1))), label=f"unit:{x}")
    return Stream.constant(space.index_of(x))


def _input_for(literal: str, config: RunConfig) -> Stream:
    return parse_input(literal, config.build_oracle() if literal.startswith("jump:") else None)


def _whitelist(config: RunConfig) -> WhitelistOracle:
    oracle = config.build_oracle()
    if not isinstance(oracle, WhitelistOracle):
        raise ContractViolation(f"this command needs a whitelist oracle, not {oracle.describe()}")
    return oracle


# ──────────────────────────────────────────
# 명령
# ──────────────────────────────────────────


@click.group()
def cli() -> None:
    """Limit computability workbench."""


@cli.command()
@click.option("--kind", type=click.Choice(KINDS), default="limit", show_default=True)
@click.option("--program", required=True, help="program file or gallery machine name")
@click.option("--input", "literal", default="const:0", show_default=True, help="input stream literal")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None, help="write the run as JSONL")
@config_options
def run(kind: str, program: str, literal: str, trace_path: str | None, **options) -> None:
    """Execute a machine on an input."""
    config = build_config(**options)
    code = load_code(program, kind)
    code = MachineCode(index=code.index, kind=Kind(kind), name=code.name)
    p = _input_for(literal, config)
    _print_step("machine", f"{code.label} ({code.kind.value}) on {p.label}")
    if code.kind is Kind.MONOTONE:
        click.echo(format_word(run_monotone(code, p, config.budget)[: config.prefix]))
        return
    result = run_limit(code, p, config.budget, config.quiet_fraction)
    click.echo(format_word(result.written_prefix(config.prefix)))
    click.echo(" ".join(str(c) for c in result.mind_change_counts(config.prefix)))
    _print_step("steps", f"{result.steps} / {config.budget}, stabilized prefix {result.stabilized_prefix}")
    _print_step("global mind changes", str(result.global_mind_changes), Fore.MAGENTA)
    if trace_path:
        count = write_jsonl(Path(trace_path), result.trace_records())
        _print_step("trace", f"{count} records → {trace_path}", Fore.YELLOW)


@cli.command()
@click.option("--from", "source", type=click.Choice(["limit", "fmc"]), default="limit", show_default=True)
@click.option("--to", "target", type=click.Choice(["monotone", "fmc", "jump"]), required=True)
@click.option("--program", required=True, help="program file or gallery machine name")
def convert(source: str, target: str, program: str) -> None:
    """Print a normal form of a limit or fmc machine as program text."""
    from transforms.jump import jump_normal_form
    from transforms.normal_forms import fmc_normal_form, limit_to_monotone

    code = load_code(program, source)
    code = MachineCode(index=code.index, kind=Kind(source), name=code.name)
    converters = {"monotone": limit_to_monotone, "fmc": fmc_normal_form, "jump": jump_normal_form}
    converted = converters[target](code)
    _print_step("converted", f"{code.label} → {converted.label} ({converted.kind.value})")
    click.echo(format_program(converted.program), nl=False)


@cli.command()
@click.option("--base", default="baire", show_default=True, help="base representation")
@click.option("--translator", "label", required=True, help="translator label, e.g. δ→Δ")
@click.option("--input", "literal", required=True, help="input name literal (jump:... for J-names)")
@click.option("--check", "check_scale", type=int, default=None, help="decode both sides at this scale")
@config_options
def translate(base: str, label: str, literal: str, check_scale: int | None, **options) -> None:
    """Apply a representation translator to a name."""
    from spaces.representations import representation_by_name
    from spaces.translators import chain_translators, closure_translators, direct_translators

    config = build_config(**options)
    try:
        rep = representation_by_name(base)
    except KeyError as e:
        raise click.BadParameter(str(e), param_hint="--base")
    table = {**chain_translators(rep), **direct_translators(rep), **closure_translators(rep)}
    if label not in table:
        raise click.BadParameter(f"unknown translator {label!r}; known: {', '.join(table)}", param_hint="--translator")
    translator = table[label]
    name = _input_for(literal, config)
    _print_step("translator", f"{translator.label}: {translator.source.name} → {translator.target.name}")
    click.echo(format_word(translator.apply(name).prefix(config.prefix)))
    if check_scale is not None:
        consistent = translator.check(name, check_scale)
        _print_step("decode check", "consistent" if consistent else "INCONSISTENT", Fore.GREEN if consistent else Fore.RED)
        if not consistent:
            raise ContractViolation(f"{translator.label} is not decode-consistent on {name.label}")


@cli.command(name="eval")
@click.option("--space", "space_name", default="unit", show_default=True, help="unit, R or cantor")
@click.option("--function", "function", required=True, help="gallery function or f_unit/f_smooth/f_cantor/chi_U")
@click.option("--universe", default="fin.json", show_default=True, help="Fin manifest for the counterexamples")
@click.option("--point", required=True, help="a rational, or a bit word/stream literal on cantor")
@config_options
def evaluate(space_name: str, function: str, universe: str, point: str, **options) -> None:
    """Evaluate a function at a point to precision 2^-k."""
    config = build_config(**options)
    space = cms_by_name(space_name)
    k = config.precision
    if function in COUNTEREXAMPLES:
        from gallery import counterexamples
        from gallery.fin import FinUniverse

        fin = FinUniverse.load(universe)
        if space is CANTOR:
            name = parse_input(point)
        else:
            name = point_name(space, to_q(point))
        runners = {
            "f_unit": counterexamples.f_unit,
            "f_smooth": counterexamples.f_smooth,
            "f_cantor": counterexamples.f_cantor,
            "chi_U": counterexamples.chi_U_sierpinski,
        }
        result = runners[function](fin, name, config.budget)
        if k not in result.tape:
            raise BudgetExhausted(f"cell {k} of {function} not written within {config.budget} steps")
        if function == "chi_U":
            click.echo(result.tape[0])
        else:
            click.echo(Ball(result.tape[k], power_of_two(k)).describe(REALS))
        _print_step("mind changes", str(result.global_mind_changes), Fore.MAGENTA)
        return
    from gallery.functions import gallery_function
    from metric.moduli import evaluate_to_precision

    try:
        f = gallery_function(function)
    except KeyError as e:
        raise click.BadParameter(str(e.args[0]), param_hint="--function")
    x = parse_word(point) if f.domain == "cantor" else to_q(point)
    value = evaluate_to_precision(f, x, k)
    click.echo(f"[{value.lo}, {value.hi}]")


@cli.command(name="invert-limit")
@click.option("--input", "literal", required=True, help="target stream literal q")
@click.option("--stages", type=int, default=8, show_default=True)
@config_options
def invert_limit(literal: str, stages: int, **options) -> None:
    """Stages of a sequence converging to q together with its jump bits."""
    from transforms.inversion import LimitInversion

    config = build_config(**options)
    inversion = LimitInversion(parse_input(literal), _whitelist(config))
    click.echo(to_jsonl(inversion.trace_records(stages)), nl=False)
    bits = tuple(inversion.bit(i) for i in range(stages))
    _print_step("bits", format_word(bits), Fore.YELLOW)
    limit = tuple(inversion.sequence.limit_value(c) for c in range(config.prefix))
    _print_step("limit", format_word(limit), Fore.GREEN)


@cli.command()
@click.argument("names", nargs=-1)
@click.option("--samples", type=int, default=3, show_default=True)
@click.option("--jsonl", is_flag=True, help="print the reports as JSONL")
@config_options
def demo(names: tuple[str, ...], samples: int, jsonl: bool, **options) -> int:
    """Run desk demos (all of them when no name is given)."""
    from gallery.demos import DEMOS, run_demo

    config = build_config(**options)
    universe = _whitelist(config)
    unknown = [n for n in names if n not in DEMOS]
    if unknown:
        raise click.BadParameter(f"unknown demos {unknown}; known: {', '.join(DEMOS)}")
    reports = [run_demo(name, universe, config.seed, samples) for name in (names or DEMOS)]
    for report in reports:
        if jsonl:
            click.echo(to_jsonl([report.model_dump()]), nl=False)
        else:
            click.echo(f"{report.name}: {'pass' if report.passed else 'FAIL'} ({report.checks} checks)")
        color = Fore.GREEN if report.passed else Fore.RED
        _print_step(report.name, "pass" if report.passed else "; ".join(report.failures), color)
    return 0 if all(r.passed for r in reports) else 1


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def trace(path: str) -> None:
    """Validate a stored run trace and print it again as JSONL."""
    try:
        records = [TraceRecord.model_validate(record) for record in read_jsonl(Path(path))]
    except ValidationError as e:
        raise ContractViolation(f"{path} is not a run trace: {e.errors()[0]['msg']}")
    click.echo(to_jsonl(record.model_dump() for record in records), nl=False)
    _print_step("records", str(len(records)))


# ──────────────────────────────────────────
# 진입점
# ──────────────────────────────────────────


def _fail(message: str, code: int) -> int:
    click.echo(f"{Fore.RED}Error:{Style.RESET_ALL} {message}", err=True)
    log_message(f"[cli] exit {code}: {message}")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="limitbench", standalone_mode=False)
    except ContractViolation as e:
        return _fail(str(e), 2)
    except (click.ClickException, ValidationError, BudgetExhausted, WorkbenchError, KeyError) as e:
        message = e.format_message() if isinstance(e, click.ClickException) else str(e)
        return _fail(message, 1)
    except click.exceptions.Abort:
        return _fail("aborted", 1)
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
