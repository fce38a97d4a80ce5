"""
Desk demos: both directions of the classical reductions, run on seeded samples.

    shoenfield          limit machine output  ==  jump normal form applied to J(p)
    jockusch            J(p)(n) read off ⟨p, 0′⟩ on generics  ==  direct halting of n on p
    friedberg           lim r = q and the emitted bits are J(r) at the whitelist positions
    naive_composition   E∘lim by restarts: mind changes on cell 0 grow with the input

Every demo returns a `DemoReport` with its checks and a short JSONL-ready trace.
"""
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from baire.stream import Stream
from core.utils import log_message
from gallery.machines import E, FIRST_NONZERO, RUNNING_MAX
from transforms.compose import naive_composition_demo
from transforms.generics import jump_on_generics
from transforms.inversion import LimitInversion
from transforms.jump import jump_normal_form
from vm.machine import output_stream, run_limit
from vm.oracle import StepOracle, WhitelistOracle, jump_stream
from vm.synthesis import comparator

DEMO_SEED = 20240611
DEMO_SAMPLES = 5
SHOENFIELD_PREFIX = 6
SHOENFIELD_BUDGET = 20_000
FRIEDBERG_PREFIX = 8
FRIEDBERG_BITS = 6
# 직접 정지 판정에 쓰는 단계 상한
DIRECT_HALTING_BOUND = 1000
COMPOSITION_BUDGET = 20_000


class DemoReport(BaseModel):
    name: str = Field(description="demo id")
    passed: bool = Field(description="all checks agreed")
    checks: int = Field(default=0, description="number of compared samples")
    failures: list[str] = Field(default_factory=list, description="descriptions of disagreeing samples")
    trace: list[dict] = Field(default_factory=list, description="records shown with the report")


def demo_samples(seed: int = DEMO_SEED, count: int = DEMO_SAMPLES, head: int = 8, alphabet: int = 4) -> list[Stream]:
    """head 뒤 상수인 시드 고정 입력들"""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        word = tuple(int(v) for v in rng.integers(0, alphabet, size=head))
        samples.append(Stream.eventually(word, (int(rng.integers(0, alphabet)),)))
    return samples


def _report(name: str, checks: int, failures: list[str], trace: list[dict]) -> DemoReport:
    report = DemoReport(name=name, passed=not failures, checks=checks, failures=failures, trace=trace)
    log_message(f"[demo] {name}: {'pass' if report.passed else 'FAIL'} ({checks} checks, {len(failures)} failures)")
    return report


# ──────────────────────────────────────────
# 극한 보조정리
# ──────────────────────────────────────────


def shoenfield_demo(universe: WhitelistOracle, samples: list[Stream]) -> DemoReport:
    failures: list[str] = []
    trace: list[dict] = []
    machines = {"E": E, "running_max": RUNNING_MAX, "first_nonzero": FIRST_NONZERO}
    for name, code in machines.items():
        g = jump_normal_form(code)
        for p in samples:
            direct = run_limit(code, p, SHOENFIELD_BUDGET).written_prefix(SHOENFIELD_PREFIX)
            through_jump = output_stream(g, jump_stream(p, universe)).prefix(SHOENFIELD_PREFIX)
            trace.append({"machine": name, "input": p.label, "limit": list(direct), "jump": list(through_jump)})
            if direct != through_jump:
                failures.append(f"{name} on {p.label}: {direct} vs {through_jump}")
    return _report("shoenfield", len(trace), failures, trace)


def jockusch_demo(universe: WhitelistOracle, samples: list[Stream]) -> DemoReport:
    direct = StepOracle(DIRECT_HALTING_BOUND)
    failures: list[str] = []
    trace: list[dict] = []
    for p in samples:
        for a in range(3):
            for b in range(3):
                index = comparator(a, b)
                generic = jump_on_generics(p, universe, index)
                expected = direct.query(index, p).bit
                trace.append({"input": p.label, "machine": index, "bit": generic.bit, "prefix": list(generic.prefix)})
                if generic.bit != expected:
                    failures.append(f"comparator({a},{b}) on {p.label}: {generic.bit} vs {expected}")
    return _report("jockusch", len(trace), failures, trace)


def friedberg_demo(universe: WhitelistOracle, samples: list[Stream]) -> DemoReport:
    failures: list[str] = []
    trace: list[dict] = []
    for q in samples:
        inversion = LimitInversion(q, universe)
        r = inversion.sequence
        limit = tuple(r.limit_value(c) for c in range(FRIEDBERG_PREFIX))
        if limit != q.prefix(FRIEDBERG_PREFIX):
            failures.append(f"lim I({q.label}) = {limit}")
        for i in range(FRIEDBERG_BITS):
            bit = inversion.bit(i)
            if universe.query(universe.position(i), r).bit != bit:
                failures.append(f"bit {i} of I({q.label}) disagrees with the oracle")
        trace.extend(inversion.trace_records(FRIEDBERG_BITS))
    return _report("friedberg", len(samples), failures, trace)


def naive_composition_report(universe: WhitelistOracle, samples: list[Stream]) -> DemoReport:
    reports = naive_composition_demo(range(1, 5), COMPOSITION_BUDGET)
    counts = [report.mind_changes(0) for report in reports]
    trace = [{"alternations": r.alternations, "mind_changes": c} for r, c in zip(reports, counts)]
    failures = [] if counts == sorted(counts) and counts[-1] > counts[0] else [f"mind changes {counts}"]
    return _report("naive_composition", len(reports), failures, trace)


DEMOS: dict[str, Callable[[WhitelistOracle, list[Stream]], DemoReport]] = {
    "shoenfield": shoenfield_demo,
    "jockusch": jockusch_demo,
    "friedberg": friedberg_demo,
    "naive_composition": naive_composition_report,
}


def run_demo(name: str, universe: WhitelistOracle, seed: int = DEMO_SEED, count: int = DEMO_SAMPLES) -> DemoReport:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; known: {', '.join(DEMOS)}")
    return DEMOS[name](universe, demo_samples(seed, count))


def desk_demos(universe: WhitelistOracle, seed: int = DEMO_SEED, count: int = DEMO_SAMPLES) -> list[DemoReport]:
    samples = demo_samples(seed, count)
    reports = []
    for name in tqdm(DEMOS, desc="demos", leave=False):
        reports.append(DEMOS[name](universe, samples))
    return reports
