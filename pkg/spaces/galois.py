"""
The correspondence between translators X_J → Y and translators X → Y′.

`forward(G)` runs G on the step-bounded jumps J_i(p) and emits the results as the
components of a Y′ name; any failure on an early, still inaccurate J_i(p) becomes 0.
`backward(F)` recovers p from the comparators of J(p), asks the jump when F(p)'s
components stop changing at cell k, and reads that component.

A whitelist oracle answers the sequence monitors `backward` asks only for codes with a
settle certificate; `GaloisConnection.forward` registers one for every code it builds.
"""
from baire.stream import Stream, interleave_omega
from baire.words import pair, unpair
from core.errors import BudgetExhausted, NotInRange, WorkbenchError
from core.utils import log_message
from vm.certificates import CERTIFICATE_BUDGET, FunctionCertificate, register_certificate
from vm.machine import halting_time, output_stream
from vm.natives import Reader, cell_native
from vm.oracle import Oracle, StepOracle, jump_stream
from vm.program import Kind, MachineCode, decode_program
from vm.synthesis import sequence_monitor
from spaces.translators import native_code
from transforms.jump import MONITOR_TIME_LIMIT, reconstruct


def _guarded(out: Stream, k: int) -> int:
    try:
        return out.at(k)
    except WorkbenchError:
        return 0


def _forward_stream(arg: int, p: Stream) -> Stream:
    g = MachineCode(index=arg, kind=Kind.MONOTONE)

    def component(i: int) -> Stream:
        out = output_stream(g, jump_stream(p, StepOracle(i)))
        return Stream(lambda k: _guarded(out, k), label=f"{g.label}(J_{i}({p.label}))")

    return interleave_omega(component, label=f"Γ{g.label}({p.label})")


@cell_native("galois_forward", stream_form=_forward_stream)
def _galois_forward_cell(arg: int, read: Reader, m: int) -> int:
    i, k = unpair(m)
    g = MachineCode(index=arg, kind=Kind.MONOTONE)
    p = Stream(read, label="p")
    return _guarded(output_stream(g, jump_stream(p, StepOracle(i))), k)


def settled_component(f: MachineCode, read: Reader, k: int) -> int:
    """Doubles t until F(p) is constant at cell k from component t on, then reads it."""
    x = reconstruct(read)
    t = 1
    while t <= MONITOR_TIME_LIMIT:
        if read(sequence_monitor(f, k, t)) == 0:
            return output_stream(f, x).at(pair(t, k))
        t *= 2
    raise NotInRange(f"{f.label} never settles cell {k} before component {MONITOR_TIME_LIMIT}")


@cell_native("galois_backward")
def _galois_backward_cell(arg: int, read: Reader, k: int) -> int:
    return settled_component(MachineCode(index=arg, kind=Kind.MONOTONE), read, k)


class GaloisConnection:
    """정확한 오라클에 묶인 forward/backward 쌍"""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle

    def read_horizon(self, g: MachineCode, p: Stream, k: int) -> int:
        """J_i(p)가 G의 셀 k 계산에서 J(p)와 구별되지 않는 가장 작은 i"""
        exact = jump_stream(p, self.oracle)
        seen: dict[int, int] = {}

        def tracked(e: int) -> int:
            return seen.setdefault(e, exact.at(e))

        output_stream(g, Stream(tracked, label=exact.label)).at(k)
        horizon = 0
        for e, bit in seen.items():
            if bit != 1:
                continue
            steps = halting_time(decode_program(e), p, CERTIFICATE_BUDGET)
            if steps is None:
                raise BudgetExhausted(f"machine read by {g.label} did not halt within the certificate budget")
            horizon = max(horizon, steps)
        return horizon

    def forward(self, g: MachineCode) -> MachineCode:
        """G: X_J → Y 에서 X → Y′"""
        g.require(Kind.MONOTONE)
        code = native_code("galois_forward", g.index, label=f"Γ({g.label})")
        register_certificate(code.index, FunctionCertificate(lambda p, k: self.read_horizon(g, p, k)))
        log_message(f"[galois] forward {g.label} -> {code.label}")
        return code

    def backward(self, f: MachineCode) -> MachineCode:
        """F: X → Y′ 에서 X_J → Y"""
        return backward(f)


def forward(g: MachineCode, oracle: Oracle) -> MachineCode:
    return GaloisConnection(oracle).forward(g)


def backward(f: MachineCode) -> MachineCode:
    f.require(Kind.MONOTONE)
    return native_code("galois_backward", f.index, label=f"Γ⁻¹({f.label})")
