"""
Settle certificates: per-machine knowledge that bounds the last change of an output
cell on finitely described inputs. Whitelist verdicts for change monitors and sequence
monitors are computed from them.
"""
from typing import Callable, Protocol

from baire.stream import Stream
from core.context import registry_lock
from core.errors import BudgetExhausted, OracleGap
from vm.machine import Simulation, stream_source
from vm.program import Kind, decode_program

CERTIFICATE_BUDGET = 5_000_000


class LimitCertificate(Protocol):
    def settle_step(self, p: Stream, n: int) -> int:
        """이 스텝 이후로 셀 n은 바뀌지 않습니다."""
        ...


class SequenceCertificate(Protocol):
    def settle_component(self, p: Stream, n: int) -> int:
        """이 성분 이후로 셀 n의 성분 값은 모두 같습니다."""
        ...


class ReadHorizonCertificate:
    """
    Cell n is settled at the first step where the machine has read at least
    `horizon(p, n)` input cells and cell n holds `final(p, n)`.
    """

    def __init__(self, index: int, final: Callable[[Stream, int], int], horizon: Callable[[Stream, int], int]):
        self.index = index
        self.final = final
        self.horizon = horizon

    def settle_step(self, p: Stream, n: int) -> int:
        final, horizon = self.final(p, n), self.horizon(p, n)
        sim = Simulation(decode_program(self.index), stream_source(p), Kind.LIMIT)
        while not (sim.reads >= horizon and sim.tape.get(n) == final):
            if sim.step() is None or sim.steps > CERTIFICATE_BUDGET:
                raise BudgetExhausted(f"certificate for cell {n} did not settle", spent=sim.steps)
        return sim.steps


class FunctionCertificate:
    """정착 위치를 직접 계산하는 인증서"""

    def __init__(self, settle: Callable[[Stream, int], int]):
        self._settle = settle

    def settle_step(self, p: Stream, n: int) -> int:
        return self._settle(p, n)

    def settle_component(self, p: Stream, n: int) -> int:
        return self._settle(p, n)


_certificates: dict[int, object] = {}


def register_certificate(index: int, certificate: object) -> None:
    with registry_lock:
        _certificates[index] = certificate


def certificate_for(index: int) -> object:
    certificate = _certificates.get(index)
    if certificate is None:
        raise OracleGap("no settle certificate is registered for this machine")
    return certificate


def described(p: Stream) -> Stream:
    """인증서가 요구하는 유한 기술 확인"""
    if p.description is None:
        raise OracleGap(f"input {p.label} has no finite description")
    return p
