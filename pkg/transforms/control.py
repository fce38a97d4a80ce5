"""
Uniform limit control.

For a code φ of a map on sequences, builds codes c_0, c_1, ... such that
Φ_{c_i}(p) is component i of φ(I(p)), where I is the limit inversion under the given
whitelist. Since I(p) converges to p, the outputs Φ_{c_i}(p) converge componentwise
to an element of lim∘φ∘lim⁻¹(p) whenever all sequences converging to p are in the
domain. The limit code is evaluated on the diagonal: component `stage` of φ(I(p)).

The entry of c_i at a word u only uses the stages of I that u determines: stages
0..|u|−1 fix the first K components completely, so φ's output is known on the
prefix of ⟨x_0, x_1, ...⟩ of length ⟨K, 0⟩.
"""
import threading

from baire.stream import ZERO, Stream, interleave_omega
from baire.words import Word, pair
from core.utils import log_message
from transforms.inversion import LimitInversion
from vm.oracle import WhitelistOracle
from vm.phi import PhiCode, phi_apply

CONTROL_STAGE = 16


class UniformLimitControl:
    """R(φ): 수렴하는 Φ 코드들의 수열과 그 극한 코드의 대각 평가"""

    def __init__(self, phi: PhiCode, oracle: WhitelistOracle):
        self.phi = phi
        self.oracle = oracle
        self._views: dict[Word, tuple[Word, int]] = {}
        self._codes: dict[int, PhiCode] = {}
        self._lock = threading.Lock()

    def _view(self, u: Word) -> tuple[Word, int]:
        """(u가 정하는 φ(I(u…))의 앞부분, 완전히 정해진 성분 수)"""
        cached = self._views.get(u)
        if cached is not None:
            return cached
        inversion = LimitInversion(Stream.from_word(u, ZERO), self.oracle)
        inversion.run_stages(len(u))
        known = len(inversion.components)
        x = inversion.sequence
        length = pair(known, 0)
        xs = Stream.from_word(x.prefix(length), ZERO)
        view = (phi_apply(self.phi, xs, length + 1), known)
        with self._lock:
            self._views[u] = view
        return view

    def _component_entry(self, i: int, u: Word) -> Word | None:
        out, known = self._view(u)
        if i >= known:
            return None
        cells = []
        for k in range(len(out)):
            index = pair(i, k)
            if index >= len(out):
                break
            cells.append(out[index])
        return tuple(cells)

    def code(self, i: int) -> PhiCode:
        """c_i: p ↦ φ(I(p))의 i번째 성분"""
        found = self._codes.get(i)
        if found is None:
            found = PhiCode.from_function(lambda u: self._component_entry(i, u), label=f"R({self.phi.label})[{i}]")
            with self._lock:
                found = self._codes.setdefault(i, found)
        return found

    @property
    def codes(self) -> Stream:
        """⟨c_0, c_1, ...⟩ as one stream of interleaved associates."""
        return interleave_omega(lambda i: self.code(i).associate, label=f"R({self.phi.label})")

    def limit_apply(self, p: Stream, cells: int, stage: int = CONTROL_STAGE) -> Word:
        """The limit code on p, read at component `stage`."""
        # 성분 stage의 앞 cells칸이 정해지려면 ⟨K,0⟩ > ⟨stage, cells−1⟩ 이어야 합니다.
        budget = stage + cells + 2
        out = phi_apply(self.code(stage), p, budget)
        log_message(f"[control] {self.phi.label} at stage {stage}: {len(out)} cells from {budget} prefixes")
        return out[:cells]


def uniform_limit_control(phi: PhiCode, oracle: WhitelistOracle) -> UniformLimitControl:
    return UniformLimitControl(phi, oracle)
