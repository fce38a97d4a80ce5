"""
The jump of a generic point, read off from its prefixes.

For a point that meets or avoids every registered machine's halting set on some
prefix, J(p)(n) is decided by the first prefix u on which the oracle certifies that
machine n halts on all extensions of u (bit 1) or on none (bit 0).
"""
from pydantic import BaseModel, Field

from baire.stream import Stream
from baire.words import Word
from vm.oracle import Oracle, Universal, Verdict

GENERIC_SEARCH_LIMIT = 64


class GenericJump(BaseModel):
    index: int = Field(ge=0, description="machine number n")
    verdict: Verdict = Field(description="halts, loops, or unknown if no inspected prefix decides n")
    prefix: Word = Field(description="the deciding prefix, or the longest inspected one")

    @property
    def bit(self) -> int | None:
        return None if self.verdict is Verdict.UNKNOWN else self.verdict.bit


def jump_on_generics(p: Stream, oracle: Oracle, n: int, limit: int = GENERIC_SEARCH_LIMIT) -> GenericJump:
    """Searches prefixes of p, shortest first, for one on which machine n is decided."""
    for length in range(limit + 1):
        u = p.prefix(length)
        outcome = oracle.universal(n, u)
        if outcome is Universal.ALL:
            return GenericJump(index=n, verdict=Verdict.HALTS, prefix=u)
        if outcome is Universal.NONE:
            return GenericJump(index=n, verdict=Verdict.LOOPS, prefix=u)
    return GenericJump(index=n, verdict=Verdict.UNKNOWN, prefix=p.prefix(limit))
