"""
The jump of a generic point of a computable metric space.

Away from the boundaries of the open sets U_n, J_X(x)(n) is decided by the first
decoded ball B(α p(s), 2^{-s}) that is formally included in a ball of W_n (bit 1) or
formally disjoint from every ball of W_n (bit 0). W_n must be a certified finite set.
"""
from baire.stream import Stream
from metric.cauchy import Ball, Relation, formal_relations
from metric.cms import CMS
from metric.rationals import power_of_two
from transforms.generics import GENERIC_SEARCH_LIMIT, GenericJump
from vm.oracle import Verdict, WhitelistOracle


def jump_on_generics_metric(
    space: CMS, p: Stream, oracle: WhitelistOracle, n: int, limit: int = GENERIC_SEARCH_LIMIT
) -> GenericJump:
    """셀을 하나씩 읽으며 n번째 열린 집합의 안/밖이 형식적으로 확정되는 공을 찾습니다."""
    balls = [Ball.from_index(m) for m in sorted(oracle.members(n))]
    for s in range(limit + 1):
        here = Ball(p.at(s), power_of_two(s))
        relations = [formal_relations(space, here, b) for b in balls]
        if Relation.INCLUDED in relations:
            return GenericJump(index=n, verdict=Verdict.HALTS, prefix=p.prefix(s + 1))
        if all(r is Relation.DISJOINT for r in relations):
            return GenericJump(index=n, verdict=Verdict.LOOPS, prefix=p.prefix(s + 1))
    return GenericJump(index=n, verdict=Verdict.UNKNOWN, prefix=p.prefix(limit + 1))
