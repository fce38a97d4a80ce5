"""
Represented spaces with desk-scale decoders.

A representation turns a name (a Stream) into a description of the named point at a
requested scale n: a prefix of length n for Baire and Cantor space, the value itself for
N, an observation for Sierpiński space and a rational ball of radius 2^{-n} for Cauchy
names. `consistent` says whether two descriptions can describe the same point, which is
what translator checks compare.

Jumped representations decode through the map in their tag:

    lim, lim_Δ   δ∘lim          names are converging sequences of names
    J            δ∘J⁻¹          names are jumps of names
    L            δ∘J⁻¹∘lim      (δ_J)′
    H            δ∘lim∘J⁻¹      (δ′)_J
"""
from enum import Enum
from typing import Any, Literal

from baire.stream import Stream, split2
from baire.words import Word, comparable
from core.errors import InvalidName
from metric.cauchy import Ball, balls_meet, cauchy_decode, check_cauchy_prefix, is_cauchy_prefix
from metric.cms import CMS
from metric.rationals import power_of_two
from vm.machine import output_stream
from vm.phi import PhiCode, phi_apply

# 수렴 힌트가 없는 극한 이름을 읽는 성분 번호
DECODE_STAGE = 64

JumpTag = Literal["lim", "lim_Δ", "J", "L", "H"]
JUMP_TAGS: tuple[str, ...] = ("lim", "lim_Δ", "J", "L", "H")


class Representation:
    """표현 δ: 이름 → 점 기술"""

    name: str = "δ"

    def decode(self, p: Stream, n: int) -> Any:
        raise NotImplementedError

    def valid(self, prefix: Word) -> bool:
        return True

    def consistent(self, a: Any, b: Any) -> bool:
        return a == b

    def refine(self, a: Any, b: Any) -> Any:
        """같은 점에 대한 두 기술 중 더 자세한 것"""
        return a

    def format(self, description: Any) -> str:
        return str(description)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class PrefixRepresentation(Representation):
    """Baire space: δ = id, described by prefixes."""

    name = "baire"

    def decode(self, p: Stream, n: int) -> Word:
        prefix = p.prefix(n)
        if not self.valid(prefix):
            raise InvalidName(f"{p.label} is not a {self.name} name")
        return prefix

    def consistent(self, a: Word, b: Word) -> bool:
        return comparable(a, b)

    def refine(self, a: Word, b: Word) -> Word:
        return a if len(a) >= len(b) else b

    def format(self, description: Word) -> str:
        return ",".join(map(str, description))


class CantorRepresentation(PrefixRepresentation):
    name = "cantor"

    def valid(self, prefix: Word) -> bool:
        return all(v in (0, 1) for v in prefix)

    def format(self, description: Word) -> str:
        return "".join(map(str, description))


class NaturalsRepresentation(Representation):
    """δ_N(p) = p(0)"""

    name = "N"

    def decode(self, p: Stream, n: int) -> int:
        return p.at(0)


class Observation(str, Enum):
    OBSERVED_ONE = "1"
    ZERO_SO_FAR = "0?"


class SierpinskiRepresentation(Representation):
    """δ_S(p) = 0 iff p = 0̂"""

    name = "sierpinski"

    def decode(self, p: Stream, n: int) -> Observation:
        if any(p.prefix(n)):
            return Observation.OBSERVED_ONE
        return Observation.ZERO_SO_FAR

    def consistent(self, a: Observation, b: Observation) -> bool:
        return True

    def refine(self, a: Observation, b: Observation) -> Observation:
        return Observation.OBSERVED_ONE if Observation.OBSERVED_ONE in (a, b) else Observation.ZERO_SO_FAR

    def format(self, description: Observation) -> str:
        return description.value


class CauchyRepresentation(Representation):
    def __init__(self, space: CMS):
        self.space = space
        self.name = f"cauchy:{space.name}"

    def decode(self, p: Stream, n: int) -> Ball:
        return cauchy_decode(self.space, p, n)

    def valid(self, prefix: Word) -> bool:
        return is_cauchy_prefix(self.space, prefix)

    def consistent(self, a: Ball, b: Ball) -> bool:
        return balls_meet(self.space, a, b)

    def refine(self, a: Ball, b: Ball) -> Ball:
        return a if a.radius <= b.radius else b

    def format(self, description: Ball) -> str:
        if self.space.name in ("R", "unit"):
            return str(description.interval(self.space))
        return description.describe(self.space)


class NaiveCauchyRepresentation(Representation):
    """
    Names are sequences of α-indices converging in X, with no speed requirement. Decoding
    reads the point at a late index and reports it with the radius of that scale.
    """

    def __init__(self, space: CMS, stage: int = DECODE_STAGE):
        self.space = space
        self.stage = stage
        self.name = f"naive:{space.name}"

    def decode(self, p: Stream, n: int) -> Ball:
        return Ball(p.at(self.stage), power_of_two(n))

    def consistent(self, a: Ball, b: Ball) -> bool:
        return balls_meet(self.space, a, b)

    def format(self, description: Ball) -> str:
        return CauchyRepresentation(self.space).format(description)


class ProductRepresentation(Representation):
    """δ_{X×Y}⟨p, q⟩ = (δ_X(p), δ_Y(q))"""

    def __init__(self, left: Representation, right: Representation):
        self.left = left
        self.right = right
        self.name = f"{left.name}×{right.name}"

    def decode(self, p: Stream, n: int) -> tuple:
        a, b = split2(p)
        return self.left.decode(a, n), self.right.decode(b, n)

    def consistent(self, a: tuple, b: tuple) -> bool:
        return self.left.consistent(a[0], b[0]) and self.right.consistent(a[1], b[1])

    def refine(self, a: tuple, b: tuple) -> tuple:
        return self.left.refine(a[0], b[0]), self.right.refine(a[1], b[1])

    def format(self, description: tuple) -> str:
        return f"({self.left.format(description[0])}; {self.right.format(description[1])})"


class MeetRepresentation(Representation):
    """(δ_X ∧ δ_Y)⟨p, q⟩ = z iff δ_X(p) = δ_Y(q) = z, for two representations of one set."""

    def __init__(self, left: Representation, right: Representation):
        self.left = left
        self.right = right
        self.name = f"{left.name}∧{right.name}"

    def decode(self, p: Stream, n: int) -> Any:
        a, b = split2(p)
        da, db = self.left.decode(a, n), self.right.decode(b, n)
        if not self.left.consistent(da, db):
            raise InvalidName(f"the two halves of {p.label} name different points: {da} vs {db}")
        return self.left.refine(da, db)

    def consistent(self, a: Any, b: Any) -> bool:
        return self.left.consistent(a, b)

    def refine(self, a: Any, b: Any) -> Any:
        return self.left.refine(a, b)

    def format(self, description: Any) -> str:
        return self.left.format(description)


class FunctionRepresentation(Representation):
    """
    C(X, Y) with PhiCode associates as names. A function is described at scale n by the
    outputs its code forces from the first n prefixes of each probe input.
    """

    def __init__(self, domain: Representation, codomain: Representation, probes: list[Stream]):
        self.domain = domain
        self.codomain = codomain
        self.probes = probes
        self.name = f"C({domain.name},{codomain.name})"

    def decode(self, p: Stream, n: int) -> tuple[Word, ...]:
        code = PhiCode(p)
        return tuple(phi_apply(code, probe, n + 1)[:n] for probe in self.probes)

    def consistent(self, a: tuple, b: tuple) -> bool:
        return len(a) == len(b) and all(comparable(u, v) for u, v in zip(a, b))

    def refine(self, a: tuple, b: tuple) -> tuple:
        return tuple(u if len(u) >= len(v) else v for u, v in zip(a, b))

    def format(self, description: tuple) -> str:
        return " | ".join(",".join(map(str, w)) for w in description)


# ──────────────────────────────────────────
# 점프된 표현
# ──────────────────────────────────────────


def limit_point(x: Stream, stage: int = DECODE_STAGE) -> Stream:
    """수렴 힌트가 있으면 정확한 극한, 없으면 성분 stage"""
    if x.has_settle:
        return x.limit_stream()
    return x.component(stage)


def inverse_jump(h: Stream) -> Stream:
    from transforms.jump import jump_inverse_realizer

    return output_stream(jump_inverse_realizer(), h)


class JumpedRepresentation(Representation):
    def __init__(self, base: Representation, tag: JumpTag, stage: int = DECODE_STAGE):
        if tag not in JUMP_TAGS:
            raise ValueError(f"unknown jump tag {tag!r}")
        self.base = base
        self.tag = tag
        self.stage = stage
        self.name = _jumped_name(base.name, tag)

    def point(self, name: Stream) -> Stream:
        """이름이 가리키는 기저 표현의 이름"""
        if self.tag in ("lim", "lim_Δ"):
            return limit_point(name, self.stage)
        if self.tag == "J":
            return inverse_jump(name)
        if self.tag == "L":
            return inverse_jump(limit_point(name, self.stage))
        from transforms.halting import limit_part

        return limit_part(name)

    def decode(self, p: Stream, n: int) -> Any:
        return self.base.decode(self.point(p), n)

    def consistent(self, a: Any, b: Any) -> bool:
        return self.base.consistent(a, b)

    def refine(self, a: Any, b: Any) -> Any:
        return self.base.refine(a, b)

    def format(self, description: Any) -> str:
        return self.base.format(description)


def _jumped_name(base: str, tag: str) -> str:
    return {
        "lim": f"{base}′",
        "lim_Δ": f"{base}^Δ",
        "J": f"{base}_J",
        "L": f"{base}^L",
        "H": f"{base}_H",
    }[tag]


def jump(rep: Representation, tag: JumpTag) -> JumpedRepresentation:
    """Jumps `rep`, rewriting (δ_J)′ to δ^L and (δ′)_J to δ_H."""
    if isinstance(rep, JumpedRepresentation):
        if rep.tag == "J" and tag == "lim":
            return JumpedRepresentation(rep.base, "L", rep.stage)
        if rep.tag == "lim" and tag == "J":
            return JumpedRepresentation(rep.base, "H", rep.stage)
    return JumpedRepresentation(rep, tag)


# ──────────────────────────────────────────
# 이름으로 찾기
# ──────────────────────────────────────────

BAIRE = PrefixRepresentation()
CANTOR_BITS = CantorRepresentation()
NATURALS = NaturalsRepresentation()
SIERPINSKI = SierpinskiRepresentation()


def representation_by_name(name: str) -> Representation:
    """`baire`, `cantor`, `N`, `sierpinski`, `cauchy:<space>`, `naive:<space>`"""
    from metric.cms import cms_by_name

    fixed = {"baire": BAIRE, "cantor": CANTOR_BITS, "N": NATURALS, "sierpinski": SIERPINSKI}
    if name in fixed:
        return fixed[name]
    kind, _, space = name.partition(":")
    if kind == "cauchy" and space:
        return CauchyRepresentation(cms_by_name(space))
    if kind == "naive" and space:
        return NaiveCauchyRepresentation(cms_by_name(space))
    raise KeyError(f"unknown representation {name!r}")


def with_tag(rep: Representation, tag: str | None) -> Representation:
    """tag 'base' 또는 None이면 그대로"""
    if tag in (None, "", "base"):
        return rep
    return jump(rep, tag)  # type: ignore[arg-type]


def check_name(rep: Representation, p: Stream, n: int) -> None:
    if isinstance(rep, CauchyRepresentation):
        check_cauchy_prefix(rep.space, p.prefix(n + 1))
    elif not rep.valid(p.prefix(n)):
        raise InvalidName(f"{p.label} is not a {rep.name} name")
