"""
The canonical machine universe: instructions, programs, their Gödel numbering and
the program text format.
"""
import re
from enum import Enum, IntEnum
from functools import lru_cache
from typing import Iterable, NamedTuple

from pydantic import BaseModel, ConfigDict, Field

from baire.words import decode_sequence, encode_sequence, pair, unpair
from core.errors import KindMismatch, WorkbenchError


class Op(IntEnum):
    HALT = -1
    INC = 0
    DEC = 1
    APPEND = 2
    NATIVE = 3
    JZ = 4
    READ = 5
    WRITE = 6


OPCODE_COUNT = 7
BINARY_OPS = frozenset({Op.JZ, Op.READ, Op.WRITE})


class Kind(str, Enum):
    MONOTONE = "monotone"
    LIMIT = "limit"
    FMC = "fmc"


class Instruction(NamedTuple):
    op: Op
    a: int = 0
    b: int = 0

    def __str__(self) -> str:
        if self.op is Op.HALT:
            return "HALT"
        if self.op in BINARY_OPS:
            return f"{self.op.name} {self.a} {self.b}"
        return f"{self.op.name} {self.a}"


HALT = Instruction(Op.HALT)


def encode_instruction(ins: Instruction) -> int:
    """HALT ↔ 0, 그 외에는 1 + opcode + 7·operand"""
    if ins.op is Op.HALT:
        return 0
    operand = pair(ins.a, ins.b) if ins.op in BINARY_OPS else ins.a
    return 1 + int(ins.op) + OPCODE_COUNT * operand


def decode_instruction(n: int) -> Instruction:
    if n == 0:
        return HALT
    op = Op((n - 1) % OPCODE_COUNT)
    operand = (n - 1) // OPCODE_COUNT
    if op in BINARY_OPS:
        a, b = unpair(operand)
        return Instruction(op, a, b)
    return Instruction(op, operand)


class Program:
    """
    A finite instruction list over unbounded registers (all initially zero).

    Register 0 is never incremented by convention, so `JZ 0 l` is an unconditional
    jump. Jumping to a position at or beyond the end halts.
    """

    instructions: tuple[Instruction, ...]

    def __init__(self, instructions: Iterable[Instruction]):
        self.instructions = tuple(instructions)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.instructions == other.instructions

    def __hash__(self) -> int:
        return hash(self.instructions)

    def __repr__(self) -> str:
        return f"Program({len(self)} instructions)"

    @property
    def index(self) -> int:
        return encode_program(self)

    def uses(self, op: Op) -> bool:
        return any(ins.op is op for ins in self.instructions)

    def single_native(self) -> tuple[int, int] | None:
        """프로그램이 NATIVE 한 줄이면 (tag, arg)"""
        if len(self.instructions) == 1 and self.instructions[0].op is Op.NATIVE:
            return unpair(self.instructions[0].a)
        return None

    def check(self, kind: Kind) -> None:
        """출력 명령어 규율 검사: WRITE는 limit/fmc, APPEND는 monotone 전용"""
        if kind is Kind.MONOTONE and self.uses(Op.WRITE):
            raise KindMismatch("WRITE appears in a monotone program")
        if kind in (Kind.LIMIT, Kind.FMC) and self.uses(Op.APPEND):
            raise KindMismatch("APPEND appears in a limit program")

    def to_text(self) -> str:
        return format_program(self)


def encode_program(program: Program) -> int:
    return encode_sequence([encode_instruction(ins) for ins in program.instructions])


@lru_cache(maxsize=4096)
def decode_program(index: int) -> Program:
    return Program(decode_instruction(n) for n in decode_sequence(index))


class MachineCode(BaseModel):
    """Gödel 번호와 선언된 종류"""

    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=0, description="Gödel number of the program")
    kind: Kind = Field(description="output discipline: monotone, limit or fmc")
    name: str = Field(default="", description="display name, not part of the identity")

    @classmethod
    def of(cls, program: Program, kind: Kind, name: str = "") -> "MachineCode":
        return cls(index=encode_program(program), kind=kind, name=name)

    @property
    def program(self) -> Program:
        return decode_program(self.index)

    def require(self, *kinds: Kind) -> None:
        if self.kind not in kinds:
            expected = "/".join(k.value for k in kinds)
            raise KindMismatch(f"{self.label} is {self.kind.value}, expected {expected}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"#{self.index}" if self.index < 10**12 else "#<large>"

    def __hash__(self) -> int:
        return hash((self.index, self.kind))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MachineCode) and (self.index, self.kind) == (other.index, other.kind)


# ──────────────────────────────────────────
# 프로그램 텍스트 형식
# ──────────────────────────────────────────

_LABEL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*):\s*(.*)$")


class ProgramSyntaxError(WorkbenchError):
    """프로그램 텍스트를 해석할 수 없을 때 발생"""


def parse_program(text: str) -> Program:
    """
    Reads program text: one instruction per line, `#` starts a comment, a line may
    start with `label:`. Jump targets may be labels or absolute positions. NATIVE
    takes a symbolic tag name and an argument (`NATIVE lim_map 0`).
    """
    from vm.natives import tag_of

    rows: list[tuple[int, list[str]]] = []
    labels: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        while line:
            m = _LABEL_RE.match(line)
            if not m or m.group(1).upper() in Op.__members__:
                break
            labels[m.group(1)] = len(rows)
            line = m.group(2).strip()
        if line:
            rows.append((lineno, line.split()))

    def number(token: str, lineno: int) -> int:
        try:
            value = int(token)
        except ValueError:
            raise ProgramSyntaxError(f"line {lineno}: expected a number, got {token!r}") from None
        if value < 0:
            raise ProgramSyntaxError(f"line {lineno}: negative operand {value}")
        return value

    def target(token: str, lineno: int) -> int:
        if token in labels:
            return labels[token]
        if token.upper() == "END":
            return len(rows)
        return number(token, lineno)

    instructions: list[Instruction] = []
    for lineno, tokens in rows:
        mnemonic, args = tokens[0].upper(), tokens[1:]
        if mnemonic not in Op.__members__:
            raise ProgramSyntaxError(f"line {lineno}: unknown instruction {tokens[0]!r}")
        op = Op[mnemonic]
        expected = 0 if op is Op.HALT else 2 if op in BINARY_OPS or op is Op.NATIVE else 1
        if len(args) != expected:
            raise ProgramSyntaxError(f"line {lineno}: {mnemonic} takes {expected} operand(s)")
        if op is Op.HALT:
            instructions.append(HALT)
        elif op is Op.NATIVE:
            tag = tag_of(args[0]) if not args[0].isdigit() else int(args[0])
            instructions.append(Instruction(Op.NATIVE, pair(tag, number(args[1], lineno))))
        elif op is Op.JZ:
            instructions.append(Instruction(op, number(args[0], lineno), target(args[1], lineno)))
        elif op in BINARY_OPS:
            instructions.append(Instruction(op, number(args[0], lineno), number(args[1], lineno)))
        else:
            instructions.append(Instruction(op, number(args[0], lineno)))
    return Program(instructions)


def format_program(program: Program) -> str:
    """Jump targets become labels `L<pos>`; the output parses back to the same program."""
    from vm.natives import name_of

    targets = sorted({ins.b for ins in program if ins.op is Op.JZ})
    lines: list[str] = []
    for pos, ins in enumerate(program.instructions):
        prefix = f"L{pos}: " if pos in targets else ""
        if ins.op is Op.JZ:
            dest = f"L{ins.b}" if ins.b < len(program) else str(ins.b)
            body = f"JZ {ins.a} {dest}"
        elif ins.op is Op.NATIVE:
            tag, arg = unpair(ins.a)
            body = f"NATIVE {name_of(tag) or tag} {arg}"
        else:
            body = str(ins)
        lines.append(prefix + body)
    return "\n".join(lines) + "\n"


class Assembler:
    """합성 기계를 위한 작은 조립기: 레이블을 나중에 해석합니다."""

    def __init__(self):
        self._rows: list[tuple[Op, int, int | str]] = []
        self._labels: dict[str, int] = {}

    def label(self, name: str) -> "Assembler":
        self._labels[name] = len(self._rows)
        return self

    def emit(self, op: Op, a: int = 0, b: int | str = 0) -> "Assembler":
        self._rows.append((op, a, b))
        return self

    def inc(self, r: int, times: int = 1) -> "Assembler":
        for _ in range(times):
            self.emit(Op.INC, r)
        return self

    def dec(self, r: int) -> "Assembler":
        return self.emit(Op.DEC, r)

    def jz(self, r: int, dest: int | str) -> "Assembler":
        return self.emit(Op.JZ, r, dest)

    def jump(self, dest: int | str) -> "Assembler":
        return self.emit(Op.JZ, 0, dest)

    def read(self, a: int, r: int) -> "Assembler":
        return self.emit(Op.READ, a, r)

    def write(self, a: int, r: int) -> "Assembler":
        return self.emit(Op.WRITE, a, r)

    def append(self, r: int) -> "Assembler":
        return self.emit(Op.APPEND, r)

    def native(self, tag: int, arg: int) -> "Assembler":
        return self.emit(Op.NATIVE, pair(tag, arg))

    def halt(self) -> "Assembler":
        return self.emit(Op.HALT)

    def build(self) -> Program:
        end = len(self._rows)
        out: list[Instruction] = []
        for op, a, b in self._rows:
            if op is Op.HALT:
                out.append(HALT)
            elif op is Op.JZ:
                dest = end if b == "END" else self._labels[b] if isinstance(b, str) else b
                out.append(Instruction(op, a, dest))
            elif op in BINARY_OPS:
                out.append(Instruction(op, a, int(b)))
            else:
                out.append(Instruction(op, a))
        return Program(out)
