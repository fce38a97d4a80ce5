"""
Field operations on Cauchy names of reals, and their lifts to R′.

Inputs are pairs ⟨p, q⟩ of R-names. Sums read one cell ahead,

    (p + q)(n) = r̄ p(n+1) + r̄ q(n+1),

products read K + 1 cells ahead, with 2^K ≥ |r̄ p(0)| + |r̄ q(0)| + 2 bounding both factors.
"""
from baire.stream import Stream, interleave2
from metric.rationals import Q, rational_at, rational_index
from spaces.translators import compose, lift_endofunctor, native_code
from spaces.isos import ZIP
from transforms.witnesses import witness_for
from vm.machine import output_stream
from vm.natives import Reader, cell_native
from vm.program import MachineCode


def _left(read: Reader, n: int) -> Q:
    return rational_at(read(2 * n))


def _right(read: Reader, n: int) -> Q:
    return rational_at(read(2 * n + 1))


def product_shift(x0: Q, y0: Q) -> int:
    """2^K ≥ |x0| + |y0| + 2 인 가장 작은 K"""
    bound = abs(x0) + abs(y0) + 2
    k = 0
    while (1 << k) < bound:
        k += 1
    return k


@cell_native("real_add")
def _real_add_cell(arg: int, read: Reader, n: int) -> int:
    return rational_index(_left(read, n + 1) + _right(read, n + 1))


@cell_native("real_sub")
def _real_sub_cell(arg: int, read: Reader, n: int) -> int:
    return rational_index(_left(read, n + 1) - _right(read, n + 1))


@cell_native("real_mul")
def _real_mul_cell(arg: int, read: Reader, n: int) -> int:
    m = n + 1 + product_shift(_left(read, 0), _right(read, 0))
    return rational_index(_left(read, m) * _right(read, m))


REAL_ADD = native_code("real_add", label="+")
REAL_SUB = native_code("real_sub", label="−")
REAL_MUL = native_code("real_mul", label="×")

FIELD_OPERATIONS: dict[str, MachineCode] = {"add": REAL_ADD, "sub": REAL_SUB, "mul": REAL_MUL}


def apply_operation(op: MachineCode, p: Stream, q: Stream) -> Stream:
    return output_stream(op, interleave2(p, q))


def jumped_operation(op: MachineCode) -> MachineCode:
    """R′ × R′ → R′: zip the two sequences, then apply op to every component."""
    return compose(lift_endofunctor(op, witness_for("lim")), ZIP)
