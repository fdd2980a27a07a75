"""
Matrix state preparation circuits and their algebra.

A prep for an m x n matrix A maps |0> to vec(A)/||A||_F. The column index
lives on ``creg`` and the row index on ``rreg``; amplitude a_ij sits on the
basis state where creg holds j and rreg holds i (both MSB-first).

Every operation returns a prep in canonical layout, creg = 0..c-1 followed
by rreg = c..q-1, so basis index m*j + i carries a_ij. Reordering is done
with ``qc_permute_bits`` and therefore never adds gates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit import (
    Circuit,
    Gate,
    Permutation,
    qc_compose,
    qc_conjugate,
    qc_empty,
    qc_permute_bits,
    qc_tensor,
    qc_transpose,
)
from .errors import DimensionError


def log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise DimensionError(f"{n} is not a power of two")
    return n.bit_length() - 1


@dataclass(frozen=True)
class MatrixStatePrep:
    circuit: Circuit
    rows: int
    cols: int
    creg: tuple[int, ...]
    rreg: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "creg", tuple(self.creg))
        object.__setattr__(self, "rreg", tuple(self.rreg))
        if len(self.creg) != log2_exact(self.cols) or len(self.rreg) != log2_exact(self.rows):
            raise DimensionError(
                f"registers ({len(self.creg)}, {len(self.rreg)}) do not fit a {self.rows}x{self.cols} matrix"
            )
        if sorted(self.creg + self.rreg) != list(range(self.circuit.num_qubits)):
            raise DimensionError("creg and rreg must partition the circuit qubits")

    @classmethod
    def canonical(cls, circuit: Circuit, rows: int, cols: int) -> "MatrixStatePrep":
        c = log2_exact(cols)
        return cls(circuit, rows, cols, tuple(range(c)), tuple(range(c, circuit.num_qubits)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits

    @property
    def is_canonical(self) -> bool:
        return self.creg + self.rreg == tuple(range(self.num_qubits))

    @property
    def is_column(self) -> bool:
        return self.cols == 1

    def normalized(self) -> "MatrixStatePrep":
        """Same matrix state with registers moved to the canonical layout."""
        if self.is_canonical:
            return self
        circ = qc_permute_bits(self.circuit, self.creg + self.rreg)
        return MatrixStatePrep.canonical(circ, self.rows, self.cols)


def _canon(U: MatrixStatePrep) -> MatrixStatePrep:
    return U.normalized()


def identity(n: int) -> MatrixStatePrep:
    """||I_n>>: Hadamards on the column register, CNOTs copying it into the row register."""
    q = log2_exact(n)
    if q < 1:
        raise DimensionError("identity needs n >= 2")
    gates = [Gate("h", (i,)) for i in range(q)]
    gates += [Gate("cnot", (i, q + i)) for i in range(q)]
    return MatrixStatePrep.canonical(Circuit(2 * q, tuple(gates)), n, n)


def matrix(U: Circuit) -> MatrixStatePrep:
    """||M(U)>>: U applied to the row register of ||I>>."""
    n = 2 ** U.num_qubits
    base = identity(n)
    q = U.num_qubits
    return MatrixStatePrep.canonical(qc_compose(base.circuit, U, range(q, 2 * q)), n, n)


def conjugate(UA: MatrixStatePrep) -> MatrixStatePrep:
    U = _canon(UA)
    return MatrixStatePrep.canonical(qc_conjugate(U.circuit), U.rows, U.cols)


def transpose(UA: MatrixStatePrep) -> MatrixStatePrep:
    U = _canon(UA)
    circ = qc_permute_bits(U.circuit, U.rreg + U.creg)
    return MatrixStatePrep.canonical(circ, U.cols, U.rows)


def vec_op(UA: MatrixStatePrep) -> MatrixStatePrep:
    U = _canon(UA)
    return MatrixStatePrep.canonical(U.circuit, U.rows * U.cols, 1)


def rvec(UA: MatrixStatePrep) -> MatrixStatePrep:
    """vec(A) read as a 1 x mn row vector; metadata only."""
    U = _canon(UA)
    return MatrixStatePrep.canonical(U.circuit, 1, U.rows * U.cols)


def pad_zero_columns(UA: MatrixStatePrep, k: int) -> MatrixStatePrep:
    """[A 0] with 2^k n columns, by prepending k idle column qubits."""
    if k < 1:
        raise DimensionError("pad_zero_columns needs k >= 1")
    U = _canon(UA)
    return MatrixStatePrep.canonical(qc_tensor(qc_empty(k), U.circuit), U.rows, U.cols * 2 ** k)


def pad_zero_rows(UA: MatrixStatePrep, r: int) -> MatrixStatePrep:
    """A stacked over zeros, 2^r m rows; r idle qubits go between creg and rreg."""
    if r < 0:
        raise DimensionError("pad_zero_rows needs r >= 0")
    U = _canon(UA)
    if r == 0:
        return U
    c = len(U.creg)
    wiring = [i if i < c else i + r for i in range(U.num_qubits)]
    circ = qc_compose(qc_empty(U.num_qubits + r), U.circuit, wiring)
    return MatrixStatePrep.canonical(circ, U.rows * 2 ** r, U.cols)


def pad(UA: MatrixStatePrep, r: int, k: int) -> MatrixStatePrep:
    out = pad_zero_rows(UA, r)
    return pad_zero_columns(out, k) if k > 0 else out


def adjoint(UA: MatrixStatePrep) -> MatrixStatePrep:
    return conjugate(transpose(UA))


def matrix_vec(UA: MatrixStatePrep, Ub: MatrixStatePrep) -> MatrixStatePrep:
    """Vector prep whose first m amplitudes are A b / (||A|| ||b||)."""
    A, b = _canon(UA), _canon(Ub)
    if not b.is_column:
        raise DimensionError(f"matrix_vec needs a column vector, got {b.rows}x{b.cols}")
    if b.rows != A.cols:
        raise DimensionError(f"cannot apply a {A.rows}x{A.cols} matrix to a length-{b.rows} vector")
    circ = qc_compose(A.circuit, qc_transpose(b.circuit), A.creg)
    return vec_op(MatrixStatePrep.canonical(circ, A.rows, A.cols))


def kronecker_permutation(preps: Sequence[MatrixStatePrep]) -> Permutation:
    """Register order turning tensor(U_1, .., U_k) into a prep of A_1 x .. x A_k."""
    cregs, rregs, offset = [], [], 0
    for U in preps:
        cregs += [offset + i for i in U.creg]
        rregs += [offset + i for i in U.rreg]
        offset += U.num_qubits
    return Permutation(tuple(cregs + rregs))


def kronecker_many(preps: Sequence[MatrixStatePrep]) -> MatrixStatePrep:
    """||A_1 x ... x A_k>> with one tensor pass and a single register permutation."""
    if not preps:
        raise DimensionError("kronecker of nothing")
    preps = [_canon(U) for U in preps]
    width = sum(U.num_qubits for U in preps)
    gates, offset = [], 0
    for U in preps:
        gates += [g.remapped(range(offset, offset + U.num_qubits)) for g in U.circuit.gates]
        offset += U.num_qubits
    circ = Circuit(width, tuple(gates))
    rows = cols = 1
    for U in preps:
        rows, cols = rows * U.rows, cols * U.cols
    out = qc_permute_bits(circ, kronecker_permutation(preps))
    return MatrixStatePrep.canonical(out, rows, cols)


def kronecker(UA: MatrixStatePrep, UB: MatrixStatePrep) -> MatrixStatePrep:
    return kronecker_many([UA, UB])


def overlap(Upsi: MatrixStatePrep, Uphi: MatrixStatePrep) -> MatrixStatePrep:
    """Vector prep whose amplitude 0 is <psi|phi>."""
    if not (Upsi.is_column and Uphi.is_column):
        raise DimensionError("overlap needs two column-vector preps")
    if Upsi.rows != Uphi.rows:
        raise DimensionError(f"overlap of lengths {Upsi.rows} and {Uphi.rows}")
    return matrix_vec(adjoint(Upsi), Uphi)
