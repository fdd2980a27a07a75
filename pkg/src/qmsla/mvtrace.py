"""
Compilation of multivariate traces into a pair of vector state preparations.

For inputs A_1..A_2k the two circuits U_psi, U_phi satisfy

    <psi|phi> = Tr(A_1 ... A_2k) / prod ||A_i||_F.

U_psi depends on A_1 alone. U_phi is built from two Kronecker chains, the
"even" chain over A_2, A_4, ... and the "odd" chain over A_3, A_5, ...,
each nesting pairs A_{p-d} (x) A_{p+d}^T around the pivot p = k+1.

Chain recursion, outermost factor first:

    F(X_1) = X_1,   F(X_1, .., X_l) = rvec(F(X_2, .., X_l)) (x) X_1

and Tr(A_1 .. A_2k) = vec(A_1)^T F_even vec(F_odd). The row factor must sit
on the left: with column-major vec, (X (x) w^T) vec(Y) = X Y^T w, and placing
w^T on the right leaves a stray transpose on every odd-chain factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .circuit import Circuit, Permutation, qc_compose, qc_permute_bits, qc_tensor, qc_transpose
from .errors import DimensionError
from .matrix_state import (
    MatrixStatePrep,
    conjugate,
    identity,
    kronecker,
    log2_exact,
    matrix_vec,
    pad_zero_rows,
    rvec,
    transpose,
    vec_op,
)

# chain factor: ("pair", left, right) for A_left (x) A_right^T, or ("pivot", p) for A_p^T
Factor = tuple


@dataclass(frozen=True)
class TracePlan:
    k: int
    pivot: int
    even_pairs: tuple[tuple[int, int], ...]
    odd_pairs: tuple[tuple[int, int], ...]
    pivot_parity: str
    dims: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    @property
    def l_even(self) -> int:
        return len(self.even_pairs) + (self.pivot_parity == "even")

    @property
    def l_odd(self) -> int:
        return len(self.odd_pairs) + (self.pivot_parity == "odd")

    def chain(self, parity: str) -> list[Factor]:
        """Factors of one chain, outermost first, pivot (if any) last."""
        pairs = self.even_pairs if parity == "even" else self.odd_pairs
        out: list[Factor] = [("pair", l, r) for l, r in pairs]
        if self.pivot_parity == parity:
            out.append(("pivot", self.pivot))
        return out

    def indices(self, parity: str) -> list[int]:
        """Matrix indices (1-based) consumed by a chain, sorted."""
        idx = []
        for f in self.chain(parity):
            idx += list(f[1:])
        return sorted(idx)


def build_trace_plan(dims: Sequence[tuple[int, int]]) -> TracePlan:
    dims = tuple((int(m), int(n)) for m, n in dims)
    count = len(dims)
    if count % 2:
        raise DimensionError(f"{count} matrices: an even count is required (append an identity)")
    if count < 4:
        raise DimensionError(f"{count} matrices: at least 4 are required")
    for i in range(count - 1):
        if dims[i][1] != dims[i + 1][0]:
            raise DimensionError(f"chain breaks between A_{i + 1} {dims[i]} and A_{i + 2} {dims[i + 1]}")
    if dims[0][0] != dims[-1][1]:
        raise DimensionError("the product is not square")
    for m, n in dims:
        log2_exact(m)
        log2_exact(n)
    return _pairing(count // 2, dims)


def _pairing(k: int, dims: tuple = ()) -> TracePlan:
    even = tuple((2 * i, 2 * (k + 1 - i)) for i in range(1, k // 2 + 1))
    odd = tuple((2 * i + 1, 2 * (k - i) + 1) for i in range(1, (k - 1) // 2 + 1))
    return TracePlan(k, k + 1, even, odd, "even" if k % 2 else "odd", dims)


def _chain_value(factors: Sequence, kron, row_vec):
    out = factors[-1]
    for x in reversed(factors[:-1]):
        out = kron(row_vec(out), x)
    return out


def trace_formula_reference(mats: Sequence) -> complex:
    """Tr(A_1 .. A_2k) evaluated through the vec/Kronecker chain identity."""
    mats = [la.as_matrix(m) for m in mats]
    plan = build_trace_plan([m.shape for m in mats])
    A = {i + 1: m for i, m in enumerate(mats)}

    def factor(f):
        if f[0] == "pivot":
            return A[f[1]].T
        return np.kron(A[f[1]], A[f[2]].T)

    F = {p: _chain_value([factor(f) for f in plan.chain(p)], np.kron, la.rvec) for p in ("even", "odd")}
    return complex((la.rvec(A[1]) @ F["even"] @ la.vec(F["odd"]))[0])


@dataclass(frozen=True)
class MVTraceOutput:
    u_psi: MatrixStatePrep
    u_phi: MatrixStatePrep
    norm_product: float | None = None
    plan: TracePlan | None = field(default=None, repr=False)

    def with_norms(self, norm_product: float) -> "MVTraceOutput":
        return MVTraceOutput(self.u_psi, self.u_phi, float(norm_product), self.plan)


def _psi(U1: MatrixStatePrep, phi_qubits: int) -> MatrixStatePrep:
    base = vec_op(conjugate(U1))
    pad_bits = phi_qubits - base.num_qubits
    if pad_bits < 0:
        raise DimensionError("u_phi is shorter than vec(A_1)")
    out = pad_zero_rows(base, pad_bits)
    if out.rows != 2 ** phi_qubits:
        raise DimensionError("u_psi and u_phi lengths disagree")
    return out


def _plan_for(preps: Sequence[MatrixStatePrep]) -> TracePlan:
    return build_trace_plan([U.shape for U in preps])


def mvtrace_prep(preps: Sequence[MatrixStatePrep]) -> MVTraceOutput:
    """Reference construction: every chain step is a separate qmsla operation."""
    plan = _plan_for(preps)
    U = {i + 1: p.normalized() for i, p in enumerate(preps)}
    for i in range(plan.pivot, 2 * plan.k + 1):
        U[i] = transpose(U[i])

    def factor(f):
        return U[f[1]] if f[0] == "pivot" else kronecker(U[f[1]], U[f[2]])

    F = {p: _chain_value([factor(f) for f in plan.chain(p)], kronecker, rvec) for p in ("even", "odd")}
    u_phi = matrix_vec(F["even"], vec_op(F["odd"]))
    return MVTraceOutput(_psi(U[1], u_phi.num_qubits), u_phi, None, plan)


@dataclass(frozen=True)
class MVTracePermutation:
    """Qubit bookkeeping for the two-layer form of U_phi.

    ``layer1`` and ``layer2`` list register ids in the order the plain
    tensor products of the even and odd input circuits place them.
    ``wiring`` sends layer-2 qubit i to layer-1 qubit ``wiring[i]``; it is
    the only permutation between the layers. ``final`` moves the result to
    the canonical vector layout.
    """

    layer1: tuple[int, ...]
    layer2: tuple[int, ...]
    wiring: Permutation
    final: Permutation


def generate_mvtrace_permutation(registers: Sequence[tuple[Sequence[int], Sequence[int]]]) -> MVTracePermutation:
    """Track register layouts through the chain construction without building circuits.

    ``registers[i]`` is the (creg, rreg) pair of ids for A_{i+1}; ids must be
    distinct across A_2..A_2k. Entry 0 (A_1) is accepted and ignored.
    """
    count = len(registers)
    if count % 2 or count < 4:
        raise DimensionError(f"need an even number >= 4 of register pairs, got {count}")
    regs = {}
    for i, pair in enumerate(registers, start=1):
        if len(pair) != 2:
            raise DimensionError(f"register entry {i} must be a (creg, rreg) pair")
        regs[i] = (tuple(int(v) for v in pair[0]), tuple(int(v) for v in pair[1]))
    used = [v for i in range(2, count + 1) for v in regs[i][0] + regs[i][1]]
    if len(set(used)) != len(used):
        raise DimensionError("register ids repeat across inputs")

    k_plan = _pairing(count // 2)
    k = k_plan.k

    def tr(L):
        return (L[1], L[0])

    def kr(L1, L2):
        return (L1[0] + L2[0], L1[1] + L2[1])

    def rv(L):
        return (L[0] + L[1], ())

    lay = dict(regs)
    for i in range(k + 1, count + 1):
        lay[i] = tr(lay[i])

    def factor(f):
        return lay[f[1]] if f[0] == "pivot" else kr(lay[f[1]], lay[f[2]])

    F = {p: _chain_value([factor(f) for f in k_plan.chain(p)], kr, rv) for p in ("even", "odd")}
    canon = F["even"][0] + F["even"][1]
    odd_vec = F["odd"][0] + F["odd"][1]
    if len(odd_vec) != len(F["even"][0]):
        raise DimensionError("odd chain length does not match the even chain's column register")

    layer1 = tuple(v for i in k_plan.indices("even") for v in regs[i][0] + regs[i][1])
    layer2 = tuple(v for i in k_plan.indices("odd") for v in regs[i][0] + regs[i][1])
    pos1 = {v: t for t, v in enumerate(layer1)}
    final = Permutation(tuple(pos1[v] for v in canon))
    # odd id v lands on canonical position odd_vec.index(v), held by layer-1 qubit final[...]
    slot = {v: final[t] for t, v in enumerate(odd_vec)}
    head = [slot[v] for v in layer2]
    rest = [t for t in range(len(layer1)) if t not in set(head)]
    return MVTracePermutation(layer1, layer2, Permutation(tuple(head + rest)), final)


def _tensor_all(circuits: Sequence[Circuit]) -> Circuit:
    width = sum(c.num_qubits for c in circuits)
    gates, offset = [], 0
    for c in circuits:
        gates += [g.remapped(range(offset, offset + c.num_qubits)) for g in c.gates]
        offset += c.num_qubits
    return Circuit(width, tuple(gates))


def mvtrace_prep_optimized(preps: Sequence[MatrixStatePrep]) -> MVTraceOutput:
    """Two tensor layers joined by a single qubit wiring, no intermediate permutations.

    Produces the same states as :func:`mvtrace_prep`.
    """
    plan = _plan_for(preps)
    U = {i + 1: p.normalized() for i, p in enumerate(preps)}
    registers, offset = [], 0
    for i in range(1, 2 * plan.k + 1):
        c = len(U[i].creg)
        q = U[i].num_qubits
        registers.append((tuple(range(offset, offset + c)), tuple(range(offset + c, offset + q))))
        offset += q
    perm = generate_mvtrace_permutation(registers)

    layer1 = _tensor_all([U[i].circuit for i in plan.indices("even")])
    layer2 = _tensor_all([qc_transpose(U[i].circuit) for i in plan.indices("odd")])
    joined = qc_compose(layer1, layer2, perm.wiring)
    circ = qc_permute_bits(joined, perm.final)
    u_phi = MatrixStatePrep.canonical(circ, 2 ** circ.num_qubits, 1)
    return MVTraceOutput(_psi(U[1], u_phi.num_qubits), u_phi, None, plan)


def prepare_matrices(mats: Sequence, optimized: bool = True, synthesize=None) -> MVTraceOutput:
    """Synthesize preps for classical matrices and attach the norm product."""
    if synthesize is None:
        from .synthesis import synthesize_state_prep as synthesize
    mats = [la.as_matrix(m) for m in mats]
    preps = [synthesize(m) for m in mats]
    out = (mvtrace_prep_optimized if optimized else mvtrace_prep)(preps)
    return out.with_norms(float(np.prod([la.frobenius(m) for m in mats])))


def pad_with_identities(items: list, make_identity, minimum: int = 4) -> list:
    """Append identity factors until the count is even and at least ``minimum``."""
    items = list(items)
    while len(items) < minimum or len(items) % 2:
        items.append(make_identity())
    return items


@dataclass(frozen=True)
class EstimatorConfig:
    """How overlaps are turned into numbers.

    ``mode`` is one of exact, hadamard, hadamard_imag, swap. With
    ``hadamard`` and ``complex_parts`` both real and imaginary tests run.
    ``shots=None`` uses exact ancilla probabilities.
    """

    mode: str = "exact"
    shots: int | None = None
    seed: int = 0
    complex_parts: bool = True
    optimized: bool = True


def _estimate(out: MVTraceOutput, config: EstimatorConfig, seed: int) -> complex:
    from .simulator import estimate_trace

    return estimate_trace(out, config.mode, config.shots, seed, both_parts=config.complex_parts).value


def spectral_sum_moments(
    coeffs: Sequence[complex],
    UA: MatrixStatePrep,
    n: int,
    config: EstimatorConfig = EstimatorConfig(),
    norm: float = 1.0,
) -> complex:
    """Tr p(A) = sum_k c_k Tr(A^k), each moment from a separate trace circuit pair.

    ``norm`` is ||A||_F, needed to undo the amplitude normalization.
    """
    if UA.rows != n or UA.cols != n:
        raise DimensionError(f"expected an {n}x{n} prep, got {UA.rows}x{UA.cols}")
    build = mvtrace_prep_optimized if config.optimized else mvtrace_prep
    total = complex(coeffs[0]) * n if len(coeffs) else 0j
    for k in range(1, len(coeffs)):
        if coeffs[k] == 0:
            continue
        preps = pad_with_identities([UA] * k, lambda: identity(n))
        n_id = len(preps) - k
        out = build(preps).with_norms(norm ** k * np.sqrt(n) ** n_id)
        total += complex(coeffs[k]) * _estimate(out, config, config.seed + k)
    return total


def spectral_sum_factored(
    coeffs: Sequence[complex],
    A,
    config: EstimatorConfig = EstimatorConfig(),
) -> complex:
    """Tr p(A) = c_L Tr((A - r_1 I) ... (A - r_L I)) with r_i the roots of p."""
    from .synthesis import synthesize_state_prep

    a = la.as_matrix(A)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError("spectral sums need a square matrix")
    c = list(np.trim_zeros(np.asarray(coeffs, dtype=complex), "b"))
    if len(c) <= 1:
        return (c[0] if c else 0j) * n
    roots = la.polynomial_roots(c)
    eye = np.eye(n, dtype=complex)
    factors = [a - r * eye for r in roots]
    if any(not np.any(f) for f in factors):
        return 0j
    factors = pad_with_identities(factors, lambda: eye)
    out = prepare_matrices(factors, optimized=config.optimized, synthesize=synthesize_state_prep)
    return c[-1] * _estimate(out, config, config.seed)
