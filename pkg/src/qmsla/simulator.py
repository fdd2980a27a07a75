"""
Exact statevector simulation, Hadamard/Swap test circuits and shot sampling.

Amplitude layout is MSB-first: in basis index t = b_0 b_1 ... b_{q-1}
(binary), bit b_0 belongs to qubit 0. Many simulators are LSB-first; this
one is not, so ``np.reshape(state, [2] * q)`` puts qubit i on axis i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, controlled_gate, qc_tensor, qc_inverse, qc_compose, qc_empty
from .errors import DimensionError, GateError


def ground_state(q: int) -> np.ndarray:
    s = np.zeros(2 ** q, dtype=complex)
    s[0] = 1.0
    return s


def basis_state(q: int, index: int) -> np.ndarray:
    s = np.zeros(2 ** q, dtype=complex)
    s[index] = 1.0
    return s


def apply_gate(state: np.ndarray, gate: Gate, q: int) -> np.ndarray:
    k = gate.arity
    axes = list(gate.qubits)
    psi = np.moveaxis(state.reshape([2] * q), axes, range(k))
    shape = psi.shape
    psi = (gate.local_matrix() @ psi.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(psi, range(k), axes).reshape(-1)


def simulate(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Apply every gate of ``circuit`` in order to ``initial`` (default ``|0..0>``)."""
    q = circuit.num_qubits
    if initial is None:
        state = ground_state(q)
    else:
        state = np.array(initial, dtype=complex).reshape(-1)
        if state.size != 2 ** q:
            raise DimensionError(f"state of length {state.size} on a {q}-qubit circuit")
    for g in circuit.gates:
        state = apply_gate(state, g, q)
    return state


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full unitary, column by column. Only for small test circuits."""
    q = circuit.num_qubits
    return np.column_stack([simulate(circuit, basis_state(q, t)) for t in range(2 ** q)])


def _controlled_on(gate: Gate, anc: int) -> list[Gate]:
    k = gate.kind
    if gate.arity == 1:
        return [controlled_gate(gate.local_matrix(), [anc], gate.qubits[0])]
    if k in ("cnot", "cu1q", "mcu1q"):
        return [controlled_gate(gate.base_unitary(), [anc, *gate.qubits[:-1]], gate.qubits[-1])]
    if k == "swap":
        return [Gate("cswap", (anc, *gate.qubits))]
    if k == "cswap":
        c, a, b = gate.qubits
        x = Gate("x", (0,)).local_matrix()
        flip = controlled_gate(x, [b], a)
        return [flip, controlled_gate(x, [anc, c, a], b), flip]
    raise GateError(f"no controlled form for {k}")


def controlled_circuit(U: Circuit) -> Circuit:
    """Controlled-U on ``q(U)+1`` qubits: control is qubit 0, U sits on 1..q(U)."""
    shifted = qc_tensor(qc_empty(1), U)
    gates = [cg for g in shifted.gates for cg in _controlled_on(g, 0)]
    return Circuit(U.num_qubits + 1, tuple(gates))


def hadamard_test_circuit(U: Circuit, imaginary: bool = False) -> Circuit:
    """H, (S-dagger), controlled-U, H on ancilla qubit 0.

    Measuring the ancilla gives ``p(0) = (1 + Re<0|U|0>)/2``, or the
    imaginary part when ``imaginary`` is set.
    """
    pre = [Gate("h", (0,))] + ([Gate("sdg", (0,))] if imaginary else [])
    body = controlled_circuit(U)
    return Circuit(body.num_qubits, tuple(pre) + body.gates + (Gate("h", (0,)),))


def swap_test_circuit(q: int) -> Circuit:
    """Ancilla 0, first register 1..q, second register q+1..2q."""
    gates = [Gate("h", (0,))]
    gates += [Gate("cswap", (0, 1 + i, 1 + q + i)) for i in range(q)]
    gates.append(Gate("h", (0,)))
    return Circuit(2 * q + 1, tuple(gates))


def measure_qubit0_p0(state: np.ndarray) -> float:
    half = state.size // 2
    return float(np.sum(np.abs(state[:half]) ** 2))


@dataclass(frozen=True)
class ShotReport:
    shots: int
    zeros: int
    p0_hat: float
    derived_estimate: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "zeros": self.zeros,
            "p0_hat": self.p0_hat,
            "derived_estimate": self.derived_estimate,
            "seed": self.seed,
        }


def sample_p0(p0: float, shots: int, seed: int) -> ShotReport:
    """Bernoulli draws by inverse CDF on the ancilla marginal."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    p0 = min(max(p0, 0.0), 1.0)
    zeros = 0
    chunk = 1 << 20
    left = shots
    while left:
        n = min(chunk, left)
        zeros += int(np.count_nonzero(rng.random(n) < p0))
        left -= n
    p_hat = zeros / shots
    return ShotReport(shots, zeros, p_hat, 2 * p_hat - 1, seed)


def sample_shots(state: np.ndarray, shots: int, seed: int) -> ShotReport:
    return sample_p0(measure_qubit0_p0(state), shots, seed)


def overlap_circuit(u_psi: Circuit, u_phi: Circuit) -> Circuit:
    """The circuit ``U_psi^dagger U_phi`` whose <0|.|0> entry is <psi|phi>."""
    if u_psi.num_qubits != u_phi.num_qubits:
        raise DimensionError("overlap circuits must have equal width")
    return qc_compose(u_phi, qc_inverse(u_psi), range(u_phi.num_qubits))


MODES = ("exact", "hadamard", "hadamard_imag", "swap")


@dataclass(frozen=True)
class TraceEstimate:
    value: complex
    overlap: complex
    diagnostics: dict


def _hadamard_part(U: Circuit, imaginary: bool, shots: int | None, seed: int) -> tuple[float, dict]:
    circ = hadamard_test_circuit(U, imaginary)
    p0 = measure_qubit0_p0(simulate(circ))
    info = {"p0": p0, "circuit": circ.stats()}
    if shots is None:
        return 2 * p0 - 1, info
    report = sample_p0(p0, shots, seed)
    info["report"] = report.to_dict()
    return report.derived_estimate, info


def estimate_trace(out, mode: str = "exact", shots: int | None = None, seed: int = 0,
                   both_parts: bool = True) -> TraceEstimate:
    """Estimate <psi|phi> for a compiled trace pair, rescaled by its norm product.

    ``hadamard`` estimates the real part, plus the imaginary part when
    ``both_parts`` is set. ``swap`` only recovers |<psi|phi>|.
    ``shots=None`` uses exact ancilla probabilities instead of sampling.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    psi_c, phi_c = out.u_psi.circuit, out.u_phi.circuit
    diag: dict = {"mode": mode, "shots": shots, "seed": seed}
    if mode == "exact":
        t = complex(np.vdot(simulate(psi_c), simulate(phi_c)))
    elif mode in ("hadamard", "hadamard_imag"):
        U = overlap_circuit(psi_c, phi_c)
        diag["hadamard_circuit"] = {"qubits": U.num_qubits + 1}
        re = im = 0.0
        if mode == "hadamard":
            re, diag["real"] = _hadamard_part(U, False, shots, seed)
        if mode == "hadamard_imag" or both_parts:
            im, diag["imag"] = _hadamard_part(U, True, shots, seed + 1)
        t = complex(re, im)
    else:
        q = psi_c.num_qubits
        if phi_c.num_qubits != q:
            raise DimensionError("swap test needs equal widths")
        prep = qc_tensor(qc_empty(1), qc_tensor(psi_c, phi_c))
        circ = qc_compose(prep, swap_test_circuit(q), range(2 * q + 1))
        p0 = measure_qubit0_p0(simulate(circ))
        diag["p0"] = p0
        if shots is not None:
            report = sample_p0(p0, shots, seed)
            diag["report"] = report.to_dict()
            p0 = report.p0_hat
        t = complex(np.sqrt(max(2 * p0 - 1, 0.0)))
        diag["phase_blind"] = True
    scale = 1.0 if out.norm_product is None else out.norm_product
    diag["norm_product"] = out.norm_product
    return TraceEstimate(t * scale, t, diag)
