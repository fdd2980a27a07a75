"""
Amplitude-encoding synthesis with uniformly controlled rotations.

Magnitudes are loaded top-down with multiplexed Ry rotations, phases are
applied with a cascade of multiplexed Rz rotations, and the one remaining
global phase is applied as a scalar u1q gate. Each multiplexor with k
controls is expanded into 2^k rotations and 2^k CNOTs (Gray-code order), so
the circuit has at most 4*m*n gates.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate, unitary_gate
from .errors import DimensionError, NumericError
from .linalg import as_matrix, vec
from .matrix_state import MatrixStatePrep, log2_exact

ZERO_ANGLE = 1e-14
GATE_CONSTANT = 4


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def multiplexed_rotation(kind: str, angles: np.ndarray, controls: list[int], target: int) -> list[Gate]:
    """Gates for R(angles[j]) on ``target`` when ``controls`` (MSB first) hold j."""
    angles = np.asarray(angles, dtype=float)
    k = len(controls)
    if angles.size != 2 ** k:
        raise ValueError("need one angle per control pattern")
    if np.max(np.abs(angles)) < ZERO_ANGLE:
        return []
    if k == 0:
        return [Gate(kind, (target,), (float(angles[0]),))]
    size = 2 ** k
    j = np.arange(size)
    signs = np.array([[(-1) ** bin(jj & _gray(i)).count("1") for jj in j] for i in range(size)])
    alphas = signs @ angles / size
    gates = []
    for i in range(size):
        if abs(alphas[i]) >= ZERO_ANGLE:
            gates.append(Gate(kind, (target,), (float(alphas[i]),)))
        bit = (_gray(i) ^ _gray((i + 1) % size)).bit_length() - 1
        gates.append(Gate("cnot", (controls[k - 1 - bit], target)))
    return gates


def state_prep_gates(v: np.ndarray) -> list[Gate]:
    """Gates taking |0..0> to the unit vector ``v`` exactly, global phase included."""
    q = log2_exact(v.size)
    mags = np.abs(v)
    gates: list[Gate] = []
    for level in range(q):
        blocks = mags.reshape(2 ** level, 2, -1)
        n0 = np.linalg.norm(blocks[:, 0, :], axis=1)
        n1 = np.linalg.norm(blocks[:, 1, :], axis=1)
        theta = 2 * np.arctan2(n1, n0)
        gates += multiplexed_rotation("ry", theta, list(range(level)), level)

    omega = np.where(mags > 0, np.angle(v), 0.0)
    for level in range(q - 1, -1, -1):
        pairs = omega.reshape(-1, 2)
        gates += multiplexed_rotation("rz", pairs[:, 1] - pairs[:, 0], list(range(level)), level)
        omega = pairs.mean(axis=1)
    phase = float(omega[0])
    if abs(np.exp(1j * phase) - 1) > ZERO_ANGLE:
        gates.append(unitary_gate(np.exp(1j * phase) * np.eye(2), 0))
    return gates


def synthesize_state_prep(A) -> MatrixStatePrep:
    a = as_matrix(A)
    m, n = a.shape
    log2_exact(m)
    log2_exact(n)
    if m * n < 2:
        raise DimensionError("a 1x1 matrix needs zero qubits; smallest supported size is 2 entries")
    norm = np.linalg.norm(a)
    if norm == 0:
        raise NumericError("cannot encode the zero matrix")
    v = vec(a) / norm
    q = log2_exact(m * n)
    return MatrixStatePrep.canonical(Circuit(q, tuple(state_prep_gates(v))), m, n)
