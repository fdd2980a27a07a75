from __future__ import annotations

import numpy as np
import pytest

from qmsla.circuit import Circuit, Gate, pack_unitary
from qmsla.simulator import simulate

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}

ONE_QUBIT = ("h", "x", "s", "sdg", "ry", "rz", "phase", "u1q")
TWO_QUBIT = ("cnot", "swap", "cu1q")


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_gate(rng: np.random.Generator, q: int, kinds=None) -> Gate:
    if kinds is None:
        kinds = ONE_QUBIT + (TWO_QUBIT if q >= 2 else ()) + (("cswap", "mcu1q") if q >= 3 else ())
    kind = str(rng.choice(kinds))
    arity = {"cswap": 3, "mcu1q": 3, "cnot": 2, "swap": 2, "cu1q": 2}.get(kind, 1)
    qubits = tuple(int(i) for i in rng.choice(q, size=arity, replace=False))
    if kind in ("ry", "rz", "phase"):
        params = (float(rng.uniform(-np.pi, np.pi)),)
    elif kind in ("u1q", "cu1q", "mcu1q"):
        params = pack_unitary(random_unitary(rng))
    else:
        params = ()
    return Gate(kind, qubits, params)


def random_circuit(rng: np.random.Generator, q: int, n_gates: int, kinds=None) -> Circuit:
    return Circuit(q, tuple(random_gate(rng, q, kinds) for _ in range(n_gates)))


def random_complex(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def swap_network(q: int, sigma) -> list[Gate]:
    """Explicit SWAP gates realising S_sigma (new qubit i holds old qubit sigma[i])."""
    cur = list(range(q))
    gates = []
    for i in range(q):
        j = cur.index(sigma[i])
        if j != i:
            gates.append(Gate("swap", (i, j)))
            cur[i], cur[j] = cur[j], cur[i]
    return gates


def permute_state(state: np.ndarray, sigma) -> np.ndarray:
    """Direct tensor-axis oracle for S_sigma applied to a state."""
    q = int(np.log2(state.size))
    return np.transpose(state.reshape([2] * q), list(sigma)).reshape(-1)


def phase_align(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotate ``a`` by a global phase so its largest entry matches ``b``'s phase."""
    i = int(np.argmax(np.abs(b)))
    if abs(a[i]) == 0:
        return a
    return a * (b[i] / abs(b[i])) / (a[i] / abs(a[i]))


def normalized_vec(A: np.ndarray) -> np.ndarray:
    # independent of qmsla.linalg.vec: explicit column stacking
    cols = [A[:, j] for j in range(A.shape[1])]
    v = np.concatenate(cols)
    return v / np.linalg.norm(v)


def state_of(prep) -> np.ndarray:
    return simulate(prep.circuit)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance():
    """Record a criterion outcome for the terminal summary."""

    def record(number: int, name: str):
        ACCEPTANCE_RESULTS[number] = (name, "FAIL")

        def passed():
            ACCEPTANCE_RESULTS[number] = (name, "PASS")

        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        name, status = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {name}")
