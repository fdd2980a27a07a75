import numpy as np
import pytest

from qmsla.circuit import Circuit, Gate, controlled_gate, unitary_gate
from qmsla.errors import SchemaError
from qmsla.qasm import from_qasm, to_qasm, u3_matrix, u3_params
from qmsla.simulator import circuit_unitary, simulate
from qmsla.synthesis import synthesize_state_prep

from conftest import random_circuit, random_complex, random_unitary

EXPORTABLE = ("h", "x", "s", "sdg", "ry", "rz", "phase", "u1q", "cnot", "swap", "cu1q", "cswap")


@pytest.mark.parametrize("seed", range(10))
def test_u3_decomposition(seed):
    u = random_unitary(np.random.default_rng(seed))
    t, p, l, a = u3_params(u)
    assert np.max(np.abs(np.exp(1j * a) * u3_matrix(t, p, l) - u)) < 1e-12


@pytest.mark.parametrize("u", [np.eye(2), np.array([[0, 1], [1, 0]]), np.diag([1, 1j]), np.array([[0, 1j], [1j, 0]])])
def test_u3_decomposition_edge_cases(u):
    t, p, l, a = u3_params(np.asarray(u, dtype=complex))
    assert np.allclose(np.exp(1j * a) * u3_matrix(t, p, l), u, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_round_trip_unitary(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, 3, 15, kinds=EXPORTABLE)
    back = from_qasm(to_qasm(c))
    assert back.num_qubits == 3
    assert np.max(np.abs(circuit_unitary(back) - circuit_unitary(c))) < 1e-10


def test_round_trip_synthesized_state(rng):
    prep = synthesize_state_prep(random_complex(rng, 4, 4))
    back = from_qasm(to_qasm(prep.circuit))
    assert np.max(np.abs(simulate(back) - simulate(prep.circuit))) < 1e-10


def test_header_and_names():
    c = Circuit(2, (Gate("h", (0,)), Gate("cnot", (0, 1)), Gate("phase", (1,), (0.5,))))
    text = to_qasm(c)
    assert text.splitlines()[:3] == ["OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[2];"]
    assert "cx q[0],q[1];" in text
    assert "u1(0.5) q[1];" in text


def test_toffoli_exports_as_ccx():
    g = controlled_gate(np.array([[0, 1], [1, 0]]), [0, 1], 2)
    text = to_qasm(Circuit(3, (g,)))
    assert "ccx q[0],q[1],q[2];" in text
    assert np.allclose(circuit_unitary(from_qasm(text)), circuit_unitary(Circuit(3, (g,))))


def test_general_multicontrol_refused(rng):
    g = controlled_gate(random_unitary(rng), [0, 1], 2)
    with pytest.raises(SchemaError):
        to_qasm(Circuit(3, (g,)))


def test_reader_accepts_pi_expressions_and_comments():
    text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n// note\nry(pi/2) q[0];\nrz(-pi*0.5) q[0];\n"
    c = from_qasm(text)
    assert c.gates[0] == Gate("ry", (0,), (np.pi / 2,))
    assert c.gates[1].params[0] == pytest.approx(-np.pi / 2)


def test_cu1_import():
    text = "qreg q[2];\nx q[0];\nx q[1];\ncu1(pi/2) q[0],q[1];"
    assert np.allclose(simulate(from_qasm(text)), [0, 0, 0, 1j])


def test_global_phase_is_kept():
    g = unitary_gate(1j * np.eye(2), 0)
    back = from_qasm(to_qasm(Circuit(1, (g,))))
    assert np.allclose(simulate(back), [1j, 0])


@pytest.mark.parametrize(
    "text",
    [
        "ry(0.1) q[0];",
        "qreg q[1];\nfoo q[0];",
        "qreg q[1];\nry(__import__) q[0];",
        "qreg q[1];\nh r[0];",
        "qreg q[1];\ncx q[0],q[0];",
        "qreg q[1];\nh q[3];",
        "qreg q[1];\nry(1 q[0];",
        "qreg q[2];\nu3(0.1) q[0];",
    ],
)
def test_reader_errors(text):
    with pytest.raises(SchemaError):
        from_qasm(text)
