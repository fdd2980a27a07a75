"""
OpenQASM 2.0 export and a reader for the subset the exporter writes.

Semantics that differ from a literal reading of qelib1.inc:
- ``rz(t)`` means exp(-i t Z / 2), not u1(t)
- a general 2x2 unitary e^{ia} u3(t, p, l) is written as u3 followed by
  ``x; u1(a); x; u1(a)``, which multiplies by e^{ia} exactly
"""
from __future__ import annotations

import ast
import math
import operator
import re

import numpy as np

from .circuit import Circuit, Gate, controlled_gate, unitary_gate
from .errors import GateError, SchemaError

# sequences whose net effect is below this are treated as exact no-ops
PHASE_TOL = 1e-15


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def u3_params(u: np.ndarray) -> tuple[float, float, float, float]:
    """(theta, phi, lambda, alpha) with u = e^{i alpha} u3(theta, phi, lambda)."""
    a, b = abs(u[0, 0]), abs(u[1, 0])
    theta = 2 * math.atan2(b, a)
    if a > 1e-12:
        alpha = float(np.angle(u[0, 0]))
        if b > 1e-12:
            phi = float(np.angle(u[1, 0])) - alpha
            lam = float(np.angle(-u[0, 1])) - alpha
        else:
            phi, lam = 0.0, float(np.angle(u[1, 1])) - alpha
    else:
        alpha = 0.0
        phi = float(np.angle(u[1, 0]))
        lam = float(np.angle(-u[0, 1]))
    return theta, phi, lam, alpha


def _fmt(x: float) -> str:
    return repr(float(x))


def _q(i: int) -> str:
    return f"q[{i}]"


def _export_gate(g: Gate) -> list[str]:
    qs = ",".join(_q(i) for i in g.qubits)
    k = g.kind
    if k in ("h", "x", "s", "sdg", "swap", "cswap"):
        return [f"{k} {qs};"]
    if k == "cnot":
        return [f"cx {qs};"]
    if k in ("ry", "rz"):
        return [f"{k}({_fmt(g.params[0])}) {qs};"]
    if k == "phase":
        return [f"u1({_fmt(g.params[0])}) {qs};"]
    u = g.base_unitary()
    t, p, l, a = u3_params(u)
    angles = f"{_fmt(t)},{_fmt(p)},{_fmt(l)}"
    if k == "u1q":
        lines = [f"u3({angles}) {qs};"]
        if abs(np.exp(1j * a) - 1) > PHASE_TOL:
            q0 = _q(g.qubits[0])
            lines += [f"x {q0};", f"u1({_fmt(a)}) {q0};", f"x {q0};", f"u1({_fmt(a)}) {q0};"]
        return lines
    if k == "cu1q":
        c, tq = g.qubits
        lines = [f"u1({_fmt(a)}) {_q(c)};"] if abs(np.exp(1j * a) - 1) > PHASE_TOL else []
        return lines + [f"cu3({angles}) {_q(c)},{_q(tq)};"]
    if k == "mcu1q" and g.arity == 3 and np.allclose(u, [[0, 1], [1, 0]], atol=0):
        return [f"ccx {qs};"]
    raise SchemaError(f"gate {k} on {g.arity} qubits has no OpenQASM 2.0 form here")


def to_qasm(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    for g in circuit.gates:
        lines += _export_gate(g)
    return "\n".join(lines) + "\n"


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval(expr: str) -> float:
    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        raise SchemaError(f"unsupported parameter expression {expr!r}")

    try:
        return walk(ast.parse(expr.strip(), mode="eval"))
    except SyntaxError as exc:
        raise SchemaError(f"bad parameter expression {expr!r}") from exc


_LINE = re.compile(r"^([a-z0-9_]+)\s*(?:\(([^)]*)\))?\s+(.+)$")
_QARG = re.compile(r"^q\[(\d+)\]$")


def from_qasm(text: str) -> Circuit:
    width = None
    gates: list[Gate] = []
    body = re.sub(r"//[^\n]*", "", text)
    for raw in body.split(";"):
        stmt = raw.strip()
        if not stmt or stmt.startswith("OPENQASM") or stmt.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\]$", stmt)
        if m:
            width = int(m.group(1))
            continue
        m = _LINE.match(stmt)
        if not m:
            raise SchemaError(f"cannot parse statement {stmt!r}")
        name, params, args = m.group(1), m.group(2), m.group(3)
        ps = [_eval(p) for p in params.split(",")] if params else []
        qs = []
        for a in args.split(","):
            qm = _QARG.match(a.strip())
            if not qm:
                raise SchemaError(f"bad qubit argument {a!r}")
            qs.append(int(qm.group(1)))
        gates.append(_import_gate(name, ps, qs))
    if width is None:
        raise SchemaError("missing qreg declaration")
    try:
        return Circuit(width, tuple(gates))
    except (GateError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc


def _import_gate(name: str, ps: list[float], qs: list[int]) -> Gate:
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    try:
        if name in ("h", "x", "s", "sdg", "swap", "cswap"):
            return Gate(name, tuple(qs))
        if name == "cx":
            return Gate("cnot", tuple(qs))
        if name in ("ry", "rz"):
            return Gate(name, tuple(qs), tuple(ps))
        if name == "u1":
            return Gate("phase", tuple(qs), tuple(ps))
        if name == "u3":
            return unitary_gate(u3_matrix(*ps), qs[0])
        if name == "cu3":
            return controlled_gate(u3_matrix(*ps), [qs[0]], qs[1])
        if name == "cu1":
            return controlled_gate(np.diag([1, np.exp(1j * ps[0])]), [qs[0]], qs[1])
        if name == "ccx":
            return controlled_gate(x, qs[:2], qs[2])
    except (TypeError, IndexError, GateError) as exc:
        raise SchemaError(f"bad arguments for {name}: {exc}") from exc
    raise SchemaError(f"unsupported gate {name!r}")
