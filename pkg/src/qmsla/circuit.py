"""
Circuit intermediate representation and the circuit-level operations.

Conventions:
- qubit 0 is the most significant bit of a basis index (MSB-first)
- circuits and gates are immutable; every operation returns a new circuit
- qubit rearrangement never emits SWAP gates, gates are re-indexed instead
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import cos, sin
from typing import Iterable, Sequence

import numpy as np

from .errors import GateError, InvalidPermutationError, InvalidWidthError, SchemaError

UNITARY_TOL = 1e-12

# name -> number of qubits (None: variable, at least 2)
ARITY = {
    "h": 1, "x": 1, "s": 1, "sdg": 1, "ry": 1, "rz": 1, "phase": 1, "u1q": 1,
    "cnot": 2, "swap": 2, "cu1q": 2,
    "cswap": 3, "mcu1q": None,
}
N_PARAMS = {
    "h": 0, "x": 0, "s": 0, "sdg": 0, "cnot": 0, "swap": 0, "cswap": 0,
    "ry": 1, "rz": 1, "phase": 1,
    "u1q": 8, "cu1q": 8, "mcu1q": 8,
}
_UNITARY_KINDS = ("u1q", "cu1q", "mcu1q")

_SQ = 1 / np.sqrt(2)
_FIXED = {
    "h": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
}


def pack_unitary(u: np.ndarray) -> tuple[float, ...]:
    """Flatten a 2x2 complex matrix into 8 reals, row-major (re, im) pairs."""
    u = np.asarray(u, dtype=complex).reshape(4)
    return tuple(float(v) for z in u for v in (z.real, z.imag))


def unpack_unitary(params: Sequence[float]) -> np.ndarray:
    p = np.asarray(params, dtype=float)
    return (p[0::2] + 1j * p[1::2]).reshape(2, 2)


def _controlled(u: np.ndarray, n_controls: int) -> np.ndarray:
    dim = 2 ** (n_controls + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2:, dim - 2:] = u
    return out


@dataclass(frozen=True)
class Gate:
    """A gate acting on an ordered tuple of qubits.

    For controlled kinds the control qubits come first and the target last.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind not in ARITY:
            raise GateError(f"unknown gate kind {self.kind!r}")
        arity = ARITY[self.kind]
        if arity is None:
            if len(self.qubits) < 2:
                raise GateError(f"{self.kind} needs at least 2 qubits")
        elif len(self.qubits) != arity:
            raise GateError(f"{self.kind} acts on {arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"repeated qubit in {self.kind}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateError("negative qubit index")
        if len(self.params) != N_PARAMS[self.kind]:
            raise GateError(f"{self.kind} takes {N_PARAMS[self.kind]} params, got {len(self.params)}")
        if not all(np.isfinite(self.params)):
            raise GateError("non-finite gate parameter")
        if self.kind in _UNITARY_KINDS:
            u = unpack_unitary(self.params)
            if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
                raise GateError("u1q entries are not unitary")

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def local_matrix(self) -> np.ndarray:
        """Unitary on the gate's own qubits, ordered as ``self.qubits`` (MSB-first)."""
        k = self.kind
        if k in _FIXED:
            return _FIXED[k]
        if k == "ry":
            t = self.params[0] / 2
            return np.array([[cos(t), -sin(t)], [sin(t), cos(t)]], dtype=complex)
        if k == "rz":
            t = self.params[0] / 2
            return np.diag([np.exp(-1j * t), np.exp(1j * t)])
        if k == "phase":
            return np.diag([1, np.exp(1j * self.params[0])])
        if k == "u1q":
            return unpack_unitary(self.params)
        if k == "cnot":
            return _controlled(_FIXED["x"], 1)
        if k == "swap":
            return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
        if k == "cswap":
            return np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 6, 5, 7]]
        # cu1q / mcu1q
        return _controlled(unpack_unitary(self.params), self.arity - 1)

    def base_unitary(self) -> np.ndarray:
        """The 2x2 target unitary of a controlled kind (or the gate itself for 1-qubit kinds)."""
        if self.kind == "cnot":
            return _FIXED["x"]
        if self.kind in ("cu1q", "mcu1q"):
            return unpack_unitary(self.params)
        if self.arity == 1:
            return self.local_matrix()
        raise GateError(f"{self.kind} has no single-target form")

    def transposed(self) -> "Gate":
        k, p = self.kind, self.params
        if k == "ry":
            return Gate(k, self.qubits, (-p[0],))
        if k in _UNITARY_KINDS:
            return Gate(k, self.qubits, pack_unitary(unpack_unitary(p).T))
        # h, x, s, sdg, rz, phase are symmetric; cnot, swap, cswap are real symmetric permutations
        return self

    def conjugated(self) -> "Gate":
        k, p = self.kind, self.params
        if k == "s":
            return Gate("sdg", self.qubits)
        if k == "sdg":
            return Gate("s", self.qubits)
        if k in ("rz", "phase"):
            return Gate(k, self.qubits, (-p[0],))
        if k in _UNITARY_KINDS:
            return Gate(k, self.qubits, pack_unitary(unpack_unitary(p).conj()))
        return self

    def adjoint(self) -> "Gate":
        return self.transposed().conjugated()

    def remapped(self, mapping: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "qubits": list(self.qubits), "params": list(self.params)}


def unitary_gate(u: np.ndarray, qubit: int) -> Gate:
    return Gate("u1q", (qubit,), pack_unitary(u))


def controlled_gate(u: np.ndarray, controls: Sequence[int], target: int) -> Gate:
    kind = "cu1q" if len(controls) == 1 else "mcu1q"
    return Gate(kind, (*controls, target), pack_unitary(u))


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0..q-1}``; ``map[i]`` is sigma(i)."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        object.__setattr__(self, "map", m)
        if sorted(m) != list(range(len(m))):
            raise InvalidPermutationError(f"not a permutation: {list(m)}")

    @classmethod
    def identity(cls, q: int) -> "Permutation":
        return cls(tuple(range(q)))

    @classmethod
    def swap(cls, q: int, a: int, b: int) -> "Permutation":
        m = list(range(q))
        m[a], m[b] = m[b], m[a]
        return cls(tuple(m))

    def __len__(self) -> int:
        return len(self.map)

    def __getitem__(self, i: int) -> int:
        return self.map[i]

    def __iter__(self):
        return iter(self.map)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.map)
        for i, s in enumerate(self.map):
            inv[s] = i
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """The map ``i -> self(other(i))``."""
        if len(other) != len(self):
            raise InvalidPermutationError("permutation sizes differ")
        return Permutation(tuple(self.map[other.map[i]] for i in range(len(self))))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise InvalidWidthError(f"circuit width must be >= 1, got {self.num_qubits}")
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise GateError(f"gate {g.kind}{g.qubits} outside width {self.num_qubits}")

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    @property
    def depth(self) -> int:
        frontier = [0] * self.num_qubits
        for g in self.gates:
            level = 1 + max(frontier[q] for q in g.qubits)
            for q in g.qubits:
                frontier[q] = level
        return max(frontier, default=0)

    @property
    def swap_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in ("swap", "cswap"))

    def histogram(self) -> dict[str, int]:
        return dict(sorted(Counter(g.kind for g in self.gates).items()))

    def stats(self) -> dict:
        return {
            "qubits": self.num_qubits,
            "gates": self.gate_count,
            "depth": self.depth,
            "histogram": self.histogram(),
            "swap_count": self.swap_count,
        }

    def to_dict(self) -> dict:
        return {"qubits": self.num_qubits, "gates": [g.to_dict() for g in self.gates]}

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        try:
            q = data["qubits"]
            raw = data["gates"]
            if not isinstance(q, int) or isinstance(q, bool) or not isinstance(raw, list):
                raise SchemaError("'qubits' must be an int and 'gates' a list")
            gates = [Gate(g["kind"], tuple(g["qubits"]), tuple(g.get("params", ()))) for g in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed circuit JSON: {exc}") from exc
        except GateError as exc:
            raise SchemaError(f"invalid gate in circuit JSON: {exc}") from exc
        return cls(q, tuple(gates))


def _as_wiring(sigma: Permutation | Sequence[int], needed: int, width: int) -> tuple[int, ...]:
    m = tuple(sigma.map if isinstance(sigma, Permutation) else (int(s) for s in sigma))
    if len(m) < needed:
        raise InvalidPermutationError(f"wiring has {len(m)} entries, {needed} required")
    if len(set(m)) != len(m) or any(not 0 <= s < width for s in m):
        raise InvalidPermutationError(f"wiring {list(m)} is not injective into {width} qubits")
    return m


def qc_empty(q: int) -> Circuit:
    return Circuit(q)


def qc_tensor(Q: Circuit, W: Circuit) -> Circuit:
    """Q on the q(Q) most significant qubits, W on the rest."""
    shift = Q.num_qubits
    moved = tuple(g.remapped(range(shift, shift + W.num_qubits)) for g in W.gates)
    return Circuit(Q.num_qubits + W.num_qubits, Q.gates + moved)


def qc_compose(W: Circuit, Q: Circuit, sigma: Permutation | Sequence[int]) -> Circuit:
    """Run W, then Q with Q's qubit ``i`` acting on qubit ``sigma[i]``.

    ``sigma`` is a permutation of the output width or, more loosely, an
    injective wiring with at least q(Q) entries.
    """
    width = max(W.num_qubits, Q.num_qubits)
    wiring = _as_wiring(sigma, Q.num_qubits, width)
    return Circuit(width, W.gates + tuple(g.remapped(wiring) for g in Q.gates))


def qc_add_gate(Q: Circuit, G: Gate, delta: Sequence[int]) -> Circuit:
    """Append G with its local qubit ``j`` placed on ``delta[j]``."""
    if len(delta) != G.arity:
        raise GateError(f"{G.kind} needs {G.arity} target qubits, got {len(delta)}")
    if any(not 0 <= d < Q.num_qubits for d in delta):
        raise GateError(f"qubit index out of range in {list(delta)}")
    return Circuit(Q.num_qubits, Q.gates + (Gate(G.kind, tuple(delta), G.params),))


def qc_transpose(U: Circuit) -> Circuit:
    return Circuit(U.num_qubits, tuple(g.transposed() for g in reversed(U.gates)))


def qc_conjugate(U: Circuit) -> Circuit:
    return Circuit(U.num_qubits, tuple(g.conjugated() for g in U.gates))


def qc_inverse(U: Circuit) -> Circuit:
    return Circuit(U.num_qubits, tuple(g.adjoint() for g in reversed(U.gates)))


def qc_permute_bits(W: Circuit, sigma: Permutation | Sequence[int]) -> Circuit:
    """Circuit whose ground-state output equals ``S_sigma W |0>``.

    ``S_sigma`` sends ``|b_0 .. b_{q-1}>`` to ``|b_sigma(0) .. b_sigma(q-1)>``.
    Equality holds on ``|0>`` only, since the trailing permutation acting on
    the ground state has been dropped.
    """
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    if len(sigma) != W.num_qubits:
        raise InvalidPermutationError(f"permutation of size {len(sigma)} on {W.num_qubits} qubits")
    inv = qc_inverse(W)
    return qc_inverse(qc_compose(qc_empty(W.num_qubits), inv, sigma.inverse()))


def sequence(width: int, gates: Iterable[Gate]) -> Circuit:
    return Circuit(width, tuple(gates))
