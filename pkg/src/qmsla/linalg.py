"""
Dense complex linear algebra used as the classical reference.

Matrices are plain ``numpy`` complex arrays. ``vec`` is column-major, so
entry ``m*j + i`` of ``vec(A)`` is ``A[i, j]``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionError, InputOutputError, RootFindingError, SchemaError


def as_matrix(A) -> np.ndarray:
    a = np.asarray(A, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix has non-finite entries")
    return a


def vec(A) -> np.ndarray:
    return as_matrix(A).reshape(-1, order="F")


def rvec(A) -> np.ndarray:
    """``vec(A)`` as a 1 x mn row matrix."""
    return vec(A).reshape(1, -1)


def unvec(v, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols, order="F")


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def kron_all(mats: Sequence) -> np.ndarray:
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def matmul(A, B) -> np.ndarray:
    a, b = as_matrix(A), as_matrix(B)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(A) -> complex:
    a = as_matrix(A)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"trace of non-square {a.shape}")
    return complex(np.trace(a))


def frobenius(A) -> float:
    return float(np.linalg.norm(as_matrix(A)))


def transpose(A) -> np.ndarray:
    return as_matrix(A).T.copy()


def conjugate(A) -> np.ndarray:
    return as_matrix(A).conj()


def adjoint(A) -> np.ndarray:
    return as_matrix(A).conj().T.copy()


def check_chain(mats: Sequence, closed: bool = True) -> list[tuple[int, int]]:
    """Shapes of a conformable chain; ``closed`` also demands n_0 = n_L."""
    if not mats:
        raise DimensionError("empty matrix chain")
    shapes = [as_matrix(m).shape for m in mats]
    for i in range(len(shapes) - 1):
        if shapes[i][1] != shapes[i + 1][0]:
            raise DimensionError(f"chain breaks between factors {i + 1} and {i + 2}: {shapes[i]} x {shapes[i + 1]}")
    if closed and shapes[0][0] != shapes[-1][1]:
        raise DimensionError(f"product is {shapes[0][0]}x{shapes[-1][1]}, not square")
    return shapes


def multivariate_trace_oracle(mats: Sequence) -> complex:
    """Tr(A_1 A_2 ... A_L) by explicit multiplication."""
    check_chain(mats)
    prod = as_matrix(mats[0])
    for m in mats[1:]:
        prod = prod @ as_matrix(m)
    return complex(np.trace(prod))


def rademacher(seed: int, index: int, n: int) -> np.ndarray:
    """The ``index``-th Rademacher probe of stream ``seed``; independent of other indices."""
    rng = np.random.default_rng([int(seed), int(index)])
    return rng.integers(0, 2, size=n) * 2.0 - 1.0


def hutchinson_samples(mats: Sequence, samples: int, seed: int) -> np.ndarray:
    """Per-probe values z^T (A_1 ... A_L) z, product applied right to left as mat-vecs."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    check_chain(mats)
    ms = [as_matrix(m) for m in reversed(mats)]
    n = ms[0].shape[1]
    out = np.empty(samples, dtype=complex)
    for s in range(samples):
        z = rademacher(seed, s, n)
        y = z.astype(complex)
        for m in ms:
            y = m @ y
        out[s] = z @ y
    return out


def hutchinson_estimate(mats: Sequence, samples: int, seed: int) -> complex:
    return complex(np.mean(hutchinson_samples(mats, samples, seed)))


def polyval(coeffs: Sequence[complex], x):
    """Evaluate sum_k c_k x^k (coefficients in ascending order)."""
    acc = np.zeros_like(np.asarray(x, dtype=complex))
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def matrix_polynomial(coeffs: Sequence[complex], A) -> np.ndarray:
    a = as_matrix(A)
    out = np.zeros_like(a)
    eye = np.eye(a.shape[0], dtype=complex)
    for c in reversed(coeffs):
        out = out @ a + c * eye
    return out


def polynomial_roots(coeffs: Sequence[complex], tol: float = 1e-12, max_iter: int = 1000) -> np.ndarray:
    """Roots of sum_k c_k x^k by Durand-Kerner simultaneous iteration."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size < 2:
        raise RootFindingError("polynomial must have degree >= 1")
    if not np.all(np.isfinite(c)):
        raise RootFindingError("coefficients must be finite")
    if c[-1] == 0:
        raise RootFindingError("leading coefficient is zero")
    L = c.size - 1
    monic = c / c[-1]
    scale = float(np.max(np.abs(c)))
    # Cauchy bound on the root moduli sets the radius of the initial guesses
    radius = 1 + float(np.max(np.abs(monic[:-1])))
    z = 0.5 * radius * np.exp(1j * (np.angle(0.4 + 0.9j) * np.arange(L) + 0.25))
    for _ in range(max_iter):
        vals = polyval(monic, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = np.prod(diff, axis=1)
        step = np.where(denom != 0, vals / np.where(denom != 0, denom, 1), 0)
        z = z - step
        if np.max(np.abs(step)) <= tol * max(1.0, float(np.max(np.abs(z)))):
            break
    residual = np.max(np.abs(polyval(c, z)))
    if not np.all(np.isfinite(z)) or residual > 1e-8 * scale:
        raise RootFindingError(f"Durand-Kerner did not converge (residual {residual:.3e})")
    return z


def read_matrix_json(path: str | Path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return matrix_from_dict(data)


def matrix_from_dict(data) -> np.ndarray:
    if not isinstance(data, dict) or not {"rows", "cols", "data"} <= data.keys():
        raise SchemaError("matrix JSON needs 'rows', 'cols' and 'data'")
    m, n, entries = data["rows"], data["cols"], data["data"]
    if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (m, n)):
        raise SchemaError("'rows' and 'cols' must be positive integers")
    if not isinstance(entries, list) or len(entries) != m * n:
        raise SchemaError(f"'data' must hold {m}*{n} entries")
    try:
        vals = [complex(float(e[0]), float(e[1])) for e in entries if len(e) == 2]
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"bad matrix entry: {exc}") from exc
    if len(vals) != m * n:
        raise SchemaError("every entry must be a [re, im] pair")
    a = np.array(vals, dtype=complex).reshape(m, n)
    if not np.all(np.isfinite(a)):
        raise SchemaError("matrix has non-finite entries")
    return a


def matrix_to_dict(A) -> dict:
    a = as_matrix(A)
    rows, cols = a.shape
    return {"rows": rows, "cols": cols, "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)]}


def write_matrix_json(A, path: str | Path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(A)))
