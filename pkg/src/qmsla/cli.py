"""
Command-line front end.

Exit codes: 0 ok, 2 I/O, 3 schema or usage, 4 dimension, 5 numeric,
6 root finding.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg as la
from .circuit import Circuit
from .errors import DimensionError, InputOutputError, QmslaError, SchemaError
from .matrix_state import identity
from .mvtrace import EstimatorConfig, pad_with_identities, prepare_matrices, spectral_sum_factored, spectral_sum_moments
from .qasm import from_qasm, to_qasm
from .simulator import MODES, estimate_trace, overlap_circuit
from .synthesis import synthesize_state_prep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"usage: {message}")


def _cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc}") from exc


def _read_circuit(path: str) -> Circuit:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("circuit JSON must be an object")
    return Circuit.from_dict(data)


def _parse_coeffs(text: str) -> list[complex]:
    try:
        return [complex(c.strip().replace(" ", "")) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise SchemaError(f"bad coefficient list {text!r}") from exc


def _emit(payload, args, text: str | None = None) -> None:
    """Write a JSON/text report to --out or stdout."""
    if isinstance(payload, str):
        out = payload
    elif getattr(args, "report", "json") == "json":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = text if text is not None else _as_text(payload)
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(out)
        except OSError as exc:
            raise InputOutputError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(out)


def _as_text(report: dict) -> str:
    lines = []
    for key in sorted(report):
        v = report[key]
        if isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v):
            v = complex(*v)
        lines.append(f"{key}: {v}")
    return "\n".join(lines) + "\n"


def _is_real(*arrays) -> bool:
    return all(not np.any(np.imag(np.asarray(a))) for a in arrays)


def cmd_estimate_trace(args) -> dict:
    mats = [la.read_matrix_json(p) for p in args.matrices.split(",") if p]
    if len(mats) < 2:
        raise SchemaError("--matrices needs at least two files")
    la.check_chain(mats)
    n = mats[0].shape[0]
    padded = pad_with_identities(mats, lambda: np.eye(n, dtype=complex))
    out = prepare_matrices(padded, optimized=not args.baseline)
    shots = args.shots if args.mode != "exact" else None
    est = estimate_trace(out, args.mode, shots, args.seed, both_parts=not _is_real(*mats))
    oracle = la.multivariate_trace_oracle(mats)
    psi, phi = out.u_psi.circuit, out.u_phi.circuit
    return {
        "estimate": _cpair(est.value),
        "exact_oracle": _cpair(oracle),
        "abs_error": abs(est.value - oracle),
        "norm_product": out.norm_product,
        "qubits": phi.num_qubits,
        "gates": psi.gate_count + phi.gate_count,
        "depth": overlap_circuit(psi, phi).depth,
        "shots": shots,
        "seed": args.seed,
        "mode": args.mode,
        "identities_appended": len(padded) - len(mats),
        "swap_count": psi.swap_count + phi.swap_count,
        "phase_blind": args.mode == "swap",
    }


def cmd_spectral_sum(args) -> dict:
    A = la.read_matrix_json(args.matrix)
    coeffs = _parse_coeffs(args.coeffs)
    if not coeffs:
        raise SchemaError("--coeffs is empty")
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"spectral sums need a square matrix, got {A.shape}")
    shots = args.shots if args.mode != "exact" else None
    config = EstimatorConfig(args.mode, shots, args.seed, complex_parts=not _is_real(A, coeffs))
    if args.method == "moments":
        value = spectral_sum_moments(coeffs, synthesize_state_prep(A), A.shape[0], config, la.frobenius(A))
    else:
        value = spectral_sum_factored(coeffs, A, config)
    oracle = la.trace(la.matrix_polynomial(coeffs, A))
    return {
        "estimate": _cpair(value),
        "exact_oracle": _cpair(oracle),
        "abs_error": abs(value - oracle),
        "method": args.method,
        "mode": args.mode,
        "degree": len(coeffs) - 1,
        "shots": shots,
        "seed": args.seed,
    }


def cmd_synthesize(args) -> dict:
    prep = synthesize_state_prep(la.read_matrix_json(args.matrix))
    data = prep.circuit.to_dict()
    data["meta"] = {"rows": prep.rows, "cols": prep.cols}
    return data


def _load_any_circuit(args) -> Circuit:
    if getattr(args, "circuit", None):
        return _read_circuit(args.circuit)
    if getattr(args, "matrix", None):
        return synthesize_state_prep(la.read_matrix_json(args.matrix)).circuit
    raise SchemaError("give --circuit or --matrix")


def cmd_export_qasm(args) -> str:
    return to_qasm(_load_any_circuit(args))


def cmd_import_qasm(args) -> dict:
    return from_qasm(_read_text(args.qasm)).to_dict()


def cmd_stats(args) -> dict:
    if args.identity:
        return identity(args.identity).circuit.stats()
    if args.matrices:
        mats = [la.read_matrix_json(p) for p in args.matrices.split(",") if p]
        la.check_chain(mats)
        n = mats[0].shape[0]
        out = prepare_matrices(pad_with_identities(mats, lambda: np.eye(n, dtype=complex)))
        report = out.u_phi.circuit.stats()
        report["u_psi"] = out.u_psi.circuit.stats()
        return report
    return _load_any_circuit(args).stats()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmsla", description="Matrix state circuits and multivariate trace estimation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, modes=True):
        if modes:
            sp.add_argument("--mode", choices=MODES, default="exact")
            sp.add_argument("--shots", type=int, default=100000)
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--report", choices=("text", "json"), default="json")
        sp.add_argument("--out")

    sp = sub.add_parser("estimate-trace", help="estimate Tr(A_1 ... A_L)")
    sp.add_argument("--matrices", required=True, help="comma-separated matrix JSON paths")
    sp.add_argument("--baseline", action="store_true", help="use the unoptimized construction")
    common(sp)
    sp.set_defaults(func=cmd_estimate_trace)

    sp = sub.add_parser("spectral-sum", help="estimate Tr p(A)")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--coeffs", required=True, help="c0,c1,...,cL (ascending powers)")
    sp.add_argument("--method", choices=("moments", "factored"), default="moments")
    common(sp)
    sp.set_defaults(func=cmd_spectral_sum)

    sp = sub.add_parser("synthesize", help="state preparation circuit for a matrix")
    sp.add_argument("--matrix", required=True)
    common(sp, modes=False)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("export-qasm", help="write OpenQASM 2.0")
    sp.add_argument("--circuit")
    sp.add_argument("--matrix")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_qasm)

    sp = sub.add_parser("import-qasm", help="read OpenQASM 2.0 into circuit JSON")
    sp.add_argument("--qasm", required=True)
    common(sp, modes=False)
    sp.set_defaults(func=cmd_import_qasm)

    sp = sub.add_parser("stats", help="qubits, gates, depth, histogram, swap count")
    sp.add_argument("--circuit")
    sp.add_argument("--matrix")
    sp.add_argument("--matrices", help="stats of the compiled trace pair")
    sp.add_argument("--identity", type=int, help="stats of the identity prep of this size")
    common(sp, modes=False)
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "shots", 1) is not None and getattr(args, "shots", 1) < 1:
            raise SchemaError("--shots must be >= 1")
        _emit(args.func(args), args)
    except QmslaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
