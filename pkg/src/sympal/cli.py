"""Command-line front end.

Every subcommand reads Matrix JSON files (``-`` for stdin) and writes a
report.  JSON is the machine contract; ``--format text`` renders the same
fields for reading.  Exit status: 0 on success, 1 for unreadable or malformed
input, 2 when a mathematical precondition fails (the triggering residual is
reported).
"""

from __future__ import annotations

import argparse
import os
import sys
from itertools import combinations

import numpy as np

from .applications import (
    Ball,
    Cylinder,
    Ellipsoid,
    QuadraticHamiltonian,
    ThermoParams,
    capacity,
    hormander_constraints,
    partition_interacting,
    partition_noninteracting,
)
from .degenerate import degenerate_williamson, hormander_psd_normal_form
from .errors import MatrixFormatError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerances, inf_norm, symplectic_residual
from .matrixio import dumps, load_json, load_matrix, matrix_from_json
from .simultaneous import (
    commutator_norm,
    family_diagonalize,
    geometric_mean,
    power_commutator_residual,
    simultaneous_williamson,
    simultaneous_williamson_psd,
)
from .williamson import diagonal_residual, flow_matrix, williamson_decompose

__all__ = ["main", "build_parser"]

TOL_ENV = "SYMPAL_TOL"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _reorder(s: np.ndarray, spectra: list[np.ndarray], order: str):
    if order == "asc":
        return s, spectra
    n = s.shape[0] // 2
    perm = np.arange(n)[::-1]
    return s[:, np.concatenate([perm, perm + n])], [spec[perm] for spec in spectra]


def _tolerances(args) -> Tolerances:
    factor = args.tol
    if factor is None:
        env = os.environ.get(TOL_ENV)
        try:
            factor = float(env) if env else 1.0
        except ValueError:
            raise MatrixFormatError(f"{TOL_ENV} must be a number, got {env!r}") from None
    tol = DEFAULT_TOL.scaled(factor)
    if args.rank_tol is not None:
        tol = Tolerances(args.rank_tol, tol.sym_tol, tol.conv_tol)
    if args.sym_tol is not None:
        tol = Tolerances(tol.rank_tol, args.sym_tol, tol.conv_tol)
    return tol


# ---------------------------------------------------------------- commands


def _williamson_report(args, tol, include_s):
    m = load_matrix(args.matrix)
    dec = williamson_decompose(m, tol)
    s, (spec,) = _reorder(dec.s, [dec.spectrum], args.order)
    report = {"spectrum": spec}
    if include_s:
        report["S"] = s
    report["residual_symplectic"] = symplectic_residual(s)
    report["residual_diag"] = diagonal_residual(s, m, spec)
    return report


def _cmd_spectrum(args, tol):
    return _williamson_report(args, tol, include_s=False)


def _cmd_williamson(args, tol):
    return _williamson_report(args, tol, include_s=True)


def _cmd_degenerate(args, tol):
    m = load_matrix(args.matrix)
    dec = degenerate_williamson(m, tol)
    r1, r2 = dec.residuals(m)
    return {"k": dec.k, "spectrum": dec.spectrum, "S": dec.s, "residual_symplectic": r1, "residual_diag": r2}


def _cmd_hormander(args, tol):
    m = load_matrix(args.matrix)
    form = hormander_psd_normal_form(m, tol)
    r1, r2 = form.residuals(m)
    return {"k": form.k, "l": form.l, "spectrum": form.mu, "S": form.s, "residual_symplectic": r1, "residual_diag": r2}


def _joint(forms, tol, psd):
    if len(forms) == 2 and psd:
        return simultaneous_williamson_psd(forms[0], forms[1], tol)
    if len(forms) == 2:
        return simultaneous_williamson(forms[0], forms[1], tol)
    return family_diagonalize(forms, tol)


def _joint_report(forms, result, order):
    s, spectra = _reorder(result.s, list(result.spectra), order)
    return {
        "spectra": spectra,
        "S": s,
        "residual_symplectic": symplectic_residual(s),
        "residual_diag": [diagonal_residual(s, m, spec) for m, spec in zip(forms, spectra)],
        "commutators": [
            {"i": i, "j": j, "residual": commutator_norm(forms[i], forms[j])}
            for i, j in combinations(range(len(forms)), 2)
        ],
    }


def _cmd_simdiag(args, tol):
    forms = [load_matrix(args.a), load_matrix(args.b)]
    return _joint_report(forms, _joint(forms, tol, args.psd), args.order)


def _cmd_family(args, tol):
    forms = [load_matrix(p) for p in args.matrices]
    return _joint_report(forms, family_diagonalize(forms, tol), args.order)


def _cmd_mean(args, tol):
    a, b = load_matrix(args.a), load_matrix(args.b)
    g = geometric_mean(a, b, args.t, tol)
    return {"t": args.t, "mean": g, "residual_symmetric": inf_norm(g - g.T)}


def _cmd_power_check(args, tol):
    a, b = load_matrix(args.a), load_matrix(args.b)
    return {"s": args.s, "residual": power_commutator_residual(a, b, args.s, tol)}


def _cmd_flow(args, tol):
    m = load_matrix(args.matrix)
    flow = flow_matrix(m, args.t, tol)
    report = {"t": args.t, "flow": flow, "residual_symplectic": symplectic_residual(flow)}
    if args.z0 is not None:
        try:
            z0 = np.array([float(v) for v in args.z0.split(",")])
        except ValueError:
            raise MatrixFormatError(f"--z0 must be comma-separated numbers, got {args.z0!r}") from None
        if z0.shape != (m.shape[0],):
            raise MatrixFormatError(f"--z0 has {z0.size} entries, expected {m.shape[0]}")
        z = flow @ z0
        report["z"] = z
        report["energy_drift"] = abs(float(z @ m @ z) - float(z0 @ m @ z0))
    return report


def _manifest_number(manifest, key, default):
    value = manifest.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MatrixFormatError(f"manifest field {key!r} must be a number, got {value!r}")
    return float(value)


def _cmd_partition(args, tol):
    manifest = load_json(args.manifest)
    if not isinstance(manifest, dict) or not isinstance(manifest.get("hamiltonians"), list):
        raise MatrixFormatError("manifest must be an object with a 'hamiltonians' list")
    hs = [matrix_from_json(obj, f"hamiltonians[{i}]") for i, obj in enumerate(manifest["hamiltonians"])]
    params = ThermoParams(_manifest_number(manifest, "beta", 1.0), _manifest_number(manifest, "hbar", 1.0))
    mode = manifest.get("mode", "noninteracting")
    if mode == "noninteracting":
        z = partition_noninteracting([QuadraticHamiltonian(h) for h in hs], params, tol)
        return {"mode": mode, "partition": z}
    if mode == "interacting":
        z = partition_interacting([QuadraticHamiltonian(h) for h in hs], params, tol)
        result = family_diagonalize(hs, tol)
        return {
            "mode": mode,
            "partition": z,
            "spectra": list(result.spectra),
            "residual_symplectic": symplectic_residual(result.s),
            "residual_diag": [diagonal_residual(result.s, m, spec) for m, spec in zip(hs, result.spectra)],
        }
    raise MatrixFormatError(f"manifest mode must be 'noninteracting' or 'interacting', got {mode!r}")


def _cmd_capacity(args, tol):
    manifest = load_json(args.manifest)
    region = manifest.get("region") if isinstance(manifest, dict) else None
    if not isinstance(region, dict):
        raise MatrixFormatError("manifest must be an object with a 'region' object")
    kind = region.get("type")
    if kind == "ball":
        return {"region": kind, "capacity": capacity(Ball(_manifest_number(region, "radius", None)))}
    if kind == "cylinder":
        axis = region.get("axis", 1)
        if isinstance(axis, bool) or not isinstance(axis, int):
            raise MatrixFormatError(f"cylinder axis must be an integer, got {axis!r}")
        cyl = Cylinder(_manifest_number(region, "radius", None), axis, region.get("n"))
        return {"region": kind, "capacity": capacity(cyl)}
    if kind == "ellipsoid":
        m = matrix_from_json(region.get("m"), "region.m")
        dec = williamson_decompose(m, tol)
        r1, r2 = dec.residuals(m)
        return {
            "region": kind,
            "capacity": capacity(Ellipsoid(m), tol),
            "spectrum": dec.spectrum,
            "residual_symplectic": r1,
            "residual_diag": r2,
        }
    raise MatrixFormatError(f"region type must be ball, cylinder or ellipsoid, got {kind!r}")


def _cmd_constraints(args, tol):
    m, mt = load_matrix(args.m), load_matrix(args.mt)
    rep = hormander_constraints(m, mt, tol)
    return {
        "k": rep.k,
        "chi_indices": [int(i) for i in rep.chi_indices],
        "c": rep.c,
        "S": rep.s,
        "residual_symplectic": symplectic_residual(rep.s),
        "residual_diag": [
            diagonal_residual(rep.s, m, rep.spectrum),
            diagonal_residual(rep.s, mt, rep.extended_spectrum),
        ],
    }


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tol", type=float, default=None, help=f"multiply all tolerances (default ${TOL_ENV} or 1)")
    common.add_argument("--rank-tol", type=float, default=None)
    common.add_argument("--sym-tol", type=float, default=None)
    common.add_argument("--order", choices=("asc", "desc"), default="asc")

    parser = _Parser(prog="sympal", description="Symplectic spectra and normal forms of quadratic forms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("spectrum", _cmd_spectrum, "symplectic eigenvalues of a PD matrix").add_argument("matrix")
    add("williamson", _cmd_williamson, "Williamson normal form of a PD matrix").add_argument("matrix")
    add("degenerate", _cmd_degenerate, "normal form of a PSD matrix with symplectic kernel").add_argument("matrix")
    add("hormander", _cmd_hormander, "normal form of any PSD matrix").add_argument("matrix")
    p = add("simdiag", _cmd_simdiag, "simultaneous diagonalization of two commuting forms")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--psd", action="store_true", help="allow semidefinite forms")
    add("family", _cmd_family, "simultaneous diagonalization of a commuting family").add_argument(
        "matrices", nargs="+"
    )
    p = add("mean", _cmd_mean, "weighted geometric mean")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--t", type=float, default=0.5)
    p = add("power-check", _cmd_power_check, "commutator residual of matrix powers")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--s", type=float, required=True)
    p = add("flow", _cmd_flow, "linear Hamiltonian flow exp(tJM)")
    p.add_argument("matrix")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--z0", default=None, help="comma-separated initial state")
    add("partition", _cmd_partition, "canonical partition function from a manifest").add_argument("manifest")
    add("capacity", _cmd_capacity, "symplectic capacity of a region manifest").add_argument("manifest")
    p = add("constraints", _cmd_constraints, "Hörmander constraints of a PSD form and its PD extension")
    p.add_argument("m")
    p.add_argument("mt")
    return parser


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, (float, np.floating)) else str(value)


def _render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, np.ndarray) and value.ndim == 2:
            lines.append(f"{key}:")
            lines += ["  " + " ".join(_fmt(v) for v in row) for row in value]
        elif isinstance(value, np.ndarray):
            lines.append(f"{key}: " + " ".join(_fmt(v) for v in value))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines += ["  " + " ".join(f"{k}={_fmt(v)}" for k, v in item.items()) for item in value]
        elif isinstance(value, list) and value and isinstance(value[0], np.ndarray):
            lines.append(f"{key}:")
            lines += ["  " + " ".join(_fmt(v) for v in item) for item in value]
        elif isinstance(value, list):
            lines.append(f"{key}: " + " ".join(_fmt(v) for v in value))
        else:
            lines.append(f"{key}: {_fmt(value)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerances(args)
        report = args.func(args, tol)
    except PreconditionError as exc:
        if args.format == "json":
            print(dumps({"error": type(exc).__name__, "message": str(exc), "residual": exc.residual}))
        print(f"error: {exc}", file=sys.stderr)
        if exc.residual is not None:
            print(f"residual: {exc.residual!r}", file=sys.stderr)
        return 2
    except (MatrixFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(dumps(report) if args.format == "json" else _render_text(report))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
