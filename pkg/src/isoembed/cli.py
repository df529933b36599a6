"""Command-line front end.

Exit codes: 0 success (verdict true), 1 verdict false, 2 malformed input,
3 numerical failure, 4 disagreement between the support-count rule and the oracle. Output is assembled in
memory and written only once a command has succeeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .clark import AtomicMeasure, clark_measure, max_mass
from .errors import InputError, NumericalFailure
from .extremal import Verdict, decomposition_oracle, is_extreme, oracle_verdict, theta_product
from .model_space import verify_isometry
from .pick import PickSystem, boundary_fbp_interpolation, numerical_rank, pick_matrix, solvability, uniqueness
from .rational import BlaschkeProduct, RationalSchur, circle_grid, schur_check

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_NUMERIC, EXIT_DISAGREE = 0, 1, 2, 3, 4


class Disagreement(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-8
    quadrature_start: int = 256
    seed: int = 0
    output_format: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("tol must be positive")
        q = self.quadrature_start
        if q < 64 or q & (q - 1):
            raise InputError("quadrature start must be a power of two >= 64")
        if self.output_format not in ("json", "csv"):
            raise InputError(f"unknown format {self.output_format!r}")


# -- io helpers ----------------------------------------------------------------

def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _pair(paths: list[str], first: str, second: str):
    """Load (first, second) from two files or from one file holding both keys."""
    if len(paths) == 2:
        return _load(paths[0]), _load(paths[1])
    if len(paths) == 1:
        data = _load(paths[0])
        if not isinstance(data, dict) or first not in data or second not in data:
            raise InputError(f"{paths[0]} must hold keys {first!r} and {second!r}")
        return data[first], data[second]
    raise InputError("expected one combined file or two files")


def _blaschke(data) -> BlaschkeProduct:
    if not isinstance(data, dict):
        raise InputError("Blaschke product must be a JSON object")
    return BlaschkeProduct.from_json(data)


def _measure(data) -> AtomicMeasure:
    if not isinstance(data, dict):
        raise InputError("measure must be a JSON object")
    return AtomicMeasure.from_json(data)


def _schur(data) -> RationalSchur:
    if isinstance(data, (int, float)):
        return RationalSchur.constant(float(data))
    if isinstance(data, list) and len(data) == 2 and all(isinstance(v, (int, float)) for v in data):
        return RationalSchur.constant(complex(data[0], data[1]))
    if not isinstance(data, dict):
        raise InputError("Schur function must be a JSON object or constant")
    return RationalSchur.from_json(data)


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"not a complex number: {text!r}") from exc


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isoembed-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands --------------------------------------------------------------------
# Each command returns (exit code, {destination: text}); destination None is stdout.

def cmd_clark(args, cfg: RunConfig):
    b = _blaschke(_load(args.blaschke))
    sigma = clark_measure(b, _complex_arg(args.alpha))
    payload = _json(sigma.to_json())
    table = sigma.to_csv()
    if args.output:
        stem = args.output[:-5] if args.output.endswith(".json") else args.output
        return EXIT_OK, {args.output: payload if cfg.output_format == "json" else table,
                         stem + (".csv" if cfg.output_format == "json" else ".json"):
                             table if cfg.output_format == "json" else payload}
    return EXIT_OK, {None: payload if cfg.output_format == "json" else table}


def cmd_verify(args, cfg: RunConfig):
    bd, sd = _pair(args.inputs, "B", "sigma")
    b, sigma = _blaschke(bd), _measure(sd)
    cert = verify_isometry(b, sigma, cfg.tol, quadrature_start=cfg.quadrature_start)
    if cfg.output_format == "csv":
        text = _csv(["max_deviation", "verdict", "tol", "quadrature_points"],
                    [[cert.max_deviation, cert.verdict, cfg.tol, cert.quadrature_points]])
    elif args.full:
        text = _json(cert.to_json())
    else:
        text = _json({"max_deviation": cert.max_deviation, "verdict": cert.verdict,
                      "tol": cfg.tol, "quadrature_points": cert.quadrature_points,
                      "warnings": list(cert.warnings)})
    return (EXIT_OK if cert.verdict else EXIT_FALSE), {args.output: text}


def _decomposition_rows(sigma: AtomicMeasure, decomposition):
    rows = [["sigma", float(a), float(t.real), float(t.imag), float(s)]
            for a, t, s in zip(sigma.args, sigma.t, sigma.s)]
    if decomposition is not None:
        for name, half in zip(("sigma_plus", "sigma_minus"), decomposition):
            rows += [[name, float(a), float(t.real), float(t.imag), float(s)]
                     for a, t, s in zip(half.args, half.t, half.s)]
    return rows


def cmd_extreme(args, cfg: RunConfig):
    bd, sd = _pair(args.inputs, "B", "sigma")
    b, sigma = _blaschke(bd), _measure(sd)
    cert = verify_isometry(b, sigma, cfg.tol, quadrature_start=cfg.quadrature_start)
    lo, hi = b.degree, 2 * b.degree - 1
    by_count = Verdict.EXTREME if lo <= sigma.size <= hi else Verdict.NOT_EXTREME
    out = {"verdict": by_count.value, "support_size": sigma.size, "bounds": [lo, hi],
           "max_deviation": cert.max_deviation}
    report = None
    if args.oracle:
        report = decomposition_oracle(b, sigma, cfg.tol)
        oracle = oracle_verdict(report)
        out["oracle"] = report.to_json()
        if oracle is not by_count:
            # reported ahead of the embedding precondition: a disagreement is never masked
            raise Disagreement(f"support count says {by_count.value}, oracle says {oracle.value}"
                               f" (isometry deviation {cert.max_deviation:.3e})")
    if not cert.verdict:
        is_extreme(b, sigma, cfg.tol)  # raises NotEmbedding
    if cfg.output_format == "csv":
        decomposition = report.decomposition if report is not None else None
        text = _csv(["measure", "arg_t", "re_t", "im_t", "weight"], _decomposition_rows(sigma, decomposition))
    else:
        text = _json(out)
    return (EXIT_OK if by_count is Verdict.EXTREME else EXIT_FALSE), {args.output: text}


def cmd_decompose(args, cfg: RunConfig):
    bd, sd = _pair(args.inputs, "B", "sigma")
    b, sigma = _blaschke(bd), _measure(sd)
    is_extreme(b, sigma, cfg.tol)  # validates the embedding
    report = decomposition_oracle(b, sigma, cfg.tol)
    if report.decomposition is not None and not report.certified:
        raise NumericalFailure("decomposition found but not certified: " + "; ".join(report.notes))
    if cfg.output_format == "csv":
        text = _csv(["measure", "arg_t", "re_t", "im_t", "weight"], _decomposition_rows(sigma, report.decomposition))
    else:
        text = _json(report.to_json())
    return (EXIT_OK if report.decomposition is not None else EXIT_FALSE), {args.output: text}


def cmd_theta_product(args, cfg: RunConfig):
    data = _load(args.input)
    if not isinstance(data, dict) or not {"theta", "s1", "s2"} <= set(data):
        raise InputError("expected keys theta, s1, s2")
    theta = _blaschke(data["theta"])
    s1, s2 = _schur(data["s1"]), _schur(data["s2"])
    for name, s in (("s1", s1), ("s2", s2)):
        ok, mm = schur_check(s)
        if not ok:
            raise InputError(f"{name} is not in the Schur class (max modulus {mm:.6g})")
    prod = theta_product(theta, s1, s2)
    ok, mm = schur_check(prod)
    out = prod.to_json()
    out.update({"schur_ok": ok, "max_modulus": mm, "inner": prod.is_inner()})
    if cfg.output_format == "csv":
        z = circle_grid(16)
        v = prod.eval(z)
        text = _csv(["re_z", "im_z", "re_value", "im_value"],
                    [[float(a.real), float(a.imag), float(w.real), float(w.imag)] for a, w in zip(z, v)])
    else:
        text = _json(out)
    return EXIT_OK, {args.output: text}


def cmd_sweep(args, cfg: RunConfig):
    if args.alphas < 1:
        raise InputError("--alphas must be at least 1")
    b = _blaschke(_load(args.blaschke))
    rows = []
    for k in range(args.alphas):
        phase = 2.0 * np.pi * k / args.alphas
        sigma = clark_measure(b, np.exp(1j * phase))
        for a, t, s in zip(sigma.args, sigma.t, sigma.s):
            rows.append([phase, float(a), float(s), max_mass(b, complex(t))[1]])
    header = ["alpha_arg", "atom_arg", "weight", "max_mass"]
    if cfg.output_format == "json":
        text = _json([dict(zip(header, r)) for r in rows])
    else:
        text = _csv(header, rows)
    return EXIT_OK, {args.output: text}


def cmd_pick_solve(args, cfg: RunConfig):
    data = _load(args.input)
    if not isinstance(data, dict):
        raise InputError("Pick system must be a JSON object")
    system = PickSystem.from_json(data)
    diag: dict = {"boundary": system.boundary}
    if system.boundary:
        b = boundary_fbp_interpolation(system.nodes, system.values, seed=cfg.seed)
    else:
        p = pick_matrix(system.nodes, system.values)
        sol, uni = solvability(p), uniqueness(p)
        diag.update({"rank": numerical_rank(p), "margin": sol.margin, "solvable": sol.solvable,
                     "unique": uni.unique, "scaled_det": uni.scaled_det})
        b = system.solve()
    resid = np.abs(b.eval(system.nodes) - system.values)
    diag["residuals"] = [float(r) for r in resid]
    diag["degree"] = b.degree
    if cfg.output_format == "csv":
        text = _csv(["re_node", "im_node", "re_value", "im_value", "residual"],
                    [[float(z.real), float(z.imag), float(w.real), float(w.imag), float(r)]
                     for z, w, r in zip(system.nodes, system.values, resid)])
    else:
        text = _json({"fbp": b.to_json(), "diagnostics": diag})
    return EXIT_OK, {args.output: text}


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--quadrature", type=int, default=256, help="initial trapezoid points")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="isoembed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clark", parents=[common], help="Aleksandrov-Clark measure of B")
    p.add_argument("blaschke")
    p.add_argument("--alpha", default="1", help="unimodular parameter, e.g. 1, -1, 0+1j")
    p.set_defaults(func=cmd_clark)

    p = sub.add_parser("verify", parents=[common], help="isometry check of sigma on K_B")
    p.add_argument("inputs", nargs="+", help="B and sigma files, or one file with keys B, sigma")
    p.add_argument("--full", action="store_true", help="include both Gram matrices")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extreme", parents=[common], help="extreme-point classification")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--oracle", action="store_true", help="cross-check with the decomposition oracle")
    p.set_defaults(func=cmd_extreme)

    p = sub.add_parser("decompose", parents=[common], help="split sigma as a midpoint")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("theta-product", parents=[common], help="theta-product of two Schur functions")
    p.add_argument("input")
    p.set_defaults(func=cmd_theta_product)

    p = sub.add_parser("sweep", parents=[common], help="Clark atoms over equispaced alphas")
    p.add_argument("blaschke")
    p.add_argument("--alphas", type=int, default=8)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pick", help="Pick interpolation")
    pick_sub = p.add_subparsers(dest="pick_command", required=True)
    q = pick_sub.add_parser("solve", parents=[common], help="solve an interior or boundary system")
    q.add_argument("input")
    q.set_defaults(func=cmd_pick_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.tol, args.quadrature, args.seed, args.format)
        code, outputs = args.func(args, cfg)
    except Disagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for dest, text in outputs.items():
        if dest is None:
            sys.stdout.write(text)
        else:
            _write_atomic(dest, text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
