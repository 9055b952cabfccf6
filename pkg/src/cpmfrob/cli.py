"""Command line interface: ``cpmfrob check|canonicalize|generate|decompose``.

Exit codes: 0 success, 1 mathematical rejection, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import cpmap as cp
from . import frobenius as fb
from . import io
from . import randomgen as rg
from .canonicalize import canonicalize_comonoid, decompose_cp_isometry, isometry_defect, verify_canonical
from .errors import (
    CounitNotPure,
    CpmFrobError,
    HypothesesFailed,
    NotFrobenius,
    NotIsometry,
    NotProjectiveAlgebra,
    NumericalDegeneracy,
    ParseError,
    TheoremViolationDiagnostic,
)

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-8


class UsageError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("CPMFROB_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"CPMFROB_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise UsageError("CPMFROB_TOL must be positive")
    return tol


def _fmt(x: float) -> str:
    return f"{x:.2e}"


def _emit_report(args, report: dict, text_lines: list[str], t0: float) -> None:
    if not args.no_timing:
        report["timing"] = {"seconds": time.perf_counter() - t0}
    if args.json:
        out = io.dumps(report)
    else:
        lines = list(text_lines)
        if not args.no_timing:
            lines.append(f"time: {report['timing']['seconds']:.3f} s")
        out = "\n".join(lines) + "\n"
    if getattr(args, "report", None):
        io.write_text(args.report, out)
    else:
        sys.stdout.write(out)


def _law_lines(residuals: dict, required, tol: float) -> list[str]:
    lines = []
    for law, r in residuals.items():
        flag = "ok" if r <= tol else "FAIL"
        if law not in required:
            flag = "ok (not required)" if r <= tol else "fails (not required)"
        lines.append(f"  {law:<12} {_fmt(r)}  {flag}")
    return lines


# -- check ---------------------------------------------------------------


def cmd_check(args, tol: float, t0: float) -> int:
    obj, meta = io.read_structure(args.input)
    text = [f"input: {args.input}"]
    if isinstance(obj, fb.FrobeniusAlgebra):
        rep = fb.check_fhilb_algebra(obj, tol=tol)
        required = list(fb.LAWS)
        report = {"kind": "fhilb_algebra", "dim": obj.dim}
        try:
            phases = fb.measure_phases(obj.delta, obj.epsilon).as_dict()
            report["phases"] = phases
            text_extra = ["projective check: laws hold up to phase", "  phases: "
                          + ", ".join(f"{k}={v:.6f}" for k, v in phases.items())]
        except NotProjectiveAlgebra as exc:
            report["phases"] = None
            report["projective_failure"] = exc.law
            text_extra = [f"projective check: law {exc.law} fails even up to phase"]
    elif isinstance(obj, fb.CpComonoid):
        rep = fb.check_cp_comonoid(obj, tol=tol)
        required = list(fb.COMONOID_HYPOTHESES)
        report = {"kind": "cp_comonoid", "dim": obj.dim}
        full = rep.passes(tol)
        report["full_ssfa"] = full
        text_extra = ["structure: " + ("full †-SSFA" if full else
                                       "not a full †-SSFA (some unrequired law fails)")]
    else:
        defect = isometry_defect(obj)
        pure = cp.is_pure(obj)
        rep = fb.AxiomReport({"isometry": defect}, 0.0)
        required = ["isometry"]
        report = {"kind": "cp_map", "dims": [obj.in_dim, obj.out_dim], "is_pure": pure.is_pure}
        text_extra = [f"pure: {pure.is_pure} (rank-1 residual {_fmt(pure.residual)})"]

    failing = rep.failing(tol, required)
    report.update(
        {
            "verdict": "pass" if not failing else "fail",
            "failing": failing,
            "required": required,
            "tolerance": tol,
            "axioms": io.axiom_report_to_dict(rep),
        }
    )
    if report["kind"] != "cp_map":
        report["expected_snake_trace"] = obj.dim**2
    text += [f"kind: {report['kind']}", "laws:"] + _law_lines(rep.residuals, required, tol)
    if report["kind"] != "cp_map":
        text.append(f"snake_trace: {rep.snake_trace:.6g} (expected dim^2 = {obj.dim ** 2})")
    text += text_extra
    text.append(f"verdict: {report['verdict']}" + (f" ({', '.join(failing)})" if failing else ""))
    _emit_report(args, report, text, t0)
    return EXIT_OK if not failing else EXIT_REJECT


# -- canonicalize --------------------------------------------------------

_VERDICTS = [
    (HypothesesFailed, "hypotheses_failed"),
    (TheoremViolationDiagnostic, "hypotheses_failed"),
    (NotIsometry, "not_isometry"),
    (NumericalDegeneracy, "not_isometry"),
    (CounitNotPure, "counit_not_pure"),
    (NotFrobenius, "not_frobenius"),
    (NotProjectiveAlgebra, "not_frobenius"),
]


def cmd_canonicalize(args, tol: float, t0: float) -> int:
    obj, _ = io.read_structure(args.input)
    if not isinstance(obj, fb.CpComonoid):
        raise UsageError("canonicalize needs a cp_comonoid file")
    report: dict = {"kind": "canonicalization", "dim": obj.dim, "tolerance": tol}
    try:
        result = canonicalize_comonoid(obj, tol=tol)
    except CpmFrobError as exc:
        verdict = next((v for cls, v in _VERDICTS if isinstance(exc, cls)), None)
        if verdict is None:
            raise
        report.update({"verdict": verdict, "message": str(exc)})
        if isinstance(exc, HypothesesFailed):
            report["failing"] = exc.failing
            report["axioms"] = io.axiom_report_to_dict(exc.report)
        if isinstance(exc, NotIsometry):
            report["choi_distance"] = exc.choi_distance
        text = [f"input: {args.input}", f"verdict: {verdict}", str(exc)]
        if isinstance(exc, HypothesesFailed):
            text += _law_lines(exc.report.residuals, fb.COMONOID_HYPOTHESES, tol)
        _emit_report(args, report, text, t0)
        return EXIT_REJECT

    check = verify_canonical(result, obj)
    report.update(
        {
            "verdict": "canonical",
            "lambda_used": result.lambda_used,
            "residual_delta": result.residual_delta,
            "residual_epsilon": result.residual_epsilon,
            "associativity_holds": result.report.residuals["assoc"] <= tol,
            "input_axioms": io.axiom_report_to_dict(result.report),
            "algebra_axioms": io.axiom_report_to_dict(check),
        }
    )
    if args.out:
        io.write_text(args.out, io.emit(result.algebra, {"source": str(args.input)}))
    text = [
        f"input: {args.input}",
        "verdict: canonical",
        f"lambda_used: {result.lambda_used:.6f}",
        f"residual_delta: {_fmt(result.residual_delta)}",
        f"residual_epsilon: {_fmt(result.residual_epsilon)}",
        "input associativity: "
        + ("holds" if report["associativity_holds"] else "fails (not required)"),
        "recovered algebra laws:",
    ] + _law_lines(check.residuals, fb.LAWS, tol)
    _emit_report(args, report, text, t0)
    return EXIT_OK


# -- generate ------------------------------------------------------------


def _parse_int(s: str, what: str) -> int:
    try:
        n = int(s)
    except ValueError:
        raise UsageError(f"{what}: {s!r} is not an integer") from None
    if n < 1:
        raise UsageError(f"{what} must be >= 1")
    return n


def _algebra_from_params(kind: str, params: list[str]) -> fb.FrobeniusAlgebra:
    if kind in ("spider", "matrix", "cyclic"):
        if len(params) != 1:
            raise UsageError(f"generate {kind} takes one integer parameter")
        return rg.generator_instance(kind, _parse_int(params[0], kind))
    if kind == "direct_sum":
        if len(params) < 2:
            raise UsageError("generate direct_sum takes at least two family:n terms")
        parts = []
        for p in params:
            fam, _, n = p.partition(":")
            if fam not in rg.GENERATOR_FAMILIES or not n:
                raise UsageError(f"bad direct_sum term {p!r} (expected spider:N, matrix:N or cyclic:N)")
            parts.append(rg.generator_instance(fam, _parse_int(n, p)))
        out = parts[0]
        for p in parts[1:]:
            out = fb.direct_sum(out, p)
        return out
    raise UsageError(f"unknown kind {kind!r}")


def cmd_generate(args, tol: float, t0: float) -> int:
    rng = rg.rng_from(args.seed)
    meta = {"generator": " ".join([args.kind] + args.params), "seed": str(args.seed)}
    if args.kind == "isometry":
        if len(args.params) != 3:
            raise UsageError("generate isometry takes K IN_DIM OUT_DIM")
        k, din, dout = (_parse_int(p, "isometry") for p in args.params)
        if k * din > dout:
            raise UsageError("isometry needs K*IN_DIM <= OUT_DIM")
        phi, _, _ = rg.isometric_combination(rng, k, din, dout)
        obj = phi
    elif args.kind == "depolarizing":
        if len(args.params) not in (1, 2):
            raise UsageError("generate depolarizing takes P [D]")
        try:
            p = float(args.params[0])
        except ValueError:
            raise UsageError("depolarizing probability must be a number") from None
        if not 0.0 <= p <= 1.0:
            raise UsageError("depolarizing probability must lie in [0, 1]")
        d = _parse_int(args.params[1], "depolarizing") if len(args.params) == 2 else 2
        obj = rg.depolarizing(p, d)
    elif args.kind == "channel":
        if len(args.params) != 3:
            raise UsageError("generate channel takes IN_DIM OUT_DIM N_KRAUS")
        din, dout, nk = (_parse_int(p, "channel") for p in args.params)
        obj = rg.random_channel(rng, din, dout, nk)
    else:
        a = _algebra_from_params(args.kind, args.params)
        if args.perturb_phases is not None:
            delta, eps = fb.perturb_phases(a, args.perturb_phases)
            a = fb.FrobeniusAlgebra(a.dim, delta, eps)
            meta["perturb_phases"] = repr(args.perturb_phases)
        if args.mix is not None and not args.double:
            raise UsageError("--mix needs --double")
        obj = a
        if args.double:
            obj = fb.double_algebra(a)
            if args.mix is not None:
                if not 0.0 <= args.mix <= 1.0:
                    raise UsageError("--mix weight must lie in [0, 1]")
                u = rg.random_unitary(rng, a.dim)
                other = fb.double_algebra(fb.change_basis(a, u))
                obj = fb.mix_comonoids([obj, other], [args.mix, 1.0 - args.mix])
                meta["mix"] = repr(args.mix)
    text = io.emit(obj, meta)
    if args.out:
        io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- decompose -----------------------------------------------------------


def cmd_decompose(args, tol: float, t0: float) -> int:
    obj, _ = io.read_structure(args.input)
    if not isinstance(obj, cp.CpMap):
        raise UsageError("decompose needs a cp_map file")
    try:
        dec = decompose_cp_isometry(obj, tol=tol)
    except NotIsometry as exc:
        report = {"kind": "decomposition", "verdict": "not_isometry", "tolerance": tol,
                  "choi_distance": exc.choi_distance, "message": str(exc)}
        text = [f"input: {args.input}", "verdict: not_isometry",
                f"choi distance of Phi^dag Phi to identity: {_fmt(exc.choi_distance)}"]
        _emit_report(args, report, text, t0)
        return EXIT_REJECT
    except NumericalDegeneracy as exc:
        report = {"kind": "decomposition", "verdict": "not_isometry", "message": str(exc)}
        _emit_report(args, report, [f"verdict: not_isometry ({exc})"], t0)
        return EXIT_REJECT
    orth = dec.orthogonality_residuals()
    recon = cp.choi_distance(dec.reconstruct(), obj) if dec.n else 0.0
    report = {
        "kind": "decomposition",
        "verdict": "isometry",
        "tolerance": tol,
        "decomposition": io.decomposition_to_dict(dec),
        "sum_q_squared": float(np.sum(np.square(dec.coeffs))),
        "orthogonality_residuals": orth.tolist(),
        "reconstruction_residual": recon,
    }
    text = [
        f"input: {args.input}",
        f"n: {dec.n}",
        "coefficients q_i: " + ", ".join(f"{q:.10g}" for q in dec.coeffs),
        f"sum q_i^2: {report['sum_q_squared']:.12g}",
        "orthogonality residuals |V_j^dag V_i - delta_ij 1|:",
    ] + ["  " + " ".join(_fmt(x) for x in row) for row in orth] + [
        f"reconstruction residual: {_fmt(recon)}"
    ]
    _emit_report(args, report, text, t0)
    return EXIT_OK


# -- entry point ---------------------------------------------------------


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report")
    fmt.add_argument("--text", action="store_true", help="text report (default)")
    p.add_argument("--no-timing", action="store_true", help="omit timing (byte-stable output)")
    p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-8 or $CPMFROB_TOL)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpmfrob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the laws of a structure file")
    p.add_argument("input")
    _add_output_flags(p)
    p.add_argument("--report", help="write the report here instead of stdout")

    p = sub.add_parser("canonicalize", help="recover the fHilb algebra of a CP comonoid")
    p.add_argument("input")
    _add_output_flags(p)
    p.add_argument("--out", help="write the recovered fhilb_algebra file here")
    p.add_argument("--report", help="write the report here instead of stdout")

    p = sub.add_parser("generate", help="write a generated structure file")
    p.add_argument(
        "kind",
        choices=["spider", "matrix", "cyclic", "direct_sum", "isometry", "depolarizing", "channel"],
    )
    p.add_argument("params", nargs="*")
    p.add_argument("--double", action="store_true", help="emit the doubled cp_comonoid")
    p.add_argument("--perturb-phases", type=float, default=None, metavar="THETA",
                   help="scale the counit by exp(i*THETA)")
    p.add_argument("--mix", type=float, nargs="?", const=0.5, default=None, metavar="WEIGHT",
                   help="mix with a randomly rotated copy (needs --double)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=None, help=argparse.SUPPRESS)

    p = sub.add_parser("decompose", help="decompose a CP isometry into pure isometries")
    p.add_argument("input")
    _add_output_flags(p)
    p.add_argument("--report", help="write the report here instead of stdout")
    return parser


COMMANDS = {
    "check": cmd_check,
    "canonicalize": cmd_canonicalize,
    "generate": cmd_generate,
    "decompose": cmd_decompose,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        tol = args.tol if args.tol is not None else default_tol()
        if not tol > 0:
            raise UsageError("--tol must be positive")
        return COMMANDS[args.command](args, tol, t0)
    except (UsageError, ParseError) as exc:
        print(f"cpmfrob {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
