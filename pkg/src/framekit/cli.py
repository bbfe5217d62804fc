"""``framekit {check|generate|verify}``.

Exit codes: 0 pass, 1 verdict false or property failure, 2 usage or parse
error.  Data goes to stdout, diagnostics to stderr; nothing is written to
stdout when the exit code is 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Callable

from .errors import DimensionMismatch, FramekitError, InvalidSpec, PreconditionError, UnknownProperty
from .examples import InstanceKind, InstanceSpec
from .frame_core import frame_bounds, spectrum
from .hilbert import DEFAULT_TOL, ToleranceConfig, is_coisometry
from .instance_io import Instance, InstanceFileError, dumps, from_spec, loads
from .kframe import dual_solution_dimension, is_k_minimal, is_k_orthonormal_basis, is_kframe, is_zero_map
from .propcheck import SuiteConfig, registered_names, run_suite
from .superframe import is_super_klframe, is_super_minimal, is_super_onb, onb_dual_is_onb

__all__ = ["main", "build_parser"]

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECKS = ("bessel", "frame", "kframe", "kminimal", "konb", "super", "superminimal", "superonb")


class UsageError(Exception):
    pass


def _env_seed() -> int:
    raw = os.environ.get("FRAMEKIT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"FRAMEKIT_SEED must be an integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"FRAMEKIT_SEED must be a 64-bit unsigned integer, got {seed}")
    return seed


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and value != float("inf")):
        raise argparse.ArgumentTypeError(f"must be a positive finite number: {text!r}")
    return value


def _tolerance(args: argparse.Namespace, base: ToleranceConfig) -> ToleranceConfig:
    overrides = {name: getattr(args, f"tol_{name.split('_')[0]}") for name in ("rank_rel", "psd_rel", "residual_rel")}
    return replace(base, **{k: v for k, v in overrides.items() if v is not None})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framekit", description="Finite-dimensional K-frame checks.")
    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol-rank", type=_positive_float, help="relative rank cutoff")
    tol.add_argument("--tol-psd", type=_positive_float, help="relative semidefinite slack")
    tol.add_argument("--tol-residual", type=_positive_float, help="relative residual threshold")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[tol], help="run a check on an instance file")
    check.add_argument("what", choices=CHECKS)
    check.add_argument("file", help="instance file, or - for stdin")
    check.add_argument("--frame", default="F")
    check.add_argument("--op", default="K")
    check.add_argument("--pair", default="P")
    check.add_argument("--left-op", default="K")
    check.add_argument("--right-op", default="L")

    gen = sub.add_parser("generate", help="emit an instance file")
    gen.add_argument("kind", choices=[k.value for k in InstanceKind])
    gen.add_argument("--d", type=int, help="dimension (shift, projection-pair, random kinds)")
    gen.add_argument("--m", type=int, help="half-dimension m (interleaved, nonminimal)")
    gen.add_argument("--M", type=int, dest="count", help="number of vectors (random kinds)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--k-rank", type=int, help="rank of K (random-kframe)")

    ver = sub.add_parser("verify", parents=[tol], help="run the property suite")
    ver.add_argument("--suite", action="append", help="property name (repeatable, or comma separated)")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--trials", type=int)
    ver.add_argument("--dims-max", type=int, default=6)
    ver.add_argument("--pretty", action="store_true", help="print a table instead of JSON")
    return parser


# ---------------------------------------------------------------------------
# check

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _check_bessel(inst: Instance, args, tol) -> dict:
    f = inst.frame(args.frame)
    # every finite sequence is Bessel; the optimal bound is the top of the spectrum
    return {"verdict": True, "upper": float(spectrum(f)[-1])}


def _check_frame(inst: Instance, args, tol) -> dict:
    cert = frame_bounds(inst.frame(args.frame), tol)
    return {"verdict": cert.is_frame, **cert.to_dict()}


def _check_kframe(inst: Instance, args, tol) -> dict:
    return is_kframe(inst.frame(args.frame), inst.operator(args.op), tol).to_dict()


def _check_kminimal(inst: Instance, args, tol) -> dict:
    f, k = inst.frame(args.frame), inst.operator(args.op)
    cert = is_kframe(f, k, tol)
    out = {"kframe": cert.to_dict(), "dual_solution_dimension": dual_solution_dimension(f, tol)}
    out["verdict"] = bool(cert.verdict and is_k_minimal(f, k, tol))
    return out


def _check_konb(inst: Instance, args, tol) -> dict:
    return {"verdict": is_k_orthonormal_basis(inst.frame(args.frame), inst.operator(args.op), tol)}


def _super_args(inst: Instance, args):
    return inst.pair(args.pair), inst.operator(args.left_op), inst.operator(args.right_op)


def _check_super(inst: Instance, args, tol) -> dict:
    rep = is_super_klframe(*_super_args(inst, args), tol)
    out = rep.to_dict()
    failed = [n for n in rep.notes if n.startswith("range_condition_necessary")]
    out["witness"] = failed[-1] if failed else (rep.notes[0] if rep.notes else None)
    return out


def _check_superminimal(inst: Instance, args, tol) -> dict:
    p, k, l = _super_args(inst, args)
    rep = is_super_klframe(p, k, l, tol)
    minimal = is_super_minimal(p, tol)
    return {"verdict": rep.verdict and minimal, "klframe": rep.to_dict(), "minimal": minimal}


def _check_superonb(inst: Instance, args, tol) -> dict:
    p, k, l = _super_args(inst, args)
    onb = is_super_onb(p, k, l, tol)
    out: dict = {"verdict": onb}
    if onb and not (is_zero_map(k) or is_zero_map(l)):
        dual_onb = onb_dual_is_onb(p, k, l, tol, check=False)
        coiso = is_coisometry(k, tol) and is_coisometry(l, tol)
        out["dual"] = {"orthonormal_basis": dual_onb, "coisometries": coiso, "agree": dual_onb == coiso}
    return out


CHECK_FUNCS: dict[str, Callable[[Instance, argparse.Namespace, ToleranceConfig], dict]] = {
    "bessel": _check_bessel,
    "frame": _check_frame,
    "kframe": _check_kframe,
    "kminimal": _check_kminimal,
    "konb": _check_konb,
    "super": _check_super,
    "superminimal": _check_superminimal,
    "superonb": _check_superonb,
}


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n")


def cmd_check(args) -> int:
    inst = loads(_read(args.file))
    tol = _tolerance(args, inst.tolerance)
    try:
        report = CHECK_FUNCS[args.what](inst, args, tol)
    except InstanceFileError:
        raise
    except (DimensionMismatch, PreconditionError) as exc:
        raise UsageError(str(exc)) from None
    except FramekitError as exc:
        # a library-level inconsistency on valid input is a failed check, not a usage error
        print(f"framekit: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit({"check": args.what, "verdict": False, "error": f"{type(exc).__name__}: {exc}"})
        return EXIT_FAIL
    report["check"] = args.what
    report.setdefault("tolerance", tol.to_dict())
    _emit(report)
    return EXIT_PASS if report["verdict"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# generate

def _spec_from_args(args) -> InstanceSpec:
    kind = InstanceKind(args.kind)
    seed = _env_seed() if args.seed is None else args.seed
    if kind in (InstanceKind.INTERLEAVED, InstanceKind.NONMINIMAL):
        if args.d is not None or args.count is not None:
            raise UsageError(f"{kind.value} takes --m only")
        m = 2 if args.m is None else args.m
        if m < 1:
            raise UsageError(f"--m must be >= 1, got {m}")
        count = 2 * m if kind is InstanceKind.INTERLEAVED else m
        return InstanceSpec(kind, (2 * m, 2 * m), count, seed)
    if args.m is not None:
        raise UsageError(f"{kind.value} does not take --m")
    default_d = {InstanceKind.SHIFT: 3, InstanceKind.PROJECTION_PAIR: 8}.get(kind, 4)
    d = default_d if args.d is None else args.d
    if kind in (InstanceKind.SHIFT, InstanceKind.PROJECTION_PAIR):
        if args.count is not None and args.count != d:
            raise UsageError(f"{kind.value} has M = d")
        return InstanceSpec(kind, (d,), d, seed)
    count = d + 2 if args.count is None else args.count
    if args.k_rank is not None and kind is not InstanceKind.RANDOM_KFRAME:
        raise UsageError("--k-rank applies to random-kframe only")
    return InstanceSpec(kind, (d,), count, seed, args.k_rank)


def cmd_generate(args) -> int:
    try:
        spec = _spec_from_args(args)
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(dumps(from_spec(spec)))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    names = None
    if args.suite:
        names = tuple(n.strip() for chunk in args.suite for n in chunk.split(",") if n.strip())
        unknown = [n for n in names if n not in registered_names()]
        if unknown:
            raise UsageError(f"unknown property: {', '.join(unknown)}")
    seed = _env_seed() if args.seed is None else args.seed
    if not 0 <= seed < 2**64:
        raise UsageError(f"--seed must be a 64-bit unsigned integer, got {seed}")
    if args.trials is not None and args.trials < 1:
        raise UsageError(f"--trials must be positive, got {args.trials}")
    if args.dims_max < 1:
        raise UsageError(f"--dims-max must be positive, got {args.dims_max}")
    config = SuiteConfig(names, seed, args.trials, args.dims_max, _tolerance(args, DEFAULT_TOL))
    report = run_suite(config)
    sys.stdout.write(report.pretty() if args.pretty else report.to_json())
    for f in report.failures:
        print(f"framekit: {f.property} failed (seed={f.seed}, index={f.index})", file=sys.stderr)
    return EXIT_PASS if report.ok else EXIT_FAIL


COMMANDS = {"check": cmd_check, "generate": cmd_generate, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InstanceFileError, UnknownProperty) as exc:
        print(f"framekit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
