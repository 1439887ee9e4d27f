"""Command-line interface: ``oscalg <command> <family> [options]``.

Exit codes: 0 success, 2 input error, 3 verification residual above tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .classify import classify
from .closure import ClosureConfig, bracket_decomposition, lie_closure
from .core import DEFAULT_PROBE, family, format_scalar, parse_rational, system_from_json
from .errors import InsufficientMoments, MalformedSpec, OscAlgError
from .moments import MomentTable, moments_from_recurrence, moments_to_recurrence, orthonormality_gram
from .operators import OperatorKind, build_operator, dump_csv, verify_commutation

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3
GRAM_ORDER = 10


class _InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def resolve_family(args):
    spec = args.family
    if spec.endswith(".json") or Path(spec).is_file():
        return system_from_json(_load_json(spec), probe=args.probe)
    params = []
    if spec == "laguerre":
        params = [args.alpha if args.alpha is not None else "0"]
    elif spec == "jacobi":
        params = [args.alpha if args.alpha is not None else "0",
                  args.beta if args.beta is not None else "0"]
    elif spec == "beckers":
        params = [args.lam if args.lam is not None else "0"]
    return family(spec, *[parse_rational(p) for p in params], probe=args.probe)


def _config(args) -> ClosureConfig:
    return ClosureConfig(truncation=args.truncation, cap=args.cap, tol=args.tol,
                         max_depth=args.max_depth)


def cmd_classify(args):
    return classify(resolve_family(args), probe=args.probe).to_json(), EXIT_OK


def cmd_closure(args):
    return lie_closure(resolve_family(args), _config(args)).to_json(), EXIT_OK


def cmd_verify(args):
    report = verify_commutation(resolve_family(args), M=args.truncation, tol=args.tol)
    return report.to_json(), EXIT_OK if report.passed else EXIT_VERIFY


def cmd_rec2moments(args):
    if args.K < 2:
        raise InsufficientMoments(f"-K must be at least 2, got {args.K}")
    return moments_from_recurrence(resolve_family(args), args.K).to_json(), EXIT_OK


def cmd_moments2rec(args):
    mom = MomentTable.from_json(_load_json(args.moments))
    N = args.N if args.N is not None else mom.K // 2
    if N < 1:
        raise InsufficientMoments("need at least mu_0..mu_2")
    a, b2 = moments_to_recurrence(mom, N)
    return {"a": [format_scalar(v) for v in a], "b2": [format_scalar(v) for v in b2]}, EXIT_OK


def cmd_dump_op(args):
    try:
        kind = OperatorKind[args.op]
    except KeyError:
        raise MalformedSpec(f"unknown operator {args.op!r}; expected one of "
                            f"{', '.join(k.name for k in OperatorKind)}") from None
    op = build_operator(kind, resolve_family(args), args.truncation)
    if args.format == "csv":
        return dump_csv(op), EXIT_OK
    rows = [[r, c, float(op.entries[r, c])] for r, c in zip(*map(list, op.entries.nonzero()))]
    return {"op": kind.name, "dim": op.dim, "bandwidth": op.bandwidth,
            "entries": [[int(r), int(c), v] for r, c, v in rows]}, EXIT_OK


def build_report(sys_, config: ClosureConfig, probe: int = DEFAULT_PROBE) -> dict:
    verdict = classify(sys_, probe=probe)
    closure = lie_closure(sys_, config)
    residuals = verify_commutation(sys_, M=min(config.truncation, 64), tol=1e-10)
    gram = orthonormality_gram(sys_, moments_from_recurrence(sys_, 2 * GRAM_ORDER), GRAM_ORDER)
    predicted_finite = verdict.is_finite
    agreement = predicted_finite == closure.is_finite and (
        not predicted_finite or closure.dim == 4)
    doc = {
        "family": sys_.label,
        "classification": verdict.to_json(),
        "closure": closure.to_json(),
        "commutator_residuals": residuals.to_json(),
        "gram_deviation": gram,
    }
    if closure.is_finite:
        doc["brackets"] = {
            f"[{x},{y}]": bracket_decomposition(closure, x, y)
            for i, x in enumerate(closure.basis_labels)
            for y in closure.basis_labels[i + 1:]
        }
    doc["summary"] = {
        "exact_verdict": verdict.verdict.value,
        "closure_verdict": closure.status.value,
        "dim": closure.dim if closure.is_finite else f"≥{config.cap}",
        "agreement": agreement,
    }
    return doc


def cmd_report(args):
    return build_report(resolve_family(args), _config(args), args.probe), EXIT_OK


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list) and any(isinstance(v, (dict, list)) for v in doc):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, doc


def render(doc, fmt: str) -> str:
    if isinstance(doc, str):
        return doc
    if fmt == "json":
        return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"
    if fmt == "text":
        return "".join(f"{k}: {json.dumps(v, ensure_ascii=False)}\n" for k, v in _flatten(doc))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for k, v in _flatten(doc):
        writer.writerow([k, json.dumps(v, ensure_ascii=False)])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscalg",
        description="Oscillator-like algebras from orthogonal-polynomial recurrences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--probe", type=int, default=DEFAULT_PROBE,
                        help="probe range for validation and classification (default 64)")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("family", help="laguerre | jacobi | hermite_prob | beckers | path/to/custom.json")
    fam.add_argument("--alpha", help="Laguerre/Jacobi alpha, rational 'p/q'")
    fam.add_argument("--beta", help="Jacobi beta, rational 'p/q'")
    fam.add_argument("--lambda", dest="lam", help="Beckers shift lambda, rational 'p/q'")

    closure = argparse.ArgumentParser(add_help=False)
    closure.add_argument("--truncation", type=int, default=128)
    closure.add_argument("--cap", type=int, default=12)
    closure.add_argument("--tol", type=float, default=1e-8)
    closure.add_argument("--max-depth", type=int, default=8)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common, fam], help="exact finite/infinite verdict")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("closure", parents=[common, fam, closure], help="empirical Lie closure")
    p.set_defaults(func=cmd_closure)
    p = sub.add_parser("verify", parents=[common, fam, closure],
                       help="commutation identities on the truncated space (exit 3 on failure)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("rec2moments", parents=[common, fam], help="moments mu_0..mu_K")
    p.add_argument("-K", type=int, required=True)
    p.set_defaults(func=cmd_rec2moments)
    p = sub.add_parser("moments2rec", parents=[common], help="recurrence from a moment file")
    p.add_argument("moments", help='JSON file {"moments": ["p/q", ...]} or - for stdin')
    p.add_argument("-N", type=int, default=None, help="number of coefficient pairs (default K//2)")
    p.set_defaults(func=cmd_moments2rec)
    p = sub.add_parser("dump-op", parents=[common, fam, closure], help="operator matrix entries")
    p.add_argument("--op", required=True, help="A, Adag, As, Asdag, Nop, Identity, D, BofN, ...")
    p.set_defaults(func=cmd_dump_op)
    p = sub.add_parser("report", parents=[common, fam, closure], help="combined summary document")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except (OscAlgError, _InputError) as exc:
        print(f"oscalg: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
