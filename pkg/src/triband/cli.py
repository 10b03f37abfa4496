"""Command-line front end.

Complex parameters are written ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` is
accepted for ``i``). Computed values are printed with nine significant
digits in the same notation.

Exit codes: 0 success, 2 invalid parameters, 3 resolvent undefined,
4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import __version__
from .core import DegenerateOperatorError, ResolventUndefinedError, SingularTruncationError, make_operator
from .eigen import finite_section_eigenvalues, pseudospectrum_grid
from .resolvent import apply_resolvent, dense_solve_oracle
from .spaces import SpaceSpec
from .spectrum import classify_lambda, fine_spectrum_report
from .verify import fmt, run_acceptance

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOLVENT = 3
EXIT_VERIFY = 4

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^(?P<re>[+-]?{_REAL})?"
    rf"(?:(?P<sign>[+-])?(?P<im>{_REAL})?(?P<unit>[ij]))?$")


class ComplexLiteral:
    """A parsed complex literal that remembers its spelling."""

    def __init__(self, text: str):
        m = _COMPLEX.match(text.strip())
        if not text.strip() or m is None or (m["re"] is None and m["unit"] is None):
            raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
        re_part, sign, im_part = m["re"], m["sign"], m["im"]
        if m["unit"] and sign is None:
            if im_part is not None:
                raise argparse.ArgumentTypeError(f"missing sign before imaginary part: {text!r}")
            # pure imaginary such as "2i" or "-0.5i"
            re_part, im_part = None, re_part
        real = float(re_part) if re_part is not None else 0.0
        imag = 0.0
        if m["unit"]:
            imag = float(im_part) if im_part is not None else 1.0
            if sign == "-":
                imag = -imag
        self.text = text
        self.value = complex(real, imag) if imag else real

    def echo(self) -> dict:
        z = complex(self.value)
        return {"literal": self.text, "re": z.real, "im": z.imag}


def _y_spec(text: str):
    """``eK`` (K-th unit vector, 1-based), ``0``, or a comma list of literals."""
    text = text.strip()
    m = re.fullmatch(r"e(\d+)", text)
    if m:
        k = int(m[1])
        if k < 1:
            raise argparse.ArgumentTypeError("unit vectors are numbered from e1")
        y = np.zeros(k)
        y[-1] = 1.0
        return y
    values = [ComplexLiteral(part).value for part in text.split(",")]
    return np.array(values, dtype=complex if any(isinstance(v, complex) for v in values) else float)


def _region(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("region is re_min,re_max,im_min,im_max")
    return tuple(float(p) for p in parts)


def _resolution(text: str):
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return tuple(parts)
    raise argparse.ArgumentTypeError("resolution is N or N_re,N_im")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


_VALUE_OPTIONS = {"--r", "--s", "--lambda", "--p", "--region", "--y", "--tol"}


def _glue_negative_values(argv):
    """Attach values such as ``-3,3,-1,1`` or ``-1+2i`` to their option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=ComplexLiteral, default=ComplexLiteral("0"),
                        help="diagonal entry (complex literal, default 0)")
    common.add_argument("--s", type=ComplexLiteral, default=ComplexLiteral("1"),
                        help="off-diagonal entry (complex literal, default 1)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="triband", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum and fine spectrum")
    p.add_argument("--space", choices=("lp", "bvp"), default="lp")
    p.add_argument("--p", type=float, default=2.0)

    p = sub.add_parser("classify", parents=[common], help="classify one point lambda")
    p.add_argument("--lambda", dest="lam", type=ComplexLiteral, required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("resolve", parents=[common], help="apply the resolvent via its kernel")
    p.add_argument("--lambda", dest="lam", type=ComplexLiteral, required=True)
    p.add_argument("--y", type=_y_spec, required=True,
                   help="right-hand side: eK, or comma-separated literals y_1,y_2,...")
    p.add_argument("--K", type=_positive_int, default=10, help="number of output rows")
    p.add_argument("--oracle", type=_positive_int, metavar="N",
                   help="add a dense-solve column from the order-N section")
    p.add_argument("--force", action="store_true",
                   help="evaluate inside the near-segment margin")

    p = sub.add_parser("eigs", parents=[common], help="finite-section eigenvalues")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--method", choices=("auto", "sturm", "closed_form"), default="auto")

    p = sub.add_parser("pseudospec", parents=[common], help="resolvent-norm grid of a section")
    p.add_argument("--region", type=_region, required=True)
    p.add_argument("--res", type=_resolution, default=100)
    p.add_argument("--n", type=_positive_int, default=500)
    p.add_argument("--method", choices=("normal", "svd"), default="normal")

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--preset", default="paper")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o")
    return parser


def _header(args, **extra) -> dict:
    params = {"r": args.r.echo(), "s": args.s.echo()}
    params.update(extra)
    return {"schema": SCHEMA_VERSION, "command": args.command, "params": params}


def _segment(seg) -> dict:
    return {"low": fmt(seg.endpoint_low), "high": fmt(seg.endpoint_high)}


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_spectrum(args):
    op = make_operator(args.r.value, args.s.value)
    space = SpaceSpec(args.space, args.p)
    rep = fine_spectrum_report(op, space)
    if (args.format or "json") == "csv":
        rows = [("spectrum", *_segment(rep.spectrum).values()),
                ("continuous", *_segment(rep.continuous).values()),
                ("point", "", ""), ("residual", "", ""), ("adjoint_point", "", "")]
        return _csv(("part", "low", "high"), rows)
    doc = _header(args, space=args.space, p=args.p)
    doc["result"] = {
        "space": space.label,
        "conjugate_exponent": space.q,
        "spectrum": _segment(rep.spectrum),
        "continuous": _segment(rep.continuous),
        "point": [],
        "residual": [],
        "adjoint_point": [],
        "resolvent_set": rep.resolvent_set,
    }
    return _json(doc)


def cmd_classify(args):
    op = make_operator(args.r.value, args.s.value)
    cls = classify_lambda(op, args.lam.value, args.tol)
    roots = cls.roots
    result = {
        "lambda": fmt(args.lam.value),
        "region": cls.region.value,
        "ratio_q": fmt(roots.ratio_q),
        "alpha1": fmt(roots.alpha1),
        "alpha2": fmt(roots.alpha2),
        "abs_alpha1": fmt(abs(roots.alpha1)),
        "double_root": roots.is_double_root,
        "root_gap": fmt(cls.root_gap),
        "distance": fmt(cls.distance),
    }
    if (args.format or "json") == "csv":
        return _csv(result.keys(), [[str(v).lower() if isinstance(v, bool) else v for v in result.values()]])
    doc = _header(args, **{"lambda": args.lam.echo(), "tol": args.tol})
    doc["result"] = result
    return _json(doc)


def cmd_resolve(args):
    op = make_operator(args.r.value, args.s.value)
    lam = args.lam.value
    x = apply_resolvent(op, lam, args.y, args.K, force=args.force)
    oracle = None
    if args.oracle:
        oracle = dense_solve_oracle(op, lam, args.y, max(args.oracle, len(args.y)))[: args.K]
    rows = []
    for k in range(args.K):
        if oracle is not None and k < len(oracle):
            rows.append((k + 1, fmt(x[k]), fmt(oracle[k]), fmt(abs(x[k] - oracle[k]))))
        else:
            rows.append((k + 1, fmt(x[k]), "", ""))
    if (args.format or "csv") == "csv":
        return _csv(("k", "x_k", "oracle_k", "diff"), rows)
    doc = _header(args, **{"lambda": args.lam.echo(), "K": args.K, "oracle": args.oracle})
    doc["result"] = {"rows": [dict(zip(("k", "x", "oracle", "diff"), row)) for row in rows]}
    return _json(doc)


def cmd_eigs(args):
    op = make_operator(args.r.value, args.s.value)
    vals = finite_section_eigenvalues(op, args.n, method=args.method)
    # eigensolver noise below N ulp of the operator scale is printed as 0
    floor = args.n * np.finfo(float).eps * (abs(op.r) + 2 * abs(op.s))
    cleaned = [0.0 if abs(v) <= floor else v for v in vals]
    if (args.format or "csv") == "csv":
        return _csv(("j", "eigenvalue"), [(j + 1, fmt(v)) for j, v in enumerate(cleaned)])
    doc = _header(args, n=args.n, method=args.method)
    doc["result"] = {"eigenvalues": [fmt(v) for v in cleaned]}
    return _json(doc)


def cmd_pseudospec(args):
    op = make_operator(args.r.value, args.s.value)
    grid = pseudospectrum_grid(op, args.region, args.res, args.n, method=args.method)
    rows = [(fmt(x), fmt(y), fmt(v)) for x, y, v in grid.rows()]
    if (args.format or "csv") == "csv":
        return _csv(("lambda_re", "lambda_im", "value"), rows)
    doc = _header(args, region=list(args.region), n=args.n, method=args.method)
    doc["result"] = {"grid": [dict(zip(("lambda_re", "lambda_im", "value"), row)) for row in rows]}
    return _json(doc)


def cmd_verify(args):
    results = run_acceptance(args.preset)
    if args.format == "json":
        doc = {"schema": SCHEMA_VERSION, "command": "verify", "params": {"preset": args.preset},
               "result": {"criteria": [
                   {"number": c.number, "title": c.title, "passed": c.passed,
                    "measured": c.measured, "threshold": c.threshold} for c in results]}}
        text = _json(doc)
    else:
        passed = sum(c.passed for c in results)
        text = "".join(c.line() + "\n" for c in results)
        text += f"{passed}/{len(results)} criteria passed\n"
    return text, all(c.passed for c in results)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "resolve": cmd_resolve,
    "eigs": cmd_eigs,
    "pseudospec": cmd_pseudospec,
    "verify": cmd_verify,
}


def _emit(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(argv))
    status = EXIT_OK
    try:
        out = COMMANDS[args.command](args)
        if isinstance(out, tuple):
            out, ok = out
            status = EXIT_OK if ok else EXIT_VERIFY
    except ResolventUndefinedError as exc:
        print(f"triband: resolvent undefined: {exc}", file=sys.stderr)
        return EXIT_RESOLVENT
    except (DegenerateOperatorError, SingularTruncationError, ValueError) as exc:
        print(f"triband: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(out, args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
