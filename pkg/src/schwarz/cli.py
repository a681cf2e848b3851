"""Command-line interface: ``schwarz <command> [options]``.

Exit codes: 0 ok, 1 operation error, 2 usage error.  ``--json`` prints a
single JSON object carrying ``schema_version``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .blaschke import factor_unimodular, is_circle_preserving, ps_bound_check, unimodular_locus
from .curve import RealCurve, SchwarzForm, complexify, preset_curve, realify, singular_points
from .errors import SchwarzError
from .exact import ExactComplex
from .numeric import DEFAULT_PRECISION, INFINITY, precision
from .parse import ParseError
from .puiseux import DEFAULT_ORDER, PuiseuxBranch, branches_at_infinity, classify, condition_a_holds
from .ratmap import image_curve, maps_into, parse_map
from .verify import DEFAULT_SAMPLES, DEFAULT_TOL, MapExpr, verify_involution, verify_reflection_identity

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: str  # "ok" | "error"
    payload: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    code: str | None = None
    message: str | None = None
    text: str = ""
    command: str | None = None

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return 0
        return 2 if self.code == "usage" else 1

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "command": self.command, "status": self.status}
        if self.status == "ok":
            out["result"] = self.payload
        else:
            out["error"] = {"code": self.code, "message": self.message}
            if self.payload:
                out["result"] = self.payload
        out["diagnostics"] = self.diagnostics
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# flag parsing


def parse_complex(text: str) -> ExactComplex:
    """``"re,im"`` or ``"re"`` with decimal or rational parts."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        re = Fraction(parts[0].strip())
        im = Fraction(parts[1].strip()) if len(parts) == 2 else Fraction(0)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}") from None
    return ExactComplex(re, im)


def _param(text: str):
    return parse_complex(text) if "," in text else Fraction(text)


def _c(z) -> list:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# formatting


def _fmt_coeff(c) -> str:
    re, im = float(c.real), float(c.imag)
    if abs(im) < 1e-15 * max(1.0, abs(re)):
        return f"{re:.12g}"
    if abs(re) < 1e-15 * max(1.0, abs(im)):
        return f"{im:.12g}i"
    return f"({re:.12g}{im:+.12g}i)"


def format_branch(b: PuiseuxBranch) -> str:
    if not b.terms:
        return "0"
    parts = []
    for e, c in b.terms:
        coeff = _fmt_coeff(c)
        if e == 0:
            parts.append(coeff)
            continue
        power = "z" if e == 1 else (f"z^{e}" if e.denominator == 1 else f"z^({e})")
        parts.append(power if coeff == "1" else f"{coeff}*{power}")
    text = " + ".join(parts).replace("+ -", "- ")
    return text if b.exact else text + " + ..."


def _limit(lim):
    return "inf" if lim is INFINITY else _c(lim)


# ---------------------------------------------------------------------------
# commands


def _curve(text) -> RealCurve:
    return RealCurve.parse(text)


def cmd_complexify(a):
    S = complexify(_curve(a.curve))
    return {"Q": str(S.Q), "n": S.n}, str(S.Q)


def cmd_realify(a):
    C = realify(SchwarzForm.parse(a.qform))
    return C.to_json(), str(C.P)


def _branches(a):
    return branches_at_infinity(complexify(_curve(a.curve)), a.order, a.prec)


def cmd_branches(a):
    bs = _branches(a)
    lines = [f"m={b.m}: w = {format_branch(b)}" for b in bs]
    return {"branches": [b.to_json() for b in bs]}, "\n".join(lines)


def cmd_condition_a(a):
    S = complexify(_curve(a.curve))
    holds, b = condition_a_holds(S, a.order, a.prec)
    bs = branches_at_infinity(S, a.order, a.prec)
    payload = {"holds": holds, "witness": b.to_json() if b else None,
               "branches": [x.to_json() for x in bs]}
    if holds:
        text = f"true, limit {_fmt_coeff(classify(b).limit)} on branch w = {format_branch(b)}"
    else:
        desc = "single branch" if len(bs) == 1 else f"{len(bs)} branches"
        text = f"false, {desc} " + "; ".join(f"w = {format_branch(x)}" for x in bs)
    return payload, text


def cmd_classify(a):
    bs = _branches(a)
    out, lines = [], []
    for b in bs:
        cls = classify(b)
        out.append({"class": cls.tag.value, "limit": _limit(cls.limit), "m": b.m})
        lim = "inf" if cls.limit is INFINITY else _fmt_coeff(cls.limit)
        lines.append(f"{cls.tag.value} (limit {lim}): w = {format_branch(b)}")
    return {"branches": out}, "\n".join(lines)


def cmd_singular(a):
    pts = singular_points(_curve(a.curve), a.prec)
    payload = {"points": [{"x": _c(p.x), "y": _c(p.y), "real": p.real} for p in pts]}
    lines = [f"({_fmt_coeff(p.x)}, {_fmt_coeff(p.y)}){'' if p.real else ' complex'}" for p in pts]
    return payload, "\n".join(lines) or "no singular points"


def cmd_preset(a):
    C = preset_curve(a.kind, *[_param(p) for p in a.params])
    return C.to_json(), str(C.P)


def cmd_image(a):
    C = image_curve(parse_map(a.map), _curve(a.curve))
    return C.to_json(), str(C.P)


def cmd_maps_into(a):
    r = maps_into(parse_map(a.map), _curve(a.source), _curve(a.target), a.prec)
    return {"result": r}, str(r).lower()


def cmd_blaschke_check(a):
    r = is_circle_preserving(parse_map(a.map))
    return {"result": r}, str(r).lower()


def cmd_blaschke_factor(a):
    fac = factor_unimodular(parse_map(a.map), a.prec)
    j = fac.to_json()
    lines = [f"lambda = {_fmt_coeff(fac.unimodular_constant)}"]
    lines += [f"zero {_fmt_coeff(z)} (mult {k})" for z, k in fac.zeros]
    lines += [f"inverse factor {_fmt_coeff(z)} (mult {k})" for z, k in fac.inverse_factors]
    lines.append(f"residual {fac.residual:.3g}")
    return j, "\n".join(lines)


def cmd_unimodular_locus(a):
    C = unimodular_locus(parse_map(a.map))
    return C.to_json(), str(C.P)


def cmd_ps_bound(a):
    r = ps_bound_check(parse_map(a.p1), parse_map(a.p2), a.prec)
    if r.count is None:
        text = f"{r.label.value} (bound {r.bound})"
    else:
        text = f"count {r.count} <= bound {r.bound}" if r.within_bound else f"count {r.count} > bound {r.bound}"
    return r.to_json(), text


def _report_text(r):
    verdict = "pass" if r.passed else "fail"
    return f"{verdict}: max residual {r.max_residual:.3g} over {r.samples} samples (tol {r.tolerance:g})"


def cmd_verify_identity(a):
    r = verify_reflection_identity(MapExpr.parse(a.map), _curve(a.source), _curve(a.target), a.base,
                                   a.samples, a.tol, a.prec)
    return r.to_json(a.dump_samples), _report_text(r), r.passed


def cmd_verify_involution(a):
    r = verify_involution(_curve(a.curve), a.base, a.samples, a.tol, a.prec)
    return r.to_json(a.dump_samples), _report_text(r), r.passed


def cmd_paper_suite(a):
    from .suite import run_suite

    rows = run_suite(a.only or None)
    width = max((len(r["name"]) for r in rows), default=10)
    lines = [f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']:<{width}}  {r['detail']}" for r in rows]
    failed = sum(not r["passed"] for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} checks passed")
    return {"checks": rows, "passed": len(rows) - failed, "failed": failed}, "\n".join(lines), failed == 0


COMMANDS = {
    "complexify": cmd_complexify,
    "realify": cmd_realify,
    "branches": cmd_branches,
    "condition-a": cmd_condition_a,
    "classify": cmd_classify,
    "singular": cmd_singular,
    "preset": cmd_preset,
    "image": cmd_image,
    "maps-into": cmd_maps_into,
    "blaschke-check": cmd_blaschke_check,
    "blaschke-factor": cmd_blaschke_factor,
    "unimodular-locus": cmd_unimodular_locus,
    "ps-bound": cmd_ps_bound,
    "verify-identity": cmd_verify_identity,
    "verify-involution": cmd_verify_involution,
    "paper-suite": cmd_paper_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON object")
    common.add_argument("--prec", type=int, default=DEFAULT_PRECISION, help="working precision in bits")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="Puiseux truncation order")

    parser = _Parser(prog="schwarz", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    for name, help_text in [("complexify", "Schwarz defining form Q(z, w) of a curve"),
                            ("branches", "Puiseux branches of the Schwarz function at infinity"),
                            ("condition-a", "is there a branch with a finite limit at infinity"),
                            ("classify", "asymptotic class of each branch"),
                            ("singular", "singular points of a curve")]:
        add(name, help_text).add_argument("--curve", required=True, help="P(x, y)")
    add("realify", "real curve of a Hermitian form").add_argument("--qform", required=True, help="Q(z, w)")
    p = add("preset", "built-in curve families")
    p.add_argument("--kind", required=True, choices=["circle", "line", "ellipse", "rose"])
    p.add_argument("--params", nargs="*", default=[], help="numbers, complex values as re,im")
    p = add("image", "real curve containing f(C)")
    p.add_argument("--map", required=True)
    p.add_argument("--curve", required=True)
    p = add("maps-into", "exact test that f maps the source curve into the target")
    p.add_argument("--map", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    for name, help_text in [("blaschke-check", "exact test that |f| = 1 on the unit circle"),
                            ("blaschke-factor", "factor as lambda * B1 / B2"),
                            ("unimodular-locus", "the curve |f(z)| = 1")]:
        add(name, help_text).add_argument("--map", required=True)
    p = add("ps-bound", "common points of two unimodular loci against (n1+n2)^2")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)

    def sampling(p):
        p.add_argument("--base", required=True, type=parse_complex, help="base point re,im")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--dump-samples", action="store_true", help="include sample points in JSON")

    p = add("verify-identity", "sampled check of f(conj S_A(z)) = conj S_B(f(z))")
    p.add_argument("--map", required=True, help="expression in z; exp allowed")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    sampling(p)
    p = add("verify-involution", "sampled check of conj S(conj S(z)) = z")
    p.add_argument("--curve", required=True)
    sampling(p)
    p = add("paper-suite", "run every worked example and print a pass/fail table")
    p.add_argument("--only", nargs="*", help="run only the named checks")
    return parser


def run(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return CommandResult("error", code="usage", message=str(exc))
    if not args.command:
        return CommandResult("error", code="usage", message="missing command; see --help")
    if args.prec < 16 or args.order < 1:
        return CommandResult("error", code="usage", message="--prec must be >= 16 and --order >= 1",
                             command=args.command)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            with precision(args.prec):
                out = COMMANDS[args.command](args)
        except ParseError as exc:
            res = CommandResult("error", code="parse_error", message=str(exc))
        except (SchwarzError, ValueError, ArithmeticError) as exc:
            res = CommandResult("error", code=getattr(exc, "code", "error"), message=str(exc))
        else:
            payload, text, *ok = out
            if ok and not ok[0]:
                res = CommandResult("error", payload, code="check_failed", message=text.splitlines()[-1], text=text)
            else:
                res = CommandResult("ok", payload, text=text)
    res.command = args.command
    res.diagnostics = [str(w.message) for w in caught]
    return res


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    res = run(argv)
    want_json = "--json" in argv
    if res.code == "usage" and not want_json:
        build_parser().print_usage(sys.stderr)
    for d in res.diagnostics:
        print(f"warning: {d}", file=sys.stderr)
    if want_json:
        print(json.dumps(res.to_json()))
    else:
        if res.text:
            print(res.text)
        if res.status == "error" and res.code != "check_failed":
            print(f"error [{res.code}]: {res.message}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
