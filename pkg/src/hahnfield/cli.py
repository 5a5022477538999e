"""Command-line driver.

Exit status: 0 on success, 1 on mathematical errors (for instance a
series without asymptotic integral), 2 on usage, parse or configuration
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivation import NOT_ATTAINED
from .errors import ConfigurationError, MathError, ParseError
from .fields import Field, default_max_terms, load_field
from .hahn_group import format_exponent
from .logarithm import validate_prelog
from .render import render_series, series_to_json

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", default="leh3", help="built-in name (leh3, logs) or config path")
    p.add_argument("--max-terms", type=int, default=None,
                   help="truncation budget (default 32, or $HAHNFIELD_MAX_TERMS)")
    p.add_argument("--depth", type=int, default=3, help="exponential tower depth")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="hahnfield",
                                 description="Generalized series with Hardy-type derivations.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="validate the field's derivation and pre-log")
    for name, text in [("derive", "derivative"), ("logderiv", "logarithmic derivative"),
                       ("ai", "asymptotic integral"), ("integrate", "integral"),
                       ("log", "logarithm"), ("exp", "exponential")]:
        sp = sub.add_parser(name, parents=[common], help=f"{text} of an expression")
        sp.add_argument("expr")
    for name, text in [("eval", "evaluate the germ of an expression"),
                       ("germ-check", "compare the derivative with a finite difference")]:
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("expr")
        sp.add_argument("--at", type=float, required=True, metavar="X")
        if name == "germ-check":
            sp.add_argument("--step", type=float, default=None, metavar="H")
    return ap


def _theta_text(fld: Field, e) -> str:
    if e is NOT_ATTAINED:
        return "not-attained"
    return format_exponent(e, fld.spine)


def _check(fld: Field) -> dict:
    rep = fld.dspec.report
    out = {
        "field": fld.name,
        "h3": rep.h3_ok,
        "hfield": rep.hfield_ok,
        "summable": rep.c1c2_ok,
        "theta_tilde": _theta_text(fld, rep.theta_tilde),
    }
    if fld.pspec is None:
        out["prelog"] = None
        return out
    pre = validate_prelog(fld.dspec, fld.pspec)
    c1 = [w for w in pre.witnesses if w[0] == "condition1"]
    missing = [w[1] for w in pre.witnesses if w[0] == "undefined"]
    out["prelog"] = {
        "condition1": pre.condition1_ok,
        "condition1_witness": [f"t{w[1]}" for w in c1],
        "condition2": pre.condition2_ok,
        "compatible": pre.compatible_ok,
        "growth": pre.ga_ok,
        "complete": pre.complete,
        "undefined": [f"t{i}" for i in missing],
    }
    out["tower"] = pre.ok
    return out


def _yes(flag: bool) -> str:
    return "ok" if flag else "FAIL"


def _check_text(rep: dict) -> str:
    lines = [
        f"field: {rep['field']}",
        f"H3: {_yes(rep['h3'])}",
        f"H-field: {_yes(rep['hfield'])}",
        f"summability: {_yes(rep['summable'])}",
        f"theta~: {rep['theta_tilde']}",
    ]
    pre = rep["prelog"]
    if pre is None:
        lines.append("prelog: none")
        return "\n".join(lines)
    c1 = _yes(pre["condition1"])
    if pre["condition1_witness"]:
        w = pre["condition1_witness"][0]
        c1 += f" (theta~ = {rep['theta_tilde']} in the support of d({w})/{w})"
    lines += [
        f"prelog condition 1: {c1}",
        f"prelog condition 2: {_yes(pre['condition2'])}",
        f"prelog compatibility: {_yes(pre['compatible'])}",
        f"growth axiom: {_yes(pre['growth'])}",
        "prelog complete: " + ("yes" if pre["complete"]
                               else "no (undefined: " + ", ".join(pre["undefined"]) + ")"),
        "EL tower: " + ("available" if rep["tower"] else "unavailable"),
    ]
    return "\n".join(lines)


def _emit_series(s, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(series_to_json(s), indent=2)
    return render_series(s)


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        max_terms = args.max_terms if args.max_terms is not None else default_max_terms()
        if max_terms < 1 or args.depth < 0:
            raise ConfigurationError("budgets must be positive")
        fld = load_field(args.field, max_terms, args.depth)
        text = _run(fld, args)
    except (ParseError, ConfigurationError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except MathError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MATH
    except _Partial as p:
        print(p.text, file=out)
        print(f"error: {p.message}", file=err)
        return EXIT_MATH
    print(text, file=out)
    return EXIT_OK


class _Partial(Exception):
    def __init__(self, text: str, message: str):
        super().__init__(message)
        self.text = text
        self.message = message


def _run(fld: Field, args) -> str:
    fmt = args.format
    cmd = args.command
    if cmd == "check":
        rep = _check(fld)
        return json.dumps(rep, indent=2) if fmt == "json" else _check_text(rep)
    a = fld.parse(args.expr)
    if cmd == "derive":
        return _emit_series(fld.derive(a), fmt)
    if cmd == "logderiv":
        return _emit_series(fld.logderiv(a), fmt)
    if cmd == "ai":
        return _emit_series(fld.ai(a), fmt)
    if cmd == "log":
        return _emit_series(fld.log(a), fmt)
    if cmd == "exp":
        return _emit_series(fld.exp(a), fmt)
    if cmd == "integrate":
        res = fld.integrate(a)
        if fmt == "json":
            body = dict(res.to_json(), status=res.status)
            text = json.dumps(body, indent=2)
        else:
            text = "\n".join([
                f"value: {render_series(res.value)}",
                f"residual: {render_series(res.residual)}",
                f"exact: {'true' if res.exact else 'false'}",
                f"iterations: {res.iterations}",
                f"status: {res.status}",
            ])
        if res.status == "non-integrable":
            raise _Partial(text, "residual has valuation theta~: not integrable in this field")
        return text
    if cmd == "eval":
        y = fld.eval(a, args.at)
        return json.dumps({"x": args.at, "value": y}) if fmt == "json" else repr(y)
    rep = fld.derivative_check(a, args.at, args.step)
    if fmt == "json":
        return json.dumps(rep)
    return "\n".join(f"{k}: {rep[k]!r}" for k in ("symbolic", "numeric", "rel_err"))


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
