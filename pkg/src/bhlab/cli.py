"""Command-line front end: ``bhlab <command> [options]``.

Exit codes: 0 success, 2 argument or domain error, 3 admissibility error,
4 input-data error, 5 enumeration cap exceeded.

JSON output (``--format json``) is one object per run with keys
``command``, ``params``, ``results`` (scalar outputs) and, where the command
produces a list of bounds or rows, ``rows``.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import constants as C
from . import exponents as E
from . import verifier as V
from .errors import AdmissibilityError, CapExceededError, DomainError, TensorDataError
from .kernel import as_extended
from .khinchine import Field, as_field

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_ADMISSIBILITY = 3
EXIT_DATA = 4
EXIT_CAP = 5

FORMATS = ("table", "json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _num(x):
    """Shortest round-trip repr; shared by every output format."""
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    return str(x)


def _bound_row(r: C.BoundReport, label: str = "") -> dict:
    return {
        "formula_id": str(r.formula_id),
        "label": label or r.note,
        "value": _num(r.value),
        "valid": bool(r.valid),
    }


def _parse_q(text: str) -> list[float]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise DomainError("empty exponent list")
    return [E.parse_exponent(t) for t in parts]


def _parse_p(text: str):
    return as_extended(text)


def _p_out(p):
    return "inf" if p.is_infinite else _num(p.value)


# -- commands ----------------------------------------------------------------


def cmd_bh_const(args) -> dict:
    field = as_field(args.field)
    rows = [_bound_row(C.bh_upper(args.m, field)), _bound_row(C.bh_envelope(args.m, field))]
    if field is Field.REAL:
        rows.append(_bound_row(C.bh_lower_real(args.m)))
    return {
        "params": {"m": args.m, "field": str(field)},
        "results": {"upper": rows[0]["value"], "envelope": rows[1]["value"],
                    "lower": rows[2]["value"] if field is Field.REAL else None},
        "rows": rows,
    }


def cmd_hl_const(args) -> dict:
    field = as_field(args.field)
    m = args.m
    p = _parse_p(args.p)
    cands = C.hl_candidates(m, p, field)
    best = C.hl_upper_best(m, p, field)
    rows = [_bound_row(c) for c in cands]
    lower = None
    if field is Field.REAL and not p.is_infinite:
        lower_r = C.hl_lower_real(m, p)
        lower = lower_r.value
        rows.append(_bound_row(lower_r))
    thr = C.hl_threshold(m)
    results = {
        "best": _num(best.value),
        "winner": str(best.extras["winner"]),
        "threshold": thr,
        "above_threshold": p.exceeds(thr),
        "lower": _num(lower),
    }
    if p.is_infinite:
        results["bh_upper"] = _num(C.bh_upper(m, field).value)
    return {"params": {"m": m, "p": _p_out(p), "field": str(field)}, "results": results, "rows": rows}


def cmd_gen_const(args) -> dict:
    field = as_field(args.field)
    q = _parse_q(args.q)
    p = _parse_p(args.p)
    m = len(q)
    if m < 2:
        raise DomainError("need at least two exponents")
    if p.is_infinite:
        report = E.gen_bh_upper(q, field, args.tol)
    else:
        report = E.gen_hl_upper(q, p, field, args.tol)
    case = report.extras["case"]
    prior = None
    prior_note = "n/a"
    if field is Field.COMPLEX and case == "i":
        if p.is_infinite and all(a <= b for a, b in zip(q, q[1:])):
            prior = E.gen_bh_upper_prior(q, args.tol).value
            prior_note = "earlier bound for ascending q"
        else:
            prior_note = "n/a: the earlier bound needs p = inf and ascending q"
    return {
        "params": {"q": [_num(x) for x in q], "p": _p_out(p), "field": str(field)},
        "results": {
            "formula_id": str(report.formula_id),
            "value": _num(report.value),
            "case": case,
            "max_q": _num(report.extras["max_q"]),
            "threshold": _num(report.extras["threshold"]),
            "prior_formula_id": str(C.FormulaId.GEN_BH_PRIOR),
            "prior": _num(prior),
            "prior_note": prior_note,
        },
    }


def cmd_interpolate(args) -> dict:
    q = _parse_q(args.q)
    p = _parse_p(args.p)
    m = len(q)
    if not p.exceeds(2 * m):
        raise AdmissibilityError(f"p <= 2m: interpolation needs p > {2 * m}", constraint="p <= 2m")
    defaulted = args.s is None
    s = None if defaulted else E.parse_exponent(args.s)
    d = E.interpolation_weights(q, p, s, args.tol)
    res = d.residuals()
    return {
        "params": {"q": [_num(x) for x in q], "p": _p_out(p), "s": _num(d.s), "s_default": defaulted},
        "results": {
            "lambda": _num(d.lam),
            "thetas": [_num(t) for t in d.thetas],
            "theta_sum": _num(math.fsum(d.thetas)),
            "max_residual": _num(float(np.max(np.abs(res)))),
        },
        "rows": [
            {"slot": j + 1, "q": _num(q[j]), "theta": _num(d.thetas[j]),
             "vertex": [_num(v) for v in d.vertices[j]], "residual": _num(res[j])}
            for j in range(m)
        ],
    }


def _load_tensor(path: str) -> V.CoefficientTensor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TensorDataError(f"cannot read tensor file: {exc}") from None
    return V.CoefficientTensor.from_json(text)


def cmd_verify(args) -> dict:
    t = _load_tensor(args.tensor)
    if t.is_zero():
        raise TensorDataError("tensor is identically zero")
    q = _parse_q(args.q)
    if len(q) != t.m:
        raise TensorDataError(f"dimension mismatch: tensor has m = {t.m}, --q has {len(q)} exponents")
    p = _parse_p(args.p)
    if not (p.is_infinite or p.value >= 2.0):
        raise DomainError("verify needs p >= 2 or p = inf")
    exact_route = t.field is Field.REAL and p.is_infinite
    cert = V.certify_ratio(t, q, p, args.cap, require_exact=exact_route)
    results = {"mixed_norm": _num(cert.numerator)}
    if cert.denominator.kind == "EXACT":
        results.update(norm_kind="exact", norm=_num(cert.denominator.value), norm_lower=None, norm_upper=None)
    else:
        lower = V.sup_norm_ascent(t, p, seed=args.seed)
        results.update(
            norm_kind="bracket",
            norm=None,
            norm_lower=_num(lower.value),
            norm_upper=_num(cert.denominator.value),
        )
    bound = V.applicable_upper_bound(t.m, p, q, t.field, args.tol) if t.m >= 2 else None
    verdict = "n/a" if bound is None else ("PASS" if cert.value <= bound + 1e-9 else "FAIL")
    results.update(ratio=_num(cert.value), bound=_num(bound), verdict=verdict)
    return {
        "params": {"tensor": str(args.tensor), "m": t.m, "n": t.n, "field": str(t.field),
                   "q": [_num(x) for x in q], "p": _p_out(p), "seed": args.seed},
        "results": results,
    }


SCAN_HEADER = ["m", "p", "legacy", "p_dependent", "p_free", "best", "lower", "above_threshold"]


def scan_rows(m: int, p_min: float, p_max: float, step: float, field=Field.REAL) -> list[dict]:
    field = as_field(field)
    if m < 2 or not (2 * m <= p_min < p_max) or not step > 0:
        raise DomainError("scan needs m >= 2, 2m <= p-min < p-max and step > 0")
    count = int(math.floor((p_max - p_min) / step + 1e-9)) + 1
    thr = C.hl_threshold(m)
    rows = []
    for i in range(count):
        p = p_min + i * step
        legacy, dep, free = C.hl_candidates(m, p, field)
        rows.append(
            {
                "m": m,
                "p": _num(p),
                "legacy": _num(legacy.value),
                "p_dependent": _num(dep.value),
                "p_free": _num(free.value) if free.valid else None,
                "best": _num(C.hl_upper_best(m, p, field).value),
                "lower": _num(C.hl_lower_real(m, p).value) if field is Field.REAL else None,
                "above_threshold": p > thr,
            }
        )
    return rows


def cmd_scan(args) -> dict:
    rows = scan_rows(args.m, args.p_min, args.p_max, args.step, args.field)
    return {
        "params": {"m": args.m, "p_min": args.p_min, "p_max": args.p_max, "step": args.step,
                   "field": str(as_field(args.field))},
        "results": {"threshold": C.hl_threshold(args.m), "count": len(rows)},
        "rows": rows,
        "columns": SCAN_HEADER,
        "default_format": "csv",
    }


def cmd_search(args) -> dict:
    p = _parse_p(args.p)
    if args.q is None:
        q = [E.hl_critical_exponent(args.m, p)] * args.m
    else:
        q = _parse_q(args.q)
    res = V.search_extremal(args.m, args.n, p, q, args.iters, args.seed, args.cap)
    return {
        "params": {"m": args.m, "n": args.n, "p": _p_out(p), "q": [_num(x) for x in q],
                   "iters": args.iters, "seed": args.seed},
        "results": {
            "ratio": _num(res.ratio),
            "bound": _num(res.bound),
            "gap": _num(res.gap),
            "restarts": res.restarts,
            "tensor": res.tensor.to_dict(),
        },
    }


# -- rendering ---------------------------------------------------------------


def _render_table(name: str, out: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# {name}\n")
    for k, v in out["params"].items():
        buf.write(f"{k}: {_fmt(v)}\n")
    buf.write("\n")
    for k, v in out["results"].items():
        if isinstance(v, dict):
            v = json.dumps(v, separators=(",", ":"))
        buf.write(f"{k}: {_fmt(v)}\n")
    rows = out.get("rows")
    if rows:
        cols = out.get("columns") or list(rows[0].keys())
        cells = [[_fmt(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        buf.write("\n")
        buf.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
        for row in cells:
            buf.write("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")
    return buf.getvalue()


def _render_json(name: str, out: dict) -> str:
    doc = {"command": name, "params": out["params"], "results": out["results"]}
    if "rows" in out:
        doc["rows"] = out["rows"]
    return json.dumps(doc, indent=2) + "\n"


def _render_csv(name: str, out: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = out.get("rows")
    if rows:
        cols = out.get("columns") or list(rows[0].keys())
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_fmt(r.get(c)) for c in cols])
    else:
        writer.writerow(["key", "value"])
        for k, v in out["results"].items():
            if isinstance(v, dict):
                v = json.dumps(v, separators=(",", ":"))
            writer.writerow([k, _fmt(v)])
    return buf.getvalue()


RENDERERS = {"table": _render_table, "json": _render_json, "csv": _render_csv}

COMMANDS = {
    "bh-const": cmd_bh_const,
    "hl-const": cmd_hl_const,
    "gen-const": cmd_gen_const,
    "interpolate": cmd_interpolate,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "search": cmd_search,
}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=FORMATS, default=dflt(None),
                        help="output format (default: table; csv for scan)")
    parser.add_argument("--seed", type=int, default=dflt(0), help="random seed (default 0)")
    parser.add_argument("--cap", type=int, default=dflt(V.DEFAULT_CAP),
                        help=f"sign-enumeration cap on n(m-1) (default {V.DEFAULT_CAP}, max {V.HARD_CAP})")
    parser.add_argument("--tol", type=float, default=dflt(E.DEFAULT_TOL),
                        help="admissibility tolerance on exponent sums")
    parser.add_argument("--out", default=dflt(None), help="write output to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bhlab",
        description="Bohnenblust-Hille / Hardy-Littlewood constant calculators and verifier.",
        epilog=(
            "JSON output: {command, params, results[, rows]}.  "
            "Exit codes: 0 ok, 2 argument/domain error, 3 admissibility error, "
            "4 input-data error, 5 enumeration cap exceeded."
        ),
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("bh-const", "BH constant bounds for m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = add("hl-const", "HL constant bounds for (m, p)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", required=True, help="exponent p >= 2m, or 'inf'")
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = add("gen-const", "bounds for a multi-exponent q")
    p.add_argument("--q", required=True, help="comma-separated exponents, fractions allowed (4/3,4/3)")
    p.add_argument("--p", default="inf")
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = add("interpolate", "interpolation weights for q at (p, s)")
    p.add_argument("--q", required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--s", default=None, help="interpolation parameter in (max q, 2]; default midpoint")

    p = add("verify", "verify the inequality on a tensor file")
    p.add_argument("--tensor", required=True, help="coefficient tensor JSON file")
    p.add_argument("--q", required=True)
    p.add_argument("--p", default="inf")

    p = add("scan", "CSV of HL bounds against p")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p-min", type=float, required=True)
    p.add_argument("--p-max", type=float, required=True)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = add("search", "random search for large certified ratios")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--q", default=None, help="default: critical all-equal exponent")
    p.add_argument("--iters", type=int, default=10_000)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.cap > V.HARD_CAP or args.cap < 1:
        stderr.write(f"bhlab: error: --cap must be in [1, {V.HARD_CAP}]\n")
        return EXIT_DOMAIN
    try:
        out = COMMANDS[args.command](args)
    except AdmissibilityError as exc:
        stderr.write(f"bhlab: admissibility error ({exc.constraint}): {exc}\n")
        return EXIT_ADMISSIBILITY
    except TensorDataError as exc:
        stderr.write(f"bhlab: input error: {exc}\n")
        return EXIT_DATA
    except CapExceededError as exc:
        stderr.write(f"bhlab: cap exceeded: {exc}\n")
        return EXIT_CAP
    except DomainError as exc:
        stderr.write(f"bhlab: error: {exc}\n")
        parser.print_usage(stderr)
        return EXIT_DOMAIN
    fmt = args.format or out.get("default_format", "table")
    text = RENDERERS[fmt](args.command, out)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
