"""Command line interface.

Commands operate on graph files in the JSON schema of graphs.parse_graph
(complete-surface files additionally carry "hodge_X" and "germs").  All
output is deterministic: rationals print reduced, term lists sort ascending
by (uv-exponent, grade).  Exit codes: 0 success, 1 domain error or failed
check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .classify import classify, recognize_log_canonical_type, structure_report
from .discrepancy import log_discrepancies, scale
from .efunction import EFraction
from .errors import StringySurfError
from .graphs import hj_chain, parse_graph
from .laurent import format_fraction
from .star import (
    SeifertData,
    seifert_space,
    star_invariants,
    sweep_star_checks,
)
from .stringy import (
    ChainContext,
    chain_Dr,
    check_blowup_invariance,
    check_duality,
    e_at_zero,
    stringy_complete_surface,
    stringy_e_function_germ,
    stringy_euler_germ,
)
from .suite import load_document, run_check_suite


def _uv_power(exp: Fraction, latex: bool) -> str:
    if latex:
        if exp.denominator == 1:
            return f"(uv)^{{{exp.numerator}}}"
        return f"(uv)^{{\\frac{{{exp.numerator}}}{{{exp.denominator}}}}}"
    if exp == 1:
        return "(uv)"
    return f"(uv)^({format_fraction(exp)})"


def _monomial_text(grade: int, exp: Fraction, coef: int, latex: bool) -> str:
    p, q = grade + exp, exp
    if p == q:
        body = "" if p == 0 else _uv_power(p, latex)
    else:
        sep = " " if latex else "*"
        u = f"u^{{{format_fraction(p)}}}" if latex else f"u^({format_fraction(p)})"
        v = f"v^{{{format_fraction(q)}}}" if latex else f"v^({format_fraction(q)})"
        body = f"{u}{sep}{v}"
    if not body:
        return str(coef)
    if coef == 1:
        return body
    if coef == -1:
        return f"-{body}"
    sep = " " if latex else "*"
    return f"{coef}{sep}{body}"


def render_efraction(value: EFraction, latex: bool = False) -> str:
    reduced = value.reduce()
    entries = []
    for d, poly in reduced.num.g.items():
        for exp, coef in poly.terms():
            entries.append((exp, d, coef))
    entries.sort(key=lambda item: (item[0], item[1]))
    if not entries:
        text = "0"
    else:
        text = _monomial_text(entries[0][1], entries[0][0], entries[0][2], latex)
        for exp, d, coef in entries[1:]:
            part = _monomial_text(d, exp, coef, latex)
            if part.startswith("-"):
                text += f" - {part[1:]}"
            else:
                text += f" + {part}"
    if reduced.den:
        den = "".join(f"({_uv_power(b, latex)} - 1)" for b in reduced.den)
        text = f"({text}) / {den}"
    return text


def _load_graph(path: str):
    return parse_graph(load_document(path))


def _cmd_discrepancies(args, out) -> int:
    graph = _load_graph(args.file)
    disc = log_discrepancies(graph)
    if args.json:
        payload = {vid: format_fraction(a) for vid, a in disc.items()}
        json.dump({"discrepancies": payload, "scale": scale(graph)}, out, sort_keys=True)
        out.write("\n")
        return 0
    width = max(len(vid) for vid in disc)
    for v in graph.vertices:
        out.write(f"{v.id:<{width}}  {format_fraction(disc[v.id])}\n")
    out.write(f"scale t = {scale(graph)}\n")
    return 0


def _cmd_classify(args, out) -> int:
    graph = _load_graph(args.file)
    c = classify(graph)
    recognized = recognize_log_canonical_type(graph)
    if args.json:
        payload = c.to_json()
        payload["recognized"] = str(recognized)
        json.dump(payload, out, sort_keys=True)
        out.write("\n")
        return 0
    zset = "{" + ",".join(sorted(c.zero_set)) + "}"
    admissible = "admissible" if c.admissible_for_stringy else "not admissible"
    out.write(f"{c.singularity_class}, {admissible}, Z={zset}\n")
    out.write(f"recognized: {recognized}\n")
    return 0


def _cmd_structure(args, out) -> int:
    graph = _load_graph(args.file)
    report = structure_report(graph, strict=False)
    json.dump(report.to_json(), out, indent=2, sort_keys=True)
    out.write("\n")
    return 0 if report.passed else 1


def _cmd_euler(args, out) -> int:
    graph = _load_graph(args.file)
    value = stringy_euler_germ(graph)
    if args.json:
        json.dump({"stringy_euler_number": format_fraction(value)}, out)
        out.write("\n")
    else:
        out.write(format_fraction(value) + "\n")
    return 0


def _cmd_efun(args, out) -> int:
    graph = _load_graph(args.file)
    value = stringy_e_function_germ(graph)
    if args.format == "json":
        json.dump(value.reduce().to_json(), out, sort_keys=True)
        out.write("\n")
    elif args.format == "latex":
        out.write(render_efraction(value, latex=True) + "\n")
    else:
        out.write(render_efraction(value) + "\n")
    return 0


def _cmd_dr(args, out) -> int:
    graph = _load_graph(args.file)
    ids = [part for part in args.chain.split(",") if part]
    ctx = ChainContext.from_graph(graph, ids)
    d = chain_Dr(ctx)
    if args.json:
        json.dump({"chain": ids, "D_r": d.to_json()}, out, sort_keys=True)
        out.write("\n")
    else:
        out.write(str(d) + "\n")
    return 0


def _cmd_invariance(args, out) -> int:
    graph = _load_graph(args.file)
    report = check_blowup_invariance(graph, strict=False)
    if args.json:
        json.dump(
            {"passed": report.passed, "details": list(report.details)}, out, sort_keys=True
        )
        out.write("\n")
    else:
        out.write(("PASS" if report.passed else "FAIL") + " blow-up invariance\n")
        for line in report.details:
            out.write(f"  {line}\n")
    return 0 if report.passed else 1


def _cmd_complete(args, out) -> int:
    document = load_document(args.file)
    hx = document["hodge_X"]
    germs = [parse_graph(g) for g in document.get("germs", [])]
    e_fun = stringy_complete_surface(hx, germs)
    duality = check_duality(e_fun, strict=False)
    origin = e_at_zero(hx, germs)
    if args.json:
        json.dump(
            {
                "E": e_fun.reduce().to_json(),
                "self_dual": duality.passed,
                "value_at_origin": format_fraction(origin),
            },
            out,
            sort_keys=True,
        )
        out.write("\n")
        return 0 if duality.passed else 1
    out.write(f"E(S) = {render_efraction(e_fun)}\n")
    out.write(f"duality: {'PASS' if duality.passed else 'FAIL'}\n")
    out.write(f"E(S; 0, 0) = {format_fraction(origin)}\n")
    return 0 if duality.passed else 1


def _parse_legs(text: str):
    legs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        n, _, q = chunk.partition("/")
        legs.append((int(n), int(q or 1)))
    return legs


def _cmd_star(args, out) -> int:
    if args.sweep:
        space = seifert_space(args.max_n, args.max_kappa, args.max_legs, args.max_genus)
        summary = sweep_star_checks(space)
        out.write(
            f"checked {summary.checked} Seifert data: "
            f"{summary.log_terminal_polynomials} log terminal polynomial E-functions, "
            f"{summary.negative_form_stars} stars with a = -1/m, "
            f"{summary.strictly_log_canonical} strictly log canonical skipped\n"
        )
        for line in summary.nonpolynomial_negative_observations:
            out.write(f"  non-polynomial E-function (open question territory): {line}\n")
        return 0
    data = SeifertData.create(args.genus, args.kappa, _parse_legs(args.legs or ""))
    inv = star_invariants(data)
    numerator = 2 - 2 * data.genus - len(data.legs) + sum(
        (Fraction(1, n) for n, _ in data.legs), Fraction(0)
    )
    if args.json:
        json.dump(inv.to_json(), out, sort_keys=True)
        out.write("\n")
        return 0
    out.write(f"Seifert data {data}\n")
    out.write(
        f"a = {format_fraction(inv.a_central)}"
        f" = ({format_fraction(numerator)})/({format_fraction(data.orbital_deficit())})"
        f" = (prod n_i / d) * ({format_fraction(numerator)})\n"
    )
    out.write(f"d = {inv.det}\n")
    out.write(f"e_P = {format_fraction(inv.euler)}\n")
    out.write(f"E_P = {render_efraction(inv.e_function)}\n")
    return 0


def _cmd_hj(args, out) -> int:
    out.write(" ".join(str(k) for k in hj_chain(args.n, args.q)) + "\n")
    return 0


def _cmd_check(args, out) -> int:
    result = run_check_suite(args.file)
    if args.json:
        json.dump(result.to_json(), out, sort_keys=True)
        out.write("\n")
    else:
        for line in result.lines():
            out.write(line + "\n")
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stringysurf",
        description=(
            "Exact stringy invariants of normal surface singularities "
            "from dual resolution graphs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name, help_text, **kwargs):
        p = sub.add_parser(name, help=help_text, **kwargs)
        p.add_argument("file", help="graph file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    with_file("discrepancies", "solve for the log discrepancies")
    with_file("classify", "classify the germ and recognize catalog shapes")
    with_file("structure", "negative part and attached chains, as JSON")
    with_file("euler", "stringy Euler number of a germ")

    efun = sub.add_parser("efun", help="stringy E-function of a germ")
    efun.add_argument("file")
    efun.add_argument("--format", choices=("terms", "json", "latex"), default="terms")

    dr = with_file("dr", "chain determinant D_r for a chain of vertex ids")
    dr.add_argument("--chain", required=True, help="comma-separated vertex ids")

    with_file("invariance", "verify blow-up invariance of e and E")
    with_file("complete", "E-function of a complete surface file")

    star = sub.add_parser("star", help="star-shaped graphs from Seifert data")
    star.add_argument("--genus", type=int, default=0)
    star.add_argument("--kappa", type=int, default=2)
    star.add_argument("--legs", default="", help="comma-separated n/q pairs")
    star.add_argument("--json", action="store_true")
    star.add_argument("--sweep", action="store_true", help="run the parameter sweep")
    star.add_argument("--max-n", type=int, default=12)
    star.add_argument("--max-kappa", type=int, default=6)
    star.add_argument("--max-legs", type=int, default=4)
    star.add_argument("--max-genus", type=int, default=2)

    hj = sub.add_parser("hj", help="continued-fraction chain weights for n/q")
    hj.add_argument("n", type=int)
    hj.add_argument("q", type=int)

    with_file("check", "run the full consistency suite on a file")
    return parser


_HANDLERS = {
    "discrepancies": _cmd_discrepancies,
    "classify": _cmd_classify,
    "structure": _cmd_structure,
    "euler": _cmd_euler,
    "efun": _cmd_efun,
    "dr": _cmd_dr,
    "invariance": _cmd_invariance,
    "complete": _cmd_complete,
    "star": _cmd_star,
    "hj": _cmd_hj,
    "check": _cmd_check,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, out)
    except StringySurfError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
