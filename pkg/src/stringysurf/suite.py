"""The all-in-one consistency suite run by the `check` CLI command.

Every identity the library is built on is re-verified on a concrete input
file: the adjunction relations behind the discrepancies, the bound and
monotonicity inequalities, the core-plus-chains structure of non log
canonical germs, the chain determinant identities and positivity, the
equality of the closed chain contribution with the direct stratum sum, the
blow-up invariance of the stringy invariants, and the agreement of the
E-function limit with the Euler number.  Failures are collected as results
rather than raised, so a corrupted input yields a readable report and exit
code 1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .classify import SingularityClass, classify, structure_report
from .discrepancy import (
    CheckReport,
    check_bound_lemma,
    check_monotonicity_lemma,
    log_discrepancies,
)
from .errors import StringySurfError
from .graphs import parse_graph
from .stringy import (
    ChainContext,
    chain_Dr,
    chain_contribution,
    chain_direct_sum,
    check_blowup_invariance,
    check_dr_identities,
    check_duality,
    check_nonnegativity,
    e_at_zero,
    euler_chain_contribution,
    find_chains,
    stringy_complete_surface,
    stringy_e_function_germ,
    stringy_euler_germ,
)


@dataclass(frozen=True)
class CheckSuiteResult:
    checks: tuple[CheckReport, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status} {c.name}"
            if c.details:
                line += ": " + "; ".join(c.details)
            out.append(line)
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": list(c.details)}
                for c in self.checks
            ],
        }


def load_document(source) -> dict:
    """Read a JSON document from a path, JSON text, or an already-parsed dict."""
    if isinstance(source, dict):
        return source
    text = source
    if isinstance(source, (str, Path)) and Path(str(source)).is_file():
        text = Path(str(source)).read_text()
    return json.loads(text)


def is_complete_surface_document(document: dict) -> bool:
    return "germs" in document or "hodge_X" in document


def _guard(name: str, func) -> CheckReport:
    """Run a check function, turning raised failures into a failed report."""
    try:
        result = func()
    except StringySurfError as exc:
        return CheckReport(name, False, (str(exc),))
    if isinstance(result, CheckReport):
        return result
    return CheckReport(name, True, ())


def run_check_suite(source) -> CheckSuiteResult:
    """Run every applicable check on a germ or complete-surface file."""
    document = load_document(source)
    if is_complete_surface_document(document):
        return _complete_surface_suite(document)
    return _germ_suite(document)


def _germ_suite(document: dict) -> CheckSuiteResult:
    checks: list[CheckReport] = []
    try:
        graph = parse_graph(document)
    except StringySurfError as exc:
        return CheckSuiteResult((CheckReport("parse", False, (str(exc),)),))
    checks.append(CheckReport("parse", True, ()))

    checks.append(_guard("adjunction-relations", lambda: bool(log_discrepancies(graph))))
    try:
        cls = classify(graph)
    except StringySurfError as exc:
        checks.append(CheckReport("classify", False, (str(exc),)))
        return CheckSuiteResult(tuple(checks))

    if graph.minimal and cls.singularity_class != SingularityClass.CANONICAL:
        checks.append(
            _guard("discrepancy-bound", lambda: check_bound_lemma(graph, strict=False))
        )
    checks.append(_guard("discrepancy-monotonicity", lambda: _monotonicity(graph)))

    if graph.minimal and cls.singularity_class == SingularityClass.NOT_LOG_CANONICAL:
        checks.append(_guard("structure-theorem", lambda: _structure(graph)))

    if not cls.admissible_for_stringy:
        checks.append(
            CheckReport(
                "stringy-invariants",
                True,
                ("skipped: " + ("; ".join(cls.notes) or "not admissible"),),
            )
        )
        return CheckSuiteResult(tuple(checks))

    checks.append(_guard("euler-limit-agreement", lambda: _euler_limit(graph)))
    for i, chain in enumerate(find_chains(graph)):
        prefix = f"chain-{i}({','.join(chain.ids)})"
        disc = log_discrepancies(graph)
        boundary = [disc[b] for b in (chain.left, chain.right) if b is not None]
        ctx = ChainContext.from_graph(graph, chain.ids)
        checks.append(
            _guard(f"{prefix}-determinant-identities", lambda c=ctx: check_dr_identities(c, strict=False))
        )
        checks.append(
            _guard(f"{prefix}-positivity", lambda c=ctx: check_nonnegativity(c, strict=False))
        )
        if any(b == 0 for b in boundary):
            checks.append(
                CheckReport(f"{prefix}-oracle", True, ("skipped: zero boundary discrepancy",))
            )
            continue
        checks.append(
            _guard(f"{prefix}-oracle", lambda g=graph, c=chain: _chain_oracle(g, c))
        )
    checks.append(
        _guard("blow-up-invariance", lambda: check_blowup_invariance(graph, strict=False))
    )
    return CheckSuiteResult(tuple(checks))


def _monotonicity(graph) -> CheckReport:
    ids = graph.ids()
    if len(ids) == 1:
        return CheckReport("discrepancy-monotonicity", True, ("skipped: single vertex",))
    if len(ids) <= 6:
        subsets = [
            list(sub)
            for size in range(1, len(ids))
            for sub in itertools.combinations(ids, size)
        ]
    else:
        subsets = [[vid] for vid in ids]
    for sub in subsets:
        report = check_monotonicity_lemma(graph, sub, strict=False)
        if not report.passed:
            return report
    return CheckReport("discrepancy-monotonicity", True, (f"{len(subsets)} subsets",))


def _structure(graph) -> CheckReport:
    report = structure_report(graph, strict=False)
    return CheckReport("structure-theorem", report.passed, report.violations)


def _euler_limit(graph) -> CheckReport:
    euler = stringy_euler_germ(graph)
    limit = stringy_e_function_germ(graph).limit_at_one()
    ok = euler == limit
    details = () if ok else (f"limit {limit} != Euler number {euler}",)
    return CheckReport("euler-limit-agreement", ok, details)


def _chain_oracle(graph, chain) -> CheckReport:
    ctx = ChainContext.from_graph(graph, chain.ids)
    closed = chain_contribution(ctx)
    direct = chain_direct_sum(graph, chain)
    problems = []
    if closed != direct:
        problems.append("closed form differs from the direct stratum sum")
    d_poly = chain_Dr(ctx)
    euler_part = euler_chain_contribution(ctx)
    if euler_part != closed.limit_at_one():
        problems.append("integer-determinant Euler contribution differs from the limit")
    a0, a_end = ctx.boundary_values()
    if euler_part != Fraction(d_poly.at_one()) / (a0 * a_end):
        problems.append("D_r at z = 1 differs from the integer chain determinant")
    name = f"chain({','.join(chain.ids)})-oracle"
    return CheckReport(name, not problems, tuple(problems))


def _complete_surface_suite(document: dict) -> CheckSuiteResult:
    checks: list[CheckReport] = []
    try:
        hx = document["hodge_X"]
        germs = [parse_graph(g) for g in document.get("germs", [])]
    except (KeyError, StringySurfError) as exc:
        return CheckSuiteResult((CheckReport("parse", False, (str(exc),)),))
    checks.append(CheckReport("parse", True, ()))
    try:
        e_fun = stringy_complete_surface(hx, germs)
    except StringySurfError as exc:
        checks.append(CheckReport("assembly-identity", False, (str(exc),)))
        return CheckSuiteResult(tuple(checks))
    checks.append(CheckReport("assembly-identity", True, ()))
    checks.append(_guard("poincare-duality", lambda: check_duality(e_fun, strict=False)))
    checks.append(_guard("value-at-origin", lambda: e_at_zero(hx, germs)))
    return CheckSuiteResult(tuple(checks))
