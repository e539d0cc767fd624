"""Log discrepancies from the adjunction system, plus consistency checks.

For a germ graph the log discrepancies a_i satisfy, for every vertex j,

    sum_i (a_i - 1) (E_i . E_j)  =  2 genus(E_j) - 2 - E_j^2,

a nonsingular system because the intersection matrix is negative definite.
The solution is cached on the graph.  An equivalent per-vertex form,

    kappa_j a_j = sum_(i adjacent) (E_i . E_j)(a_i - 1) + 2 - 2 genus(E_j),

with kappa_j = -E_j^2, is re-verified after every solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AssertionFailure, NotNegativeDefinite, PreconditionNotMet
from .graphs import GERM, ResolutionGraph
from .laurent import format_fraction, lcm_all
from .linalg import solve_rational_system


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a named consistency check."""

    name: str
    passed: bool
    details: tuple[str, ...] = ()

    def require(self):
        if not self.passed:
            raise AssertionFailure(f"{self.name}: " + "; ".join(self.details), self)
        return self


def log_discrepancies(graph: ResolutionGraph) -> dict[str, Fraction]:
    """Exact log discrepancy per vertex id."""
    cached = graph._cache.get("discrepancies")
    if cached is not None:
        return dict(cached)
    if graph.kind != GERM:
        raise NotNegativeDefinite("log discrepancies are defined for germ graphs")
    m = graph.intersection_matrix()
    rhs = [2 * v.genus - 2 - v.self_int for v in graph.vertices]
    shifted = solve_rational_system(m, rhs)  # solves for a_i - 1
    disc = {v.id: x + 1 for v, x in zip(graph.vertices, shifted)}
    _verify_adjunction(graph, disc)
    graph._cache["discrepancies"] = dict(disc)
    return disc


def _verify_adjunction(graph: ResolutionGraph, disc: dict[str, Fraction]):
    for v in graph.vertices:
        lhs = -v.self_int * disc[v.id]
        rhs = Fraction(2 - 2 * v.genus)
        for nb in graph.neighbor_points(v.id):
            rhs += disc[nb] - 1
        if lhs != rhs:
            raise AssertionFailure(
                f"adjunction relation failed at vertex {v.id!r}: {lhs} != {rhs}"
            )


def scale(graph: ResolutionGraph) -> int:
    """Common exponent denominator: lcm of the discrepancy denominators and 1."""
    cached = graph._cache.get("scale")
    if cached is None:
        disc = log_discrepancies(graph)
        cached = lcm_all([a.denominator for a in disc.values()] + [1])
        graph._cache["scale"] = cached
    return cached


def restricted_discrepancies(graph: ResolutionGraph, subset) -> dict[str, Fraction]:
    """Solve the adjunction system restricted to a vertex subset.

    The restricted system keeps the same right-hand side but only the rows
    and columns of the chosen vertices (a principal submatrix, so still
    negative definite).
    """
    subset = list(subset)
    pos = {vid: graph.index(vid) for vid in subset}
    m_full = graph.intersection_matrix()
    m = [[m_full[pos[x]][pos[y]] for y in subset] for x in subset]
    rhs = []
    for vid in subset:
        v = graph.vertex(vid)
        rhs.append(2 * v.genus - 2 - v.self_int)
    shifted = solve_rational_system(m, rhs)
    return {vid: x + 1 for vid, x in zip(subset, shifted)}


def check_bound_lemma(graph: ResolutionGraph, disc=None, *, strict: bool = True) -> CheckReport:
    """All log discrepancies of a minimal non-canonical resolution are < 1.

    The bound is classical for the minimal resolution; applying it to a
    declared minimal log resolution rests on the blow-up argument that keeps
    new discrepancies below 1, which the report records as an assumption.
    """
    if not graph.minimal:
        raise PreconditionNotMet("graph is not declared a minimal log resolution")
    disc = disc or log_discrepancies(graph)
    if all(a >= 1 for a in disc.values()):
        raise PreconditionNotMet("canonical germ: the bound a_i < 1 does not apply")
    offenders = sorted(vid for vid, a in disc.items() if a >= 1)
    details = [
        "assumption: declared-minimal log resolution treated like a minimal resolution"
    ]
    if offenders:
        details += [f"a_{vid} = {format_fraction(disc[vid])} >= 1" for vid in offenders]
    report = CheckReport("discrepancy-bound", not offenders, tuple(details))
    return report.require() if strict else report


def check_monotonicity_lemma(
    graph: ResolutionGraph, subset, *, strict: bool = True
) -> CheckReport:
    """Dropping vertices strictly raises every remaining log discrepancy."""
    subset = list(subset)
    all_ids = set(graph.ids())
    if not subset or set(subset) == all_ids or not set(subset) <= all_ids:
        raise PreconditionNotMet("subset must be a nonempty proper vertex subset")
    disc = log_discrepancies(graph)
    sub = restricted_discrepancies(graph, subset)
    offenders = [vid for vid in subset if not disc[vid] < sub[vid]]
    details = tuple(
        f"a_{vid} = {format_fraction(disc[vid])} not < {format_fraction(sub[vid])}"
        for vid in offenders
    )
    report = CheckReport("discrepancy-monotonicity", not offenders, details)
    return report.require() if strict else report
