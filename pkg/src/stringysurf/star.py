"""Star-shaped graphs from Seifert data and their closed-form invariants.

A star consists of a central curve of genus g and self-intersection -kappa
with k chains (legs) attached, each determined by a coprime pair (n_i, q_i):
n_i is the full leg determinant and q_i the determinant after deleting the
innermost (center-adjacent) leg curve.  The central log discrepancy then has
the closed form

    a = (2 - 2g - k + sum 1/n_i) / (kappa - sum q_i/n_i)
      = (prod n_i / d) (2 - 2g - k + sum 1/n_i),

with d the total intersection determinant, the innermost leg discrepancies
are (q_i a + 1)/n_i, the stringy Euler number is (2 - 2g - k + sum n_i)/a,
and the E-function is (z-1)/(z^a - 1) times the open central Hodge
polynomial plus the leg chain determinants.  Every closed form here is
cross-checked against the generic linear-system and stratum-sum routes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .classify import SingularityClass, classify
from .discrepancy import CheckReport, log_discrepancies, scale
from .efunction import EFraction, GradedPoly
from .errors import (
    AssertionFailure,
    BadSeifertData,
    NotInTable,
    NotNegativeDefinite,
    PreconditionNotMet,
    StrictlyLogCanonical,
)
from .graphs import ResolutionGraph, hj_chain, parse_graph
from .laurent import WPoly, format_fraction
from .linalg import int_det
from .stringy import ChainContext, chain_Dr, stringy_e_function_germ, stringy_euler_germ

CENTER = "E"


@dataclass(frozen=True)
class SeifertData:
    genus: int
    kappa: int
    legs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.genus < 0:
            raise BadSeifertData(f"negative genus {self.genus}")
        if self.kappa < 1:
            raise BadSeifertData(f"central weight {self.kappa} must be positive")
        for n, q in self.legs:
            if not (0 < q < n) or gcd(n, q) != 1:
                raise BadSeifertData(f"leg ({n}, {q}) needs 0 < q < n coprime")

    @classmethod
    def create(cls, genus: int, kappa: int, legs) -> "SeifertData":
        return cls(genus, kappa, tuple((int(n), int(q)) for n, q in legs))

    def orbital_deficit(self) -> Fraction:
        """kappa - sum q_i/n_i; positive iff the star is negative definite."""
        return self.kappa - sum((Fraction(q, n) for n, q in self.legs), Fraction(0))

    def __str__(self):
        legs = ",".join(f"{n}/{q}" for n, q in self.legs)
        return f"{{g={self.genus}; kappa={self.kappa}; legs=[{legs}]}}"


def build_star(data: SeifertData) -> ResolutionGraph:
    """Assemble the star graph; legs expand through continued fractions with
    the innermost curve adjacent to the center (so deleting it leaves
    determinant q_i, the convention the closed forms use)."""
    if data.orbital_deficit() <= 0:
        raise NotNegativeDefinite(
            f"kappa - sum q_i/n_i = {data.orbital_deficit()} is not positive"
        )
    document = {
        "kind": "germ",
        # a (-1)-central curve meeting at most two legs is visibly contractible
        "minimal": data.kappa >= 2 or data.genus >= 1 or len(data.legs) >= 3,
        "vertices": [
            {"id": CENTER, "genus": data.genus, "self_intersection": -data.kappa}
        ],
        "edges": [],
        "chains": [
            {"attach": CENTER, "n": n, "q": q} for n, q in data.legs
        ],
    }
    return parse_graph(document)


def leg_ids(data: SeifertData, graph: ResolutionGraph, index: int) -> list[str]:
    """Vertex ids of one leg, ordered from the outer end to the center."""
    # chains are expanded in leg order with increasing suffixes on the center
    start = 1 + sum(len(hj_chain(n, q)) for n, q in data.legs[:index])
    length = len(hj_chain(*data.legs[index]))
    inner_to_outer = [f"{CENTER}.hj{start + j}" for j in range(length)]
    return inner_to_outer[::-1]


def star_central_discrepancy(data: SeifertData) -> Fraction:
    """Central log discrepancy, computed both closed ways and by the linear
    system, which must agree; the innermost leg discrepancies must equal
    (q_i a + 1)/n_i.  Raises StrictlyLogCanonical when a = 0."""
    graph = build_star(data)
    k = len(data.legs)
    numerator = 2 - 2 * data.genus - k + sum(
        (Fraction(1, n) for n, _ in data.legs), Fraction(0)
    )
    a_first = numerator / data.orbital_deficit()
    d = abs(int_det(graph.intersection_matrix()))
    a_second = Fraction(prod(n for n, _ in data.legs), d) * numerator
    disc = log_discrepancies(graph)
    a_solved = disc[CENTER]
    if not a_first == a_second == a_solved:
        raise AssertionFailure(
            f"central discrepancy mismatch: {a_first} vs {a_second} vs {a_solved}"
        )
    for i, (n, q) in enumerate(data.legs):
        inner = leg_ids(data, graph, i)[-1]
        if disc[inner] != (q * a_solved + 1) / n:
            raise AssertionFailure(
                f"leg {i}: innermost discrepancy {disc[inner]} != (q a + 1)/n"
            )
    if a_solved == 0:
        raise StrictlyLogCanonical("central discrepancy is 0")
    return a_solved


@dataclass(frozen=True)
class StarInvariants:
    data: SeifertData
    a_central: Fraction
    det: int
    euler: Fraction
    e_function: EFraction
    leg_determinants: tuple[WPoly, ...]

    def to_json(self) -> dict:
        return {
            "seifert": str(self.data),
            "a": format_fraction(self.a_central),
            "det": self.det,
            "euler": format_fraction(self.euler),
            "e_function": self.e_function.to_json(),
        }


def star_invariants(data: SeifertData) -> StarInvariants:
    """All closed-form invariants, verified against the generic routes."""
    a = star_central_discrepancy(data)
    graph = build_star(data)
    disc = log_discrepancies(graph)
    t = scale(graph)
    d = abs(int_det(graph.intersection_matrix()))
    k = len(data.legs)

    deficit = data.orbital_deficit()
    if deficit * prod(n for n, _ in data.legs) != d:
        raise AssertionFailure("determinant does not match kappa - sum q_i/n_i")

    euler = (2 - 2 * data.genus - k + sum(n for n, _ in data.legs)) / a
    if euler != stringy_euler_germ(graph):
        raise AssertionFailure("closed-form Euler number differs from stratum sum")

    legs_d = []
    core = GradedPoly.curve(data.genus, t) - k
    for i in range(k):
        ids = leg_ids(data, graph, i)  # outer end first, inner end last
        ctx = ChainContext.create(
            [-graph.vertex(vid).self_int for vid in ids],
            [disc[vid] for vid in ids],
            left=None,
            right=a,
            t=t,
        )
        d_leg = chain_Dr(ctx)
        legs_d.append(d_leg)
        core = core + d_leg

    zminus1 = GradedPoly.from_wpoly(WPoly.monomial(1, t) - 1)
    e_fun = EFraction.build(zminus1 * core, [a]).reduce()
    if e_fun != stringy_e_function_germ(graph):
        raise AssertionFailure("closed-form E-function differs from stratum sum")
    return StarInvariants(data, a, d, euler, e_fun, tuple(legs_d))


# -- the log terminal three-leg table ------------------------------------------


@dataclass(frozen=True)
class CaseTableReport:
    triple: tuple[int, int, int]
    a: Fraction
    det: int
    euler: Fraction
    det_share: int  # the numerator c in a = c/d


def log_terminal_case_table(data: SeifertData) -> CaseTableReport:
    """Evaluate the printed closed forms of the four log terminal three-leg
    families and check them against the generic invariants: each family has
    a = 1/(linear expression) = c/d with c in {4, 3, 2, 1} and an Euler
    number m d / c."""
    if len(data.legs) != 3 or data.genus != 0:
        raise NotInTable("table applies to genus-0 stars with three legs")
    legs = sorted(data.legs)
    (n1, _), (n2, q2), (n3, q3) = legs
    kappa = data.kappa
    if (n1, n2) == (2, 2):
        a = Fraction(1, kappa * n3 - n3 - q3)
        share, m = 4, n3 + 3
    elif (n1, n2, n3) == (2, 3, 3):
        a = Fraction(1, 6 * kappa - 2 * q2 - 2 * q3 - 3)
        share, m = 3, 7
    elif (n1, n2, n3) == (2, 3, 4):
        a = Fraction(1, 12 * kappa - 4 * q2 - 3 * q3 - 6)
        share, m = 2, 8
    elif (n1, n2, n3) == (2, 3, 5):
        a = Fraction(1, 30 * kappa - 10 * q2 - 6 * q3 - 15)
        share, m = 1, 9
    else:
        raise NotInTable(f"leg determinants {(n1, n2, n3)} are not log terminal")
    inv = star_invariants(data)
    expected_euler = Fraction(m * inv.det, share)
    if a != inv.a_central:
        raise AssertionFailure(f"table value a = {a} but invariants give {inv.a_central}")
    if a != Fraction(share, inv.det):
        raise AssertionFailure(f"a = {a} is not {share}/d with d = {inv.det}")
    if expected_euler != inv.euler:
        raise AssertionFailure(
            f"table Euler value {expected_euler} but invariants give {inv.euler}"
        )
    return CaseTableReport((n1, n2, n3), a, inv.det, inv.euler, share)


# -- non log canonical stars with a = -1/m ---------------------------------------


@dataclass(frozen=True)
class NegativeFormReport:
    m: int
    e_function: EFraction
    fully_nonnegative: bool        # every coefficient of -E_P (rational center)
    hodge_nonnegative: bool        # (-1)^(u-grade) coefficient of -E_P >= 0
    zero_leg_relations: tuple[str, ...]


def negative_polynomial_check(data: SeifertData, *, strict: bool = True) -> NegativeFormReport:
    """For a non log canonical star with a = -1/m, the E-function equals

        -(z^(1/m) + ... + z^(m/m)) ([E] - k + sum D legs),

    a polynomial.  Chain determinant positivity makes the pure (uv)-power
    part of -E_P nonnegative and the off-diagonal part (present only for a
    positive-genus center, with u-grade +-1) nonpositive, so the induced
    alternating-sign Hodge numbers are nonnegative; for a rational center
    -E_P simply has nonnegative coefficients.  When a leg's innermost
    discrepancy vanishes, additionally a = -1/q_i for that leg."""
    inv = star_invariants(data)
    graph = build_star(data)
    cls = classify(graph).singularity_class
    a = inv.a_central
    if cls != SingularityClass.NOT_LOG_CANONICAL or a.numerator != -1:
        raise PreconditionNotMet(
            f"need a non log canonical star with a = -1/m, got class {cls}, a = {a}"
        )
    m = a.denominator
    t = scale(graph)

    geo = WPoly.monomial(Fraction(1, m), t) * WPoly.geometric(Fraction(1, m), m, t)
    core = GradedPoly.curve(data.genus, t) - len(data.legs)
    for d_leg in inv.leg_determinants:
        core = core + d_leg
    product_form = EFraction.from_polynomial(-(core * geo))
    problems = []
    if product_form != inv.e_function:
        problems.append("product form differs from the E-function")
    reduced = inv.e_function.reduce()
    if reduced.den:
        problems.append("E-function is not a polynomial")
    negated = {d: -p for d, p in reduced.num.g.items()}
    fully = all(p.nonnegative_coefficients() for p in negated.values())
    hodge = all(
        p.nonnegative_coefficients() if d % 2 == 0 else (-p).nonnegative_coefficients()
        for d, p in negated.items()
    )
    if not hodge:
        problems.append("negated E-function fails alternating-sign nonnegativity")
    if data.genus == 0 and not fully:
        problems.append("rational center but a negative coefficient in -E_P")

    relations = []
    disc = log_discrepancies(graph)
    for i, (n, q) in enumerate(data.legs):
        inner = leg_ids(data, graph, i)[-1]
        if disc[inner] == 0:
            if a != Fraction(-1, q):
                problems.append(f"leg {i} has zero inner discrepancy but a != -1/{q}")
            relations.append(f"leg {i}: a = -1/{q}")
    if strict and problems:
        raise AssertionFailure("; ".join(problems))
    return NegativeFormReport(m, inv.e_function, fully, hodge, tuple(relations))


# -- sweeping the Seifert parameter space -----------------------------------------


def seifert_space(max_n=12, max_kappa=6, max_legs=4, max_genus=2):
    """Every valid Seifert datum within the bounds, legs as sorted multisets
    (the invariants do not depend on leg order)."""
    pairs = [
        (n, q)
        for n in range(2, max_n + 1)
        for q in range(1, n)
        if gcd(n, q) == 1
    ]
    for genus in range(max_genus + 1):
        for kappa in range(1, max_kappa + 1):
            for k in range(max_legs + 1):
                for legs in itertools.combinations_with_replacement(pairs, k):
                    data = SeifertData.create(genus, kappa, legs)
                    if data.orbital_deficit() > 0:
                        yield data


@dataclass
class SweepSummary:
    checked: int = 0
    strictly_log_canonical: int = 0
    log_terminal_polynomials: int = 0
    negative_form_stars: int = 0
    nonpolynomial_negative_observations: list = None

    def __post_init__(self):
        if self.nonpolynomial_negative_observations is None:
            self.nonpolynomial_negative_observations = []


def sweep_star_checks(space) -> SweepSummary:
    """Run every closed-form cross-check over an iterable of Seifert data.

    Any failed identity raises immediately; open observations (non log
    canonical stars whose E-function happens not to be a polynomial) are
    recorded, not asserted.
    """
    summary = SweepSummary()
    for data in space:
        summary.checked += 1
        try:
            inv = star_invariants(data)
        except StrictlyLogCanonical:
            summary.strictly_log_canonical += 1
            continue
        graph = build_star(data)
        cls = classify(graph).singularity_class
        if cls in (
            SingularityClass.CANONICAL,
            SingularityClass.LOG_TERMINAL_NON_CANONICAL,
        ):
            reduced = inv.e_function.reduce()
            if reduced.den:
                raise AssertionFailure(f"{data}: log terminal E-function not polynomial")
            if not all(p.nonnegative_coefficients() for p in reduced.num.g.values()):
                raise AssertionFailure(f"{data}: negative coefficient in E-function")
            summary.log_terminal_polynomials += 1
            if len(data.legs) == 3 and data.genus == 0:
                log_terminal_case_table(data)
        elif cls == SingularityClass.NOT_LOG_CANONICAL and inv.a_central.numerator == -1:
            negative_polynomial_check(data)
            summary.negative_form_stars += 1
        elif cls == SingularityClass.NOT_LOG_CANONICAL:
            if not inv.e_function.is_polynomial():
                summary.nonpolynomial_negative_observations.append(str(data))
    return summary
