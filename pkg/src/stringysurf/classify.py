"""Classification of germs by discrepancy signs, catalog shapes, structure.

The class of a germ depends only on the sign pattern of its log
discrepancies: canonical (all >= 1), log terminal (all > 0), log canonical
(all >= 0), and not log canonical otherwise.  Zero-discrepancy curves are
tolerated by the stringy invariants exactly when they are rational and meet
the rest of the configuration in at most two points, both on curves with
nonzero discrepancy.

For germs that are not log canonical, structure_report verifies the shape
every minimal log resolution must have: a connected negative-discrepancy
core with pairwise disjoint rational chains attached at single points, along
which the discrepancies increase strictly from a nonnegative start to below
one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .discrepancy import log_discrepancies
from .errors import PreconditionNotMet, StructureViolation
from .graphs import ResolutionGraph, chain_determinants
from .laurent import format_fraction


class SingularityClass(enum.Enum):
    CANONICAL = "Canonical"
    LOG_TERMINAL_NON_CANONICAL = "LogTerminalNonCanonical"
    STRICTLY_LOG_CANONICAL = "StrictlyLogCanonical"
    NOT_LOG_CANONICAL = "NotLogCanonical"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Classification:
    singularity_class: SingularityClass
    admissible_for_stringy: bool
    zero_set: frozenset[str]
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "class": str(self.singularity_class),
            "admissible_for_stringy": self.admissible_for_stringy,
            "zero_set": sorted(self.zero_set),
            "notes": list(self.notes),
        }


def classify(graph: ResolutionGraph) -> Classification:
    """Class from the discrepancy sign pattern plus zero-curve admissibility."""
    disc = log_discrepancies(graph)
    values = list(disc.values())
    if all(a >= 1 for a in values):
        cls = SingularityClass.CANONICAL
    elif all(a > 0 for a in values):
        cls = SingularityClass.LOG_TERMINAL_NON_CANONICAL
    elif all(a >= 0 for a in values):
        cls = SingularityClass.STRICTLY_LOG_CANONICAL
    else:
        cls = SingularityClass.NOT_LOG_CANONICAL

    zero = frozenset(vid for vid, a in disc.items() if a == 0)
    notes = []
    admissible = cls != SingularityClass.STRICTLY_LOG_CANONICAL
    if not admissible:
        notes.append("strictly log canonical: stringy invariants undefined")
    for vid in sorted(zero):
        v = graph.vertex(vid)
        points = graph.neighbor_points(vid)
        if v.genus != 0:
            admissible = False
            notes.append(f"zero-discrepancy curve {vid!r} has genus {v.genus}")
        if len(points) > 2:
            admissible = False
            notes.append(f"zero-discrepancy curve {vid!r} meets {len(points)} points")
        if any(disc[nb] == 0 for nb in points):
            admissible = False
            notes.append(f"zero-discrepancy curve {vid!r} meets another zero curve")
    return Classification(cls, admissible, zero, tuple(notes))


# -- catalog recognition -------------------------------------------------------


class RecognizedType(enum.Enum):
    HJ_CHAIN = "HJ_chain"
    TRIPLE = "Triple"
    SIMPLE_ELLIPTIC = "SimpleElliptic"
    CUSP = "Cusp"
    STRICT_TRIPLE = "StrictTriple"
    DOUBLE_FORK = "DoubleFork"
    NONE = "None"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Recognition:
    kind: RecognizedType
    params: tuple[int, ...] = ()

    def __str__(self):
        if self.params:
            return f"{self.kind}{self.params}"
        return str(self.kind)


_LOG_TERMINAL_TRIPLES = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}
_STRICT_TRIPLES = {(2, 3, 6), (2, 4, 4), (3, 3, 3)}

_NONE = Recognition(RecognizedType.NONE)


def _all_rational(graph: ResolutionGraph) -> bool:
    return all(v.genus == 0 for v in graph.vertices)


def _simple_edges(graph: ResolutionGraph) -> bool:
    return all(e.mult == 1 for e in graph.edges) and len(
        {e.pair() for e in graph.edges}
    ) == len(graph.edges)


def _path_order(graph: ResolutionGraph, comp: list[str]) -> list[str] | None:
    """Order the vertices of an induced simple path, or None if not a path.

    Starts from the endpoint that is declared first, so the orientation is
    reproducible.
    """
    comp_set = set(comp)
    deg = {
        vid: sum(1 for nb in graph.neighbor_points(vid) if nb in comp_set)
        for vid in comp
    }
    if len(comp) == 1:
        return list(comp) if deg[comp[0]] == 0 else None
    ends = [vid for vid in comp if deg[vid] == 1]
    if len(ends) != 2 or any(deg[vid] > 2 for vid in comp):
        return None
    order_index = {vid: graph.index(vid) for vid in comp}
    start = min(ends, key=order_index.get)
    path = [start]
    prev = None
    while len(path) < len(comp):
        nxt = [
            nb
            for nb in graph.neighbors(path[-1])
            if nb in comp_set and nb != prev and nb not in path
        ]
        if len(nxt) != 1:
            return None
        prev = path[-1]
        path.append(nxt[0])
    return path


def _leg_from(graph: ResolutionGraph, center: str, first: str) -> list[str] | None:
    """Follow a chain away from the center; None if it branches or loops."""
    leg = [first]
    prev = center
    while True:
        nxt = [nb for nb in graph.neighbor_points(leg[-1]) if nb != prev]
        if not nxt:
            return leg
        if len(nxt) != 1 or nxt[0] == center or nxt[0] in leg:
            return None
        prev = leg[-1]
        leg.append(nxt[0])


def recognize_log_canonical_type(graph: ResolutionGraph) -> Recognition:
    """Match the dual graph against the log canonical catalog shapes.

    Chains of rational curves give HJ_chain(n, q) (q taken by deleting the
    first vertex along the declaration-anchored orientation); genus-one
    single curves are simple elliptic; rational cycles are cusps; rational
    three-leg stars give Triple or StrictTriple according to the sorted leg
    determinants; the four-armed shape with a central chain and four (-2)
    end-curves is the double fork.  Anything else is None.
    """
    verts = graph.vertices
    if len(verts) == 1 and verts[0].genus == 1:
        return Recognition(RecognizedType.SIMPLE_ELLIPTIC)
    if not _all_rational(graph):
        return _NONE

    # closed chain: connected and every curve meets exactly two points
    if len(verts) >= 2 and all(graph.total_multiplicity(v.id) == 2 for v in verts):
        return Recognition(RecognizedType.CUSP, (len(verts),))

    if _simple_edges(graph):
        path = _path_order(graph, graph.ids())
        if path is not None:
            kappas = [-graph.vertex(vid).self_int for vid in path]
            dets = chain_determinants(kappas)
            if dets.n >= 2:
                return Recognition(RecognizedType.HJ_CHAIN, (dets.n, dets.q_drop_first))
            return _NONE

        branch = [v.id for v in verts if graph.total_multiplicity(v.id) >= 3]
        if len(branch) == 1:
            center = branch[0]
            legs = []
            for first in graph.neighbors(center):
                leg = _leg_from(graph, center, first)
                if leg is None:
                    return _NONE
                legs.append(leg)
            if len(legs) == 3:
                triple = tuple(
                    sorted(
                        chain_determinants(
                            [-graph.vertex(vid).self_int for vid in leg]
                        ).n
                        for leg in legs
                    )
                )
                if triple in _LOG_TERMINAL_TRIPLES or (
                    triple[0] == 2 and triple[1] == 2
                ):
                    return Recognition(RecognizedType.TRIPLE, triple)
                if triple in _STRICT_TRIPLES:
                    return Recognition(RecognizedType.STRICT_TRIPLE, triple)
                return _NONE

        fork = _match_double_fork(graph)
        if fork is not None:
            return fork
    return _NONE


def _match_double_fork(graph: ResolutionGraph) -> Recognition | None:
    leaves = [v.id for v in graph.vertices if graph.total_multiplicity(v.id) == 1]
    if len(leaves) != 4:
        return None
    if any(graph.vertex(vid).self_int != -2 for vid in leaves):
        return None
    core = [vid for vid in graph.ids() if vid not in set(leaves)]
    if not core:
        return None
    path = _path_order(graph, core)
    if path is None:
        return None
    carriers = {vid: 0 for vid in core}
    for leaf in leaves:
        (nb,) = graph.neighbors(leaf)
        if nb not in carriers:
            return None
        carriers[nb] += 1
    if len(path) == 1:
        ok = carriers[path[0]] == 4
    else:
        ok = (
            carriers[path[0]] == 2
            and carriers[path[-1]] == 2
            and all(carriers[vid] == 0 for vid in path[1:-1])
        )
    return Recognition(RecognizedType.DOUBLE_FORK, (len(path),)) if ok else None


# -- structure of non log canonical germs ---------------------------------------


@dataclass(frozen=True)
class AttachedChain:
    attach: str
    vertices: tuple[str, ...]
    discrepancies: tuple[Fraction, ...]


@dataclass(frozen=True)
class StructureReport:
    negative_part: frozenset[str]
    chains: tuple[AttachedChain, ...]
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "negative_part": sorted(self.negative_part),
            "chains": [
                {
                    "attach": c.attach,
                    "vertices": list(c.vertices),
                    "discrepancies": [format_fraction(a) for a in c.discrepancies],
                }
                for c in self.chains
            ],
            "violations": list(self.violations),
        }


def _connected(graph: ResolutionGraph, subset: set[str]) -> bool:
    if not subset:
        return True
    start = next(iter(sorted(subset)))
    seen = {start}
    stack = [start]
    while stack:
        for nb in graph.neighbors(stack.pop()):
            if nb in subset and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen == subset


def structure_report(graph: ResolutionGraph, *, strict: bool = True) -> StructureReport:
    """Decompose a non log canonical minimal graph into core plus chains.

    Verifies: the vertices with negative discrepancy form a nonempty
    connected core; every other vertex lies on a rational chain attached to
    the core at exactly one end by a single point; along each chain the
    discrepancies satisfy a_attach < a_1 >= 0 and a_1 < a_2 < ... < a_r < 1;
    and when a chain starts at zero, the attachment discrepancy obeys the
    exact relations a = -1 (length 1), a = -1/kappa_2 (length 2), and
    a > -1/kappa_2 (longer).

    A violation on an input honestly declared minimal would contradict the
    structure theory, so by default it raises StructureViolation; pass
    strict=False to collect violations in the report instead.
    """
    if not graph.minimal:
        raise PreconditionNotMet("graph is not declared a minimal log resolution")
    disc = log_discrepancies(graph)
    if all(a >= 0 for a in disc.values()):
        raise PreconditionNotMet("germ is log canonical; no structure to report")

    violations: list[str] = []
    negative = {vid for vid, a in disc.items() if a < 0}
    if not _connected(graph, negative):
        violations.append("negative part is not connected")

    rest = [vid for vid in graph.ids() if vid not in negative]
    comps: list[list[str]] = []
    unvisited = set(rest)
    while unvisited:
        start = sorted(unvisited)[0]
        comp = {start}
        stack = [start]
        while stack:
            for nb in graph.neighbors(stack.pop()):
                if nb in unvisited and nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        unvisited -= comp
        comps.append(sorted(comp, key=graph.index))

    chains: list[AttachedChain] = []
    for comp in comps:
        label = "{" + ",".join(comp) + "}"
        comp_set = set(comp)
        for vid in comp:
            if graph.vertex(vid).genus != 0:
                violations.append(f"chain vertex {vid!r} is not rational")
        bad_mult = [
            e for e in graph.edges if (e.a in comp_set or e.b in comp_set) and e.mult > 1
        ]
        if bad_mult:
            violations.append(f"chain {label} has a multiple intersection")
            continue
        links = [
            e
            for e in graph.edges
            if (e.a in comp_set) != (e.b in comp_set)
        ]
        if len(links) != 1:
            violations.append(f"chain {label} attaches to the core {len(links)} times")
            continue
        link = links[0]
        attach, first = (link.a, link.b) if link.b in comp_set else (link.b, link.a)
        ordered = _ordered_from(graph, comp, first)
        if ordered is None:
            violations.append(f"chain {label} is not a simple path from its attachment")
            continue
        r = len(ordered)
        expected = [2] * r
        expected[-1] = 1
        expected[0] = 2 if r > 1 else 1
        if [graph.total_multiplicity(vid) for vid in ordered] != expected:
            violations.append(f"chain {label} carries extra intersection points")
            continue
        values = tuple(disc[vid] for vid in ordered)
        chains.append(AttachedChain(attach, tuple(ordered), values))

        a1 = values[0]
        if a1 < 0:
            violations.append(f"chain {label}: first discrepancy {a1} < 0")
        if any(not values[i] < values[i + 1] for i in range(len(values) - 1)):
            violations.append(f"chain {label}: discrepancies not strictly increasing")
        if not values[-1] < 1:
            violations.append(f"chain {label}: last discrepancy {values[-1]} >= 1")
        if not disc[attach] < a1:
            violations.append(
                f"chain {label}: attachment discrepancy {disc[attach]} not < {a1}"
            )
        if a1 == 0:
            a_att = disc[attach]
            if len(ordered) == 1:
                if a_att != -1:
                    violations.append(
                        f"chain {label}: zero start with length 1 needs attachment -1, got {a_att}"
                    )
            else:
                kappa2 = -graph.vertex(ordered[1]).self_int
                bound = Fraction(-1, kappa2)
                if len(ordered) == 2 and a_att != bound:
                    violations.append(
                        f"chain {label}: zero start with length 2 needs attachment {bound}, got {a_att}"
                    )
                if len(ordered) > 2 and not a_att > bound:
                    violations.append(
                        f"chain {label}: zero start needs attachment > {bound}, got {a_att}"
                    )

    report = StructureReport(frozenset(negative), tuple(chains), tuple(violations))
    if strict and violations:
        raise StructureViolation("; ".join(violations), report)
    return report


def _ordered_from(graph: ResolutionGraph, comp: list[str], first: str) -> list[str] | None:
    comp_set = set(comp)
    if first not in comp_set:
        return None
    path = [first]
    prev = None
    while True:
        nxt = [
            nb
            for nb in graph.neighbor_points(path[-1])
            if nb in comp_set and nb != prev
        ]
        if not nxt:
            break
        if len(nxt) != 1 or nxt[0] in path:
            return None
        prev = path[-1]
        path.append(nxt[0])
    if len(path) != len(comp):
        return None
    return path
