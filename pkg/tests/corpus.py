"""Shared fixtures and deterministic random graph generators for the tests.

Random germs are built so the minimal flag is honest: every rational curve
gets self-intersection <= -2 (such a normal crossings configuration is its
own minimal resolution, hence its own minimal log resolution), while
positive-genus curves may go down to -1.  Graphs with huge discrepancy
denominators are rejected to keep exact polynomial arithmetic fast; the
identities under test do not depend on the scale.
"""

from __future__ import annotations

import random
from fractions import Fraction

import stringysurf as ss
from stringysurf import FreePoint, IntersectionPoint
from stringysurf.classify import SingularityClass

MAX_SCALE = 2000


def germ(vertices, edges=(), minimal=True, chains=()):
    return ss.parse_graph(
        {
            "kind": "germ",
            "minimal": minimal,
            "vertices": [
                {"id": vid, "genus": g, "self_intersection": s} for vid, g, s in vertices
            ],
            "edges": [{"a": a, "b": b, "mult": m} for a, b, m in edges],
            "chains": list(chains),
        }
    )


def chain_graph(kappas, minimal=True):
    n = len(kappas)
    return germ(
        [(f"E{i+1}", 0, -k) for i, k in enumerate(kappas)],
        [(f"E{i+1}", f"E{i+2}", 1) for i in range(n - 1)],
        minimal=minimal,
    )


def star_graph(kappa, leg_kappas, genus=0, minimal=True):
    """Star whose legs are single curves; leg_kappas lists their weights."""
    vertices = [("c", genus, -kappa)]
    edges = []
    for i, k in enumerate(leg_kappas, start=1):
        vertices.append((f"l{i}", 0, -k))
        edges.append(("c", f"l{i}", 1))
    return germ(vertices, edges, minimal=minimal)


# -- named fixtures ------------------------------------------------------------

def a53():
    return chain_graph([2, 3])


def single_minus2():
    return chain_graph([2])


def triangle_237():
    return star_graph(1, [2, 3, 7])


def simple_elliptic():
    return germ([("e", 1, -1)])


def cusp_cycle():
    return germ(
        [("c1", 0, -3), ("c2", 0, -3), ("c3", 0, -3)],
        [("c1", "c2", 1), ("c2", "c3", 1), ("c3", "c1", 1)],
    )


def cusp_bigon():
    return germ([("c1", 0, -3), ("c2", 0, -3)], [("c1", "c2", 2)])


def strict_triple_236():
    return star_graph(2, [2, 3, 6])


def double_fork():
    return germ(
        [("c", 0, -3), ("f1", 0, -2), ("f2", 0, -2), ("f3", 0, -2), ("f4", 0, -2)],
        [("c", "f1", 1), ("c", "f2", 1), ("c", "f3", 1), ("c", "f4", 1)],
    )


def opposite_pair():
    """Genus-1 curve meeting a rational curve; discrepancies (-1/3, 1/3), so
    blowing up the edge realizes a new zero-discrepancy curve between two
    nonzero neighbors."""
    return germ([("c", 1, -2), ("E1", 0, -2)], [("c", "E1", 1)])


def zero_middle_chain():
    """Genus-1 end plus two rational curves; discrepancies (-1/2, 0, 1/2),
    so the middle curve is an allowed zero meeting two curves."""
    return germ(
        [("c", 1, -2), ("E1", 0, -2), ("E2", 0, -2)],
        [("c", "E1", 1), ("E1", "E2", 1)],
    )


def cycle_negative_part():
    """All discrepancies negative with one cycle in the dual graph
    (a = -3/2, -3/2, -3, -6); the graph Euler characteristic is 0."""
    return germ(
        [("a", 0, -3), ("b", 0, -3), ("v", 0, -3), ("p", 2, -1)],
        [("a", "b", 1), ("b", "v", 1), ("v", "a", 1), ("v", "p", 1)],
    )


def star_with_increasing_chain():
    """Genus-1 center (kappa = 4) with a (5, 3) leg: central discrepancy
    -4/17 and chain values (1/17, 6/17) increasing outward."""
    return germ(
        [("c", 1, -4)],
        chains=[{"attach": "c", "n": 5, "q": 3}],
    )


def corrupted_minimal():
    """A blown-up configuration dishonestly flagged minimal: the chain value
    4/3 breaks the below-one bound of the structure theorem."""
    return germ(
        [("c", 1, -2), ("E1", 0, -3), ("bl", 0, -1)],
        [("c", "E1", 1), ("E1", "bl", 1)],
    )


def fixture_germs():
    return {
        "a53": a53(),
        "single_minus2": single_minus2(),
        "triangle_237": triangle_237(),
        "simple_elliptic": simple_elliptic(),
        "cusp_cycle": cusp_cycle(),
        "cusp_bigon": cusp_bigon(),
        "strict_triple_236": strict_triple_236(),
        "double_fork": double_fork(),
        "opposite_pair": opposite_pair(),
        "zero_middle_chain": zero_middle_chain(),
        "cycle_negative_part": cycle_negative_part(),
        "star_increasing": star_with_increasing_chain(),
    }


# -- random generation ------------------------------------------------------------


def random_minimal_germ(rng: random.Random, max_vertices=8):
    """One random negative-definite germ honestly flagged minimal, or None
    when the draw failed validation."""
    n = rng.randint(1, max_vertices)
    vertices = []
    for i in range(n):
        roll = rng.random()
        genus = 0 if roll < 0.78 else (1 if roll < 0.95 else 2)
        if genus == 0:
            kappa = rng.choice([2, 2, 2, 3, 3, 4, 5, 6])
        else:
            kappa = rng.choice([1, 1, 2, 3])
        vertices.append((f"v{i}", genus, -kappa))
    edges = [(f"v{i}", f"v{rng.randrange(i)}", 1) for i in range(1, n)]
    if n >= 3 and rng.random() < 0.18:
        i, j = rng.sample(range(n), 2)
        a, b = f"v{i}", f"v{j}"
        if not any({a, b} == {x, y} for x, y, _ in edges):
            edges.append((a, b, 1))
    if edges and rng.random() < 0.10:
        a, b, _ = edges[rng.randrange(len(edges))]
        edges = [(x, y, 2 if {x, y} == {a, b} else m) for x, y, m in edges]
    try:
        graph = germ(vertices, edges, minimal=True)
    except ss.errors.NotNegativeDefinite:
        return None
    if ss.scale(graph) > MAX_SCALE:
        return None
    return graph


def random_blowups(rng: random.Random, graph, steps):
    """Blow the graph up a few times, keeping admissibility."""
    disc = ss.log_discrepancies(graph)
    for _ in range(steps):
        sites = ss.legal_sites(graph)
        site = sites[rng.randrange(len(sites))]
        candidate, moved = ss.blow_up(graph, disc, site)
        if not ss.classify(candidate).admissible_for_stringy:
            continue
        graph, disc = candidate, moved
    return graph


def generate(rng: random.Random, count, predicate, allow_blowups=False, max_vertices=8):
    """Deterministically draw `count` germs satisfying the predicate."""
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("generator failed to fill the corpus")
        graph = random_minimal_germ(rng, max_vertices)
        if graph is None:
            continue
        if allow_blowups and rng.random() < 0.3:
            blown = random_blowups(rng, graph, rng.randint(1, 2))
            if len(blown.vertices) <= max_vertices and predicate(blown):
                out.append(blown)
                continue
        if predicate(graph):
            out.append(graph)
    return out


def is_admissible(graph):
    return ss.classify(graph).admissible_for_stringy


def is_not_log_canonical(graph):
    return ss.classify(graph).singularity_class == SingularityClass.NOT_LOG_CANONICAL


def blowup_zero_case(graph, disc, site):
    """Which of the five zero-discrepancy configurations a blow-up realizes:
    1 new zero curve from an edge with opposite discrepancies, 2 new zero
    curve from a free point on a discrepancy -1 curve, 3 edge at a zero
    curve meeting two curves, 4 edge at a zero curve meeting one curve,
    5 free point on a zero curve meeting one curve.  None otherwise."""
    if isinstance(site, FreePoint):
        a = disc[site.vertex]
        if a == -1:
            return 2
        if a == 0 and len(graph.neighbor_points(site.vertex)) == 1:
            return 5
        return None
    if isinstance(site, IntersectionPoint):
        va, vb = disc[site.a], disc[site.b]
        for this, other in ((site.a, site.b), (site.b, site.a)):
            if disc[this] == 0:
                return 3 if len(graph.neighbor_points(this)) == 2 else 4
        if va + vb == 0 and va != 0:
            return 1
    return None
