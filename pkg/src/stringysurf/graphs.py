"""Dual resolution graphs: data model, validation, JSON parsing, blow-ups.

A graph records one exceptional curve per vertex (genus and self-intersection)
and one edge per pair of intersecting curves, with a multiplicity counting the
number of transverse intersection points.  Self-loops are rejected, since
normal crossings components are smooth; a pair of curves meeting twice is a
multiplicity-2 edge (this is how closed chains of length 2 arise).

Germ graphs must be connected with negative definite intersection matrix.
Graphs are immutable; blow-ups return a new graph.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from . import linalg
from .errors import (
    BadParameters,
    DisconnectedGraph,
    DuplicateId,
    InvalidSite,
    NotNegativeDefinite,
    SchemaError,
    SelfLoop,
)

GERM = "germ"
COMPLETE = "complete-exceptional"


class MinimalityWarning(UserWarning):
    """A graph declared minimal contains an obviously contractible curve."""


@dataclass(frozen=True)
class CurveVertex:
    id: str
    genus: int
    self_int: int


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    mult: int = 1

    def pair(self) -> frozenset:
        return frozenset((self.a, self.b))


@dataclass(frozen=True)
class FreePoint:
    """Blow-up site: a point on one curve away from all others."""

    vertex: str


@dataclass(frozen=True)
class IntersectionPoint:
    """Blow-up site: one of the intersection points of two curves."""

    a: str
    b: str


class ResolutionGraph:
    """Validated dual graph of a normal crossings log resolution."""

    def __init__(self, vertices, edges, kind=GERM, minimal=False):
        self.vertices: tuple[CurveVertex, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.kind = kind
        self.minimal = bool(minimal)
        self._cache: dict = {}
        self._validate()

    # -- validation ------------------------------------------------------

    def _validate(self):
        if self.kind not in (GERM, COMPLETE):
            raise SchemaError(f"unknown graph kind {self.kind!r}")
        if not self.vertices:
            raise SchemaError("graph has no vertices")
        seen = set()
        for v in self.vertices:
            if v.id in seen:
                raise DuplicateId(f"vertex id {v.id!r} declared twice")
            seen.add(v.id)
            if v.genus < 0:
                raise SchemaError(f"vertex {v.id!r} has negative genus")
        for e in self.edges:
            if e.a == e.b:
                raise SelfLoop(f"edge {e.a!r}-{e.b!r} is a self-loop")
            if e.a not in seen or e.b not in seen:
                raise SchemaError(f"edge {e.a!r}-{e.b!r} references unknown vertex")
            if e.mult < 1:
                raise SchemaError(f"edge {e.a!r}-{e.b!r} has multiplicity {e.mult}")
        self._check_connected()
        if self.kind == GERM and not linalg.check_negative_definite(self.intersection_matrix()):
            raise NotNegativeDefinite("intersection matrix is not negative definite")
        if self.minimal:
            self._warn_if_obviously_non_minimal()

    def _check_connected(self):
        ids = [v.id for v in self.vertices]
        adj = {i: set() for i in ids}
        for e in self.edges:
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(ids):
            missing = sorted(set(ids) - seen)
            raise DisconnectedGraph(f"vertices unreachable from {ids[0]!r}: {missing}")

    def _warn_if_obviously_non_minimal(self):
        # Heuristic only: a rational (-1)-curve meeting at most two mutually
        # non-adjacent curves (once each) could be contracted while keeping
        # normal crossings, so the declared resolution is not minimal.
        for v in self.vertices:
            if v.genus != 0 or v.self_int != -1:
                continue
            points = self.neighbor_points(v.id)
            if len(points) > 2:
                continue
            if len(points) == 2:
                x, y = points
                if x == y or self.edge_multiplicity(x, y) > 0:
                    continue
            warnings.warn(
                f"vertex {v.id!r} is a contractible (-1)-curve; the declared "
                "resolution is not a minimal log resolution",
                MinimalityWarning,
                stacklevel=3,
            )

    # -- lookups ----------------------------------------------------------

    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def vertex(self, vid: str) -> CurveVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def index(self, vid: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.id == vid:
                return i
        raise KeyError(vid)

    def edge_multiplicity(self, a: str, b: str) -> int:
        return sum(e.mult for e in self.edges if e.pair() == frozenset((a, b)))

    def neighbor_points(self, vid: str) -> list[str]:
        """Neighbor ids with one entry per intersection point, sorted by id."""
        out: list[str] = []
        for e in self.edges:
            if e.a == vid:
                out.extend([e.b] * e.mult)
            elif e.b == vid:
                out.extend([e.a] * e.mult)
        return sorted(out)

    def neighbors(self, vid: str) -> list[str]:
        return sorted({x for x in self.neighbor_points(vid)})

    def total_multiplicity(self, vid: str) -> int:
        return len(self.neighbor_points(vid))

    def intersection_matrix(self) -> list[list[int]]:
        """Symmetric matrix, diagonal self-intersections, vertex order as
        declared; multiple edges between a pair add up."""
        ids = self.ids()
        pos = {vid: i for i, vid in enumerate(ids)}
        n = len(ids)
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.vertices):
            m[i][i] = v.self_int
        for e in self.edges:
            i, j = pos[e.a], pos[e.b]
            m[i][j] += e.mult
            m[j][i] += e.mult
        return m

    def with_minimal(self, flag: bool) -> "ResolutionGraph":
        return ResolutionGraph(self.vertices, self.edges, self.kind, flag)

    def __repr__(self):
        return (
            f"ResolutionGraph({self.kind}, {len(self.vertices)} vertices, "
            f"{len(self.edges)} edges)"
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "minimal": self.minimal,
            "vertices": [
                {"id": v.id, "genus": v.genus, "self_intersection": v.self_int}
                for v in self.vertices
            ],
            "edges": [{"a": e.a, "b": e.b, "mult": e.mult} for e in self.edges],
        }


# -- Hirzebruch-Jung continued fractions -------------------------------------


def hj_chain(n: int, q: int) -> list[int]:
    """Self-intersection magnitudes [k_1..k_r] of the chain resolving the
    cyclic quotient of type (n, q): n/q = k_1 - 1/(k_2 - 1/(... - 1/k_r)),
    all k_i >= 2.

    Deleting the first vertex of the resulting chain leaves determinant q.
    """
    if n <= 0 or q <= 0 or q >= n or gcd(n, q) != 1:
        raise BadParameters(f"need 0 < q < n with gcd(n, q) = 1, got ({n}, {q})")
    ks = []
    while q > 0:
        k = -((-n) // q)  # ceil(n / q)
        ks.append(k)
        n, q = q, k * q - n
    return ks


class ChainDeterminants(NamedTuple):
    n: int            # |det| of the whole chain
    q_drop_last: int  # |det| after deleting the last vertex
    q_drop_first: int  # |det| after deleting the first vertex


def _chain_det(kappas) -> int:
    # three-term recurrence d_k = k_k d_(k-1) - d_(k-2), d_0 = 1
    prev2, prev1 = 0, 1
    for k in kappas:
        prev2, prev1 = prev1, k * prev1 - prev2
    return abs(prev1)


def chain_determinants(kappas: list[int]) -> ChainDeterminants:
    """Absolute chain determinants of a chain with self-intersections -k_i.

    Both one-vertex-deleted determinants are reported, since either end can
    serve as the q of the corresponding cyclic quotient; for k_i >= 2 this
    inverts hj_chain via the drop-first value.
    """
    if any(k < 1 for k in kappas):
        raise BadParameters("chain weights must be positive")
    return ChainDeterminants(
        n=_chain_det(kappas),
        q_drop_last=_chain_det(kappas[:-1]),
        q_drop_first=_chain_det(kappas[1:]),
    )


# -- JSON parsing --------------------------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise SchemaError(message)


def parse_graph(document) -> ResolutionGraph:
    """Build a validated graph from a JSON document (text or parsed dict).

    Schema: {"kind": "germ"|"complete-exceptional", "minimal": bool,
    "vertices": [{"id", "genus", "self_intersection"}],
    "edges": [{"a", "b", "mult"(default 1)}],
    "chains": [{"attach", "n", "q"}]}.

    A chain entry expands to fresh vertices "<attach>.hj1", "<attach>.hj2", ...
    carrying the continued-fraction self-intersections, the first one adjacent
    to the attach vertex.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    _require(isinstance(document, dict), "graph document must be a JSON object")
    unknown = set(document) - {"kind", "minimal", "vertices", "edges", "chains"}
    _require(not unknown, f"unknown keys {sorted(unknown)}")
    kind = document.get("kind", GERM)
    minimal = document.get("minimal", False)
    _require(isinstance(minimal, bool), '"minimal" must be a boolean')

    vertices = []
    for i, item in enumerate(document.get("vertices", [])):
        _require(isinstance(item, dict), f"vertex #{i} is not an object")
        _require("id" in item, f"vertex #{i} has no id")
        vid = item["id"]
        _require(isinstance(vid, str) and vid, f"vertex #{i} id must be a nonempty string")
        genus = item.get("genus", 0)
        _require(isinstance(genus, int) and genus >= 0, f"vertex {vid!r}: bad genus")
        _require("self_intersection" in item, f"vertex {vid!r}: missing self_intersection")
        selfint = item["self_intersection"]
        _require(isinstance(selfint, int), f"vertex {vid!r}: self_intersection must be an integer")
        vertices.append(CurveVertex(vid, genus, selfint))

    edges = []
    for i, item in enumerate(document.get("edges", [])):
        _require(isinstance(item, dict), f"edge #{i} is not an object")
        _require("a" in item and "b" in item, f"edge #{i} needs endpoints a and b")
        mult = item.get("mult", 1)
        _require(isinstance(mult, int) and mult >= 1, f"edge #{i}: bad multiplicity")
        edges.append(Edge(item["a"], item["b"], mult))

    counters: dict[str, int] = {}
    for i, item in enumerate(document.get("chains", [])):
        _require(isinstance(item, dict), f"chain #{i} is not an object")
        for key in ("attach", "n", "q"):
            _require(key in item, f"chain #{i} is missing {key!r}")
        attach = item["attach"]
        kappas = hj_chain(item["n"], item["q"])
        start = counters.get(attach, 0)  # several chains may share an attach vertex
        counters[attach] = start + len(kappas)
        prev = attach
        for j, k in enumerate(kappas, start=start + 1):
            vid = f"{attach}.hj{j}"
            vertices.append(CurveVertex(vid, 0, -k))
            edges.append(Edge(prev, vid, 1))
            prev = vid

    return ResolutionGraph(vertices, edges, kind, minimal)


# -- blow-ups -------------------------------------------------------------------


def _fresh_id(graph: ResolutionGraph) -> str:
    used = set(graph.ids())
    i = 1
    while f"bl{i}" in used:
        i += 1
    return f"bl{i}"


def blow_up(graph: ResolutionGraph, disc: dict[str, Fraction], site):
    """Blow up one point of the configuration, transporting discrepancies.

    Returns (new graph, new discrepancies).  The new exceptional curve is
    rational with self-intersection -1; a curve through the blown-up point
    drops its self-intersection by one, and the new log discrepancy is
    a_1 + 1 at a free point and a_1 + a_2 at an intersection point.  The
    result is never a minimal log resolution, so the flag is cleared.
    """
    new_id = _fresh_id(graph)
    if isinstance(site, FreePoint):
        if site.vertex not in set(graph.ids()):
            raise InvalidSite(f"no vertex {site.vertex!r}")
        vertices = [
            CurveVertex(v.id, v.genus, v.self_int - 1) if v.id == site.vertex else v
            for v in graph.vertices
        ]
        vertices.append(CurveVertex(new_id, 0, -1))
        edges = list(graph.edges) + [Edge(new_id, site.vertex, 1)]
        new_disc = dict(disc)
        new_disc[new_id] = Fraction(disc[site.vertex]) + 1
    elif isinstance(site, IntersectionPoint):
        pair = frozenset((site.a, site.b))
        if len(pair) != 2 or graph.edge_multiplicity(site.a, site.b) == 0:
            raise InvalidSite(f"no intersection between {site.a!r} and {site.b!r}")
        vertices = [
            CurveVertex(v.id, v.genus, v.self_int - 1) if v.id in pair else v
            for v in graph.vertices
        ]
        vertices.append(CurveVertex(new_id, 0, -1))
        edges = []
        dropped = False
        for e in graph.edges:
            if not dropped and e.pair() == pair:
                dropped = True
                if e.mult > 1:
                    edges.append(Edge(e.a, e.b, e.mult - 1))
            else:
                edges.append(e)
        edges.append(Edge(new_id, site.a, 1))
        edges.append(Edge(new_id, site.b, 1))
        new_disc = dict(disc)
        new_disc[new_id] = Fraction(disc[site.a]) + Fraction(disc[site.b])
    else:
        raise InvalidSite(f"unsupported site {site!r}")
    out = ResolutionGraph(vertices, edges, graph.kind, minimal=False)
    return out, new_disc
