"""Half-edge covers and the matching graphs whose perfect matchings encode them.

Every edge (u, v) of the digraph is subdivided by a midpoint x_uv into a
tail half (u, x_uv) and a head half (x_uv, v), each carrying half of the
edge's weight.  A relaxed cover is a set of halves in which every original
vertex has exactly one outgoing and one incoming half.

The matching graph has vertices ``out_v``, ``in_v`` per vertex and
``e1_uv``, ``e2_uv`` per edge.  Matching ``out_u`` with ``e1_uv`` selects the
tail half of (u, v); matching ``in_v`` with ``e2_uv`` selects the head half.
Gadget vertices absorb e-vertices and thereby forbid half-edge patterns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from .cycle_cover import CycleCover, cycle_edges
from .instance import Instance
from .matching import Matching, UndirectedWeightedGraph, max_weight_perfect_matching

log = logging.getLogger(__name__)

TAIL = 0
HEAD = 1


class HalfEdge(NamedTuple):
    u: int
    v: int
    side: int  # TAIL: (u, x_uv), HEAD: (x_uv, v)

    @property
    def vertex(self) -> int:
        """The original vertex this half touches."""
        return self.u if self.side == TAIL else self.v

    def partner(self) -> HalfEdge:
        return HalfEdge(self.u, self.v, 1 - self.side)

    def weight(self, inst: Instance) -> int:
        return inst.w(self.u, self.v) // 2


def halves_of(u: int, v: int) -> tuple[HalfEdge, HalfEdge]:
    return HalfEdge(u, v, TAIL), HalfEdge(u, v, HEAD)


@dataclass(frozen=True)
class Component:
    kind: str  # "cycle" or "path"
    vertices: tuple[int, ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        if self.kind == "cycle":
            return cycle_edges(vs)
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class RelaxedCover:
    halves: frozenset[HalfEdge]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> RelaxedCover:
        return cls(frozenset(h for u, v in edges for h in halves_of(u, v)))

    @classmethod
    def from_cycle_cover(cls, cover: CycleCover) -> RelaxedCover:
        return cls.from_edges(cover.edges)

    def __contains__(self, h: object) -> bool:
        return h in self.halves

    def has_edge(self, u: int, v: int) -> bool:
        return HalfEdge(u, v, TAIL) in self.halves and HalfEdge(u, v, HEAD) in self.halves

    @cached_property
    def full_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((h.u, h.v) for h in self.halves
                         if h.side == TAIL and h.partner() in self.halves)

    @cached_property
    def single_halves(self) -> frozenset[HalfEdge]:
        return frozenset(h for h in self.halves if h.partner() not in self.halves)

    @property
    def is_integral(self) -> bool:
        return not self.single_halves

    def weight(self, inst: Instance) -> int:
        return sum(h.weight(inst) for h in self.halves)

    @cached_property
    def out_halves(self) -> dict[int, list[HalfEdge]]:
        d: dict[int, list[HalfEdge]] = {}
        for h in sorted(self.halves):
            if h.side == TAIL:
                d.setdefault(h.u, []).append(h)
        return d

    @cached_property
    def in_halves(self) -> dict[int, list[HalfEdge]]:
        d: dict[int, list[HalfEdge]] = {}
        for h in sorted(self.halves):
            if h.side == HEAD:
                d.setdefault(h.v, []).append(h)
        return d

    @cached_property
    def components(self) -> list[Component]:
        """Cycles and maximal paths of whole edges (single vertices allowed)."""
        succ = {u: v for u, v in self.full_edges}
        pred = {v: u for u, v in self.full_edges}
        vertices = sorted({h.vertex for h in self.halves} | set(succ) | set(pred))
        seen: set[int] = set()
        comps = []
        for start in vertices:
            if start in seen or start in pred:
                continue
            path = [start]
            seen.add(start)
            v = start
            while v in succ and succ[v] not in seen:
                v = succ[v]
                path.append(v)
                seen.add(v)
            comps.append(Component("path", tuple(path)))
        for start in vertices:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            v = succ[start]
            while v != start:
                cyc.append(v)
                seen.add(v)
                v = succ[v]
            comps.append(Component("cycle", tuple(cyc)))
        comps.sort(key=lambda c: min(c.vertices))
        return comps

    @property
    def cycles(self) -> list[tuple[int, ...]]:
        return [c.vertices for c in self.components if c.kind == "cycle"]

    @property
    def paths(self) -> list[tuple[int, ...]]:
        return [c.vertices for c in self.components if c.kind == "path"]


def as_relaxed(cover: CycleCover | RelaxedCover) -> RelaxedCover:
    if isinstance(cover, RelaxedCover):
        return cover
    return RelaxedCover.from_cycle_cover(cover)


# --- structures constrained by the cover definitions --------------------------

def _rotate_min(cyc: Sequence[int]) -> tuple[int, ...]:
    i = cyc.index(min(cyc))
    return tuple(cyc[i:]) + tuple(cyc[:i])


def _cycles_of_len(cycles: Iterable[Sequence[int]], k: int) -> list[tuple[int, ...]]:
    return [_rotate_min(c) for c in cycles if len(c) == k]


def _shares_edge(pair: Sequence[int], edges: frozenset[tuple[int, int]]) -> bool:
    u, v = pair
    return (u, v) in edges or (v, u) in edges


def constrained_pairs(cmax: CycleCover, c1: RelaxedCover | None = None) -> list[tuple[int, int]]:
    """2-cycles whose four halves are capped: those of C_max, plus (given C1)
    2-cycles of C1 sharing an edge with C_max."""
    pairs = {tuple(sorted(c)) for c in cmax.two_cycles()}
    if c1 is not None:
        for c in _cycles_of_len(c1.cycles, 2):
            if _shares_edge(c, cmax.edges):
                pairs.add(tuple(sorted(c)))
    return sorted(pairs)


def orient_triangle(inst: Instance, tri: Sequence[int]) -> tuple[tuple[int, int, int], bool]:
    """Rotate (p, q, r) so that 2 w(p, r) <= w(p, q) + w(q, r).

    Returns the rotation and whether the inequality holds; among valid
    rotations the one starting at the smallest vertex wins.
    """
    a, b, c = tri
    rots = [(a, b, c), (b, c, a), (c, a, b)]
    valid = [t for t in rots if 2 * inst.w(t[0], t[2]) <= inst.w(t[0], t[1]) + inst.w(t[1], t[2])]
    if valid:
        return min(valid), True
    worst = min(rots, key=lambda t: (2 * inst.w(t[0], t[2]) - inst.w(t[0], t[1]) - inst.w(t[1], t[2]), t))
    return worst, False


def constrained_triangles(cmax: CycleCover, c1: RelaxedCover) -> list[tuple[tuple[int, ...], str]]:
    """Triangles (in cycle order) subject to the four-half cap, with the reason.

    ``both``: C_max and C1 each have a triangle on these vertices (oriented as
    in C_max); ``cmax``: C_max triangle with a C1 2-cycle inside; ``c1``: C1
    triangle with a C_max 2-cycle inside.
    """
    out = []
    cmax_tris = _cycles_of_len(cmax.cycles, 3)
    c1_tris = _cycles_of_len(c1.cycles, 3)
    c1_pairs = [set(c) for c in _cycles_of_len(c1.cycles, 2)]
    cmax_pairs = [set(c) for c in cmax.two_cycles()]
    c1_sets = {frozenset(t) for t in c1_tris}
    for t in cmax_tris:
        if frozenset(t) in c1_sets:
            out.append((t, "both"))
        elif any(p <= set(t) for p in c1_pairs):
            out.append((t, "cmax"))
    cmax_sets = {frozenset(t) for t in cmax_tris}
    for t in c1_tris:
        if frozenset(t) not in cmax_sets and any(p <= set(t) for p in cmax_pairs):
            out.append((t, "c1"))
    return out


def constrained_quads(cmax: CycleCover, c1: RelaxedCover) -> list[tuple[tuple[int, ...], str]]:
    """4-cycles of one cover with two 2-cycles of the other sharing edges with it.

    A Hamiltonian 4-cycle is a tour and is never constrained.
    """
    n = len(cmax.succ)
    out = []
    c1_pairs = _cycles_of_len(c1.cycles, 2)
    for c in _cycles_of_len(cmax.cycles, 4):
        edges = frozenset(cycle_edges(c))
        if n > 4 and sum(_shares_edge(p, edges) for p in c1_pairs) >= 2:
            out.append((c, "cmax"))
    cmax_pairs = cmax.two_cycles()
    for c in _cycles_of_len(c1.cycles, 4):
        edges = frozenset(cycle_edges(c))
        if n > 4 and sum(_shares_edge(p, edges) for p in cmax_pairs) >= 2:
            out.append((c, "c1"))
    return out


# --- gadget graphs ------------------------------------------------------------

@dataclass
class GadgetGraph:
    labels: list[tuple] = field(default_factory=list)
    index: dict[tuple, int] = field(default_factory=dict)
    edges: dict[tuple[int, int], int] = field(default_factory=dict)
    gadgets: list[tuple[str, tuple]] = field(default_factory=list)
    audit: list[str] = field(default_factory=list)

    def vertex(self, label: tuple) -> int:
        if label not in self.index:
            self.index[label] = len(self.labels)
            self.labels.append(label)
        return self.index[label]

    def connect(self, a: tuple, b: tuple, weight: int = 0) -> None:
        i, j = self.vertex(a), self.vertex(b)
        key = (min(i, j), max(i, j))
        if key in self.edges:
            return
        self.edges[key] = weight

    def as_graph(self) -> UndirectedWeightedGraph:
        return UndirectedWeightedGraph(len(self.labels), [(u, v, w) for (u, v), w in self.edges.items()])

    def has_gadget(self, kind: str, key: tuple) -> bool:
        return (kind, key) in self.gadgets

    def add_pair_gadget(self, u: int, v: int) -> None:
        key = (min(u, v), max(u, v))
        if self.has_gadget("pair", key):
            return
        u, v = key
        self.gadgets.append(("pair", key))
        a, b = ("a", "pair", key), ("b", "pair", key)
        self.connect(a, ("e1", u, v))
        self.connect(a, ("e2", v, u))
        self.connect(b, ("e1", v, u))
        self.connect(b, ("e2", u, v))

    def add_triangle_gadget(self, p: int, q: int, r: int) -> None:
        key = (p, q, r)
        self.gadgets.append(("triangle", key))
        for x, y in ((p, q), (q, r), (r, p)):
            self.add_pair_gadget(x, y)
        a, b = ("a", "triangle", key), ("b", "triangle", key)
        for lbl in (("e2", p, q), ("e1", r, q), ("e1", r, p)):
            self.connect(a, lbl)
        for lbl in (("e1", p, q), ("e2", r, q), ("e2", r, p)):
            self.connect(b, lbl)

    def add_quad_gadget(self, cyc: Sequence[int]) -> None:
        key = tuple(cyc)
        self.gadgets.append(("quad", key))
        edges = cycle_edges(cyc)
        for x, y in edges:
            self.add_pair_gadget(x, y)
        a, b = ("a", "quad", key), ("b", "quad", key)
        for x, y in edges:
            self.connect(a, ("e2", x, y))
            self.connect(b, ("e1", x, y))


def _base_graph(inst: Instance) -> GadgetGraph:
    g = GadgetGraph()
    n = inst.n
    for v in range(n):
        g.vertex(("out", v))
        g.vertex(("in", v))
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            half = inst.w(u, v) // 2
            g.connect(("e1", u, v), ("e2", u, v), 0)
            g.connect(("out", u), ("e1", u, v), half)
            g.connect(("in", v), ("e2", u, v), half)
    return g


def build_g1_graph(inst: Instance, cmax: CycleCover) -> GadgetGraph:
    """Matching graph whose perfect matchings are relaxed covers improving C_max."""
    g = _base_graph(inst)
    for u, v in constrained_pairs(cmax):
        g.add_pair_gadget(u, v)
    return g


def build_g2_graph(inst: Instance, cmax: CycleCover, c1: RelaxedCover) -> GadgetGraph:
    """Matching graph for relaxed covers improving both C_max and C1."""
    g = _base_graph(inst)
    for u, v in constrained_pairs(cmax, c1):
        g.add_pair_gadget(u, v)
    for tri, reason in constrained_triangles(cmax, c1):
        (p, q, r), ok = orient_triangle(inst, tri)
        if not ok:
            msg = f"triangle {tri} ({reason}) has no rotation meeting the weight condition"
            g.audit.append(msg)
            log.warning(msg)
        g.add_triangle_gadget(p, q, r)
    for quad, _reason in constrained_quads(cmax, c1):
        g.add_quad_gadget(quad)
    return g


def extract_relaxed_cover(g: GadgetGraph, m: Matching) -> RelaxedCover:
    halves = set()
    for i, j in m.pairs:
        a, b = g.labels[i], g.labels[j]
        for x, y in ((a, b), (b, a)):
            if x[0] == "out" and y[0] == "e1":
                halves.add(HalfEdge(y[1], y[2], TAIL))
            elif x[0] == "in" and y[0] == "e2":
                halves.add(HalfEdge(y[1], y[2], HEAD))
    return RelaxedCover(frozenset(halves))


def solve_gadget_graph(g: GadgetGraph) -> tuple[RelaxedCover, Matching]:
    m = max_weight_perfect_matching(g.as_graph())
    return extract_relaxed_cover(g, m), m


def matching_for_edges(g: GadgetGraph, edges: Iterable[tuple[int, int]]) -> Matching | None:
    """A perfect matching selecting exactly the whole edges given, if one exists."""
    chosen = set(edges)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(g.labels)))
    forced = []
    for (i, j), w in g.edges.items():
        a, b = g.labels[i], g.labels[j]
        kinds = {a[0], b[0]}
        if kinds in ({"out", "e1"}, {"in", "e2"}):
            e = a[1:] if a[0].startswith("e") else b[1:]
            if tuple(e) in chosen:
                forced.append((i, j, w))
            continue
        if kinds == {"e1", "e2"} and tuple(a[1:]) in chosen:
            continue
        graph.add_edge(i, j, weight=w)
    for i, j, _ in forced:
        graph.remove_nodes_from([i, j])
    rest = nx.max_weight_matching(graph, maxcardinality=True)
    if 2 * len(rest) != graph.number_of_nodes():
        return None
    pairs = [(min(i, j), max(i, j)) for i, j, _ in forced]
    pairs += [(min(i, j), max(i, j)) for i, j in rest]
    weight = sum(g.edges[p] for p in pairs)
    return Matching(tuple(sorted(pairs)), weight)


# --- verification ---------------------------------------------------------------

@dataclass
class RelaxedReport:
    violations: dict[str, list] = field(default_factory=lambda: {"i": [], "ii": [], "iii": [], "iv": []})

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def passed(self, clause: str) -> bool:
        return not self.violations[clause]


def _pair_halves(u: int, v: int) -> list[HalfEdge]:
    return [*halves_of(u, v), *halves_of(v, u)]


def verify_relaxed_constraints(inst: Instance, c: RelaxedCover, cmax: CycleCover,
                               c1: RelaxedCover | None = None) -> RelaxedReport:
    """Check the relaxed-cover conditions; ``c1`` switches to the C2 variant."""
    rep = RelaxedReport()
    for v in range(inst.n):
        outs = len(c.out_halves.get(v, []))
        ins = len(c.in_halves.get(v, []))
        if outs != 1 or ins != 1:
            rep.violations["i"].append((v, outs, ins))
    for u, v in constrained_pairs(cmax, c1):
        present = [h for h in _pair_halves(u, v) if h in c]
        if len(present) > 2:
            rep.violations["ii"].append(((u, v), "more than two halves", present))
        elif len(present) == 2:
            h1, h2 = present
            if (h1.u, h1.v) != (h2.u, h2.v) and h1.vertex == h2.vertex:
                rep.violations["ii"].append(((u, v), "halves meet at one vertex", present))
    if c1 is None:
        return rep
    for tri, reason in constrained_triangles(cmax, c1):
        p, q, r = tri
        verts = (p, q, r)
        present = [h for x in verts for y in verts if x != y for h in halves_of(x, y) if h in c]
        if len(present) > 4 or len(present) % 2:
            rep.violations["iii"].append((tri, reason, "half count", len(present)))
        wt = inst.w(p, q) + inst.w(q, r) + inst.w(r, p)
        for v1, v2 in ((q, p), (r, q), (p, r)):
            (v3,) = set(verts) - {v1, v2}
            if 2 * inst.w(v1, v2) > wt - inst.w(v2, v1):
                quad = [*halves_of(v1, v2), HalfEdge(v3, v2, TAIL), HalfEdge(v1, v3, HEAD)]
                if all(h in c for h in quad):
                    rep.violations["iii"].append((tri, reason, "forbidden quadruple", (v1, v2)))
    for quad, reason in constrained_quads(cmax, c1):
        edges = cycle_edges(quad)
        present = [h for x, y in edges for e in ((x, y), (y, x)) for h in halves_of(*e) if h in c]
        if len(present) > 6 or len(present) % 2:
            rep.violations["iv"].append((quad, reason, len(present)))
    return rep


def find_problematic_cycles(c: RelaxedCover, cmax: CycleCover) -> list[tuple[int, ...]]:
    """Cycles of ``c`` that rule out a 4-coloring of C_max + 2c."""
    n = len(cmax.succ)
    cmax_pairs = [set(p) for p in cmax.two_cycles()]
    cmax_tri_sets = {frozenset(t) for t in cmax.cycles if len(t) == 3}
    out = []
    for cyc in c.cycles:
        k = len(cyc)
        if k == n:
            continue
        edges = frozenset(cycle_edges(cyc))
        if k == 2 and _shares_edge(cyc, cmax.edges):
            out.append(cyc)
        elif k == 3 and (frozenset(cyc) in cmax_tri_sets or any(p <= set(cyc) for p in cmax_pairs)):
            out.append(cyc)
        elif k == 4 and sum(_shares_edge(tuple(p), edges) for p in cmax_pairs) >= 2:
            out.append(cyc)
    return out


def gadget_dot(g: GadgetGraph, m: Matching | None = None) -> str:
    """Graphviz text for a gadget graph; matched edges drawn bold."""
    matched = set(m.pairs) if m else set()
    lines = ["graph gadget {"]
    for i, lbl in enumerate(g.labels):
        name = "_".join(str(x) for x in lbl if not isinstance(x, tuple)) + (
            "_" + "_".join(map(str, lbl[2])) if len(lbl) > 2 and isinstance(lbl[2], tuple) else "")
        lines.append(f'  {i} [label="{name}"];')
    for (i, j), w in sorted(g.edges.items()):
        style = ', style=bold' if (i, j) in matched else ""
        lines.append(f'  {i} -- {j} [label="{w}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
