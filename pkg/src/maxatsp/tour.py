"""From color classes to a tour, and the end-to-end solver."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .alternating import necessity_filter
from .coloring import ColoringOutcome, LayeredMultigraph, class_weights, color_g1, color_g2
from .coloring.multigraph import Coloring
from .cycle_cover import CycleCover, drop_lightest_and_collect_paths, is_hard, max_cycle_cover
from .gadgets import (RelaxedCover, build_g1_graph, build_g2_graph, find_problematic_cycles,
                      solve_gadget_graph)
from .instance import Instance, Tour, raw_tour_weight, render_instance
from .oracle import held_karp_max

log = logging.getLogger(__name__)

REPORT_SCHEMA = "maxatsp-report/1"
EXACT_THRESHOLD = 13
Edge = tuple[int, int]


@dataclass(frozen=True)
class PathSet:
    """Vertex-disjoint directed paths given by their edges; weight in internal units."""

    edges: frozenset[Edge]
    weight: int

    @classmethod
    def from_edges(cls, inst: Instance, edges: Iterable[Edge]) -> PathSet:
        edges = frozenset(edges)
        succ: dict[int, int] = {}
        pred: dict[int, int] = {}
        for u, v in sorted(edges):
            if u in succ or v in pred:
                raise ValueError(f"paths are not vertex-disjoint at edge {(u, v)}")
            succ[u] = v
            pred[v] = u
        for start in succ:
            v, steps = start, 0
            while v in succ:
                v = succ[v]
                steps += 1
                if v == start or steps > len(succ):
                    raise ValueError("edge set contains a cycle")
        return cls(edges, sum(inst.w(u, v) for u, v in edges))

    def paths(self, n: int) -> list[list[int]]:
        """All maximal paths, isolated vertices included, ordered by first vertex."""
        succ = dict(self.edges)
        heads = {v for _, v in self.edges}
        out = []
        for v in range(n):
            if v in heads:
                continue
            p = [v]
            while p[-1] in succ:
                p.append(succ[p[-1]])
            out.append(p)
        return out


def best_class(inst: Instance, g: LayeredMultigraph, a: Coloring) -> tuple[int, PathSet, dict[int, int]]:
    """(color, path set, per-class weights) of the heaviest class; ties go to the lower color."""
    weights = class_weights(inst, g, a)
    if not weights:
        return 0, PathSet(frozenset(), 0), {}
    color = max(sorted(weights), key=lambda k: weights[k])
    edges = [g.copies[i].edge for i, k in a.items() if k == color]
    if len(edges) != len(set(edges)):
        raise ValueError("a color class holds two copies of one edge")
    return color, PathSet.from_edges(inst, edges), weights


def patch_to_tour(inst: Instance, p: PathSet) -> Tour:
    """Join paths greedily by the heaviest end-to-start edge; ties by vertex ids."""
    paths = p.paths(inst.n)
    while len(paths) > 1:
        best = None
        for i, a in enumerate(paths):
            for j, b in enumerate(paths):
                if i == j:
                    continue
                key = (-inst.w(a[-1], b[0]), a[-1], b[0])
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, i, j = best
        merged = paths[i] + paths[j]
        paths = [q for k, q in enumerate(paths) if k not in (i, j)] + [merged]
    return Tour(tuple(paths[0]))


def _num(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else str(x)


@dataclass
class SolveResult:
    tour: Tour
    branch: str
    certified: bool
    w_cmax: int
    w_c1: int | None = None
    w_c2: int | None = None
    class_weights: dict[int, int] = field(default_factory=dict)
    best_class_weight: int | None = None
    drop_lightest_weight: int | None = None
    tour_weight: int = 0
    opt: int | None = None
    route: str = "none"
    problematic: list[tuple[int, ...]] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    snapshots: list[tuple[str, str]] = field(default_factory=list)
    cmax: CycleCover | None = None
    c1: RelaxedCover | None = None
    c2: RelaxedCover | None = None
    coloring: ColoringOutcome | None = None

    def ratio(self) -> Fraction | None:
        if self.opt is None:
            return None
        return Fraction(1) if self.opt == 0 else Fraction(self.tour_weight, self.opt)

    def report(self, inst: Instance) -> dict[str, Any]:
        def val(raw: int | None) -> int | str | None:
            return None if raw is None else _num(inst.value(raw))

        r = self.ratio()
        return {
            "schema": REPORT_SCHEMA,
            "n": inst.n,
            "branch": self.branch,
            "w_cmax": val(self.w_cmax),
            "w_c1": val(self.w_c1),
            "w_c2": val(self.w_c2),
            "class_weights": [val(self.class_weights[k]) for k in sorted(self.class_weights)],
            "best_class_weight": val(self.best_class_weight),
            "drop_lightest_weight": val(self.drop_lightest_weight),
            "tour": list(self.tour.order),
            "tour_weight": val(self.tour_weight),
            "opt": val(self.opt),
            "ratio": None if r is None else _num(r),
            "ratio_float": None if r is None else float(r),
            "certified": self.certified,
            "coloring_route": self.route,
            "problematic_cycles": [list(c) for c in self.problematic],
            "events": self.events,
        }


def _drop_lightest_tour(inst: Instance, cmax: CycleCover) -> tuple[Tour, int]:
    edges = [(p[i], p[i + 1]) for p in drop_lightest_and_collect_paths(inst, cmax)
             for i in range(len(p) - 1)]
    ps = PathSet.from_edges(inst, edges)
    return patch_to_tour(inst, ps), ps.weight


def _cover_paths_tour(inst: Instance, c: RelaxedCover) -> tuple[Tour, int]:
    """Whole edges of ``c`` with the lightest edge of every cycle removed, patched."""
    edges = set(c.full_edges)
    for comp in c.components:
        if comp.kind == "cycle":
            edges.discard(min(comp.edges, key=lambda e: (inst.w(*e), e)))
    ps = PathSet.from_edges(inst, edges)
    return patch_to_tour(inst, ps), ps.weight


def _hamiltonian(c: RelaxedCover, n: int) -> Tour | None:
    comps = c.components
    if c.is_integral and len(comps) == 1 and comps[0].kind == "cycle" and len(comps[0].vertices) == n:
        return Tour(comps[0].vertices)
    return None


def compute_c1(inst: Instance, cmax: CycleCover) -> RelaxedCover:
    c1, _ = solve_gadget_graph(build_g1_graph(inst, cmax))
    return necessity_filter(inst, c1, cmax)


def compute_c2(inst: Instance, cmax: CycleCover, c1: RelaxedCover) -> RelaxedCover:
    c2, _ = solve_gadget_graph(build_g2_graph(inst, cmax, c1))
    return necessity_filter(inst, c2, cmax, c1)


def solve(inst: Instance, oracle: bool | None = None, dot: bool = False) -> SolveResult:
    """Run the full pipeline; ``oracle=None`` computes OPT when n is at most 13."""
    n = inst.n
    if oracle is None:
        oracle = n <= EXACT_THRESHOLD
    opt = held_karp_max(inst) if oracle or n <= 3 else None
    cmax = max_cycle_cover(inst)
    if n <= 3:
        tour = Tour(tuple(opt.certificate))
        res = SolveResult(tour, "A", True, cmax.weight, cmax=cmax)
    else:
        res = _approximate(inst, cmax, dot)
    res.tour_weight = raw_tour_weight(inst, res.tour)
    res.opt = opt.value if opt is not None and oracle else None
    if not res.certified:
        log.warning("non-certified run (%s); instance:\n%s", res.route, render_instance(inst))
    return res


def _approximate(inst: Instance, cmax: CycleCover, dot: bool) -> SolveResult:
    drop_tour, drop_weight = _drop_lightest_tour(inst, cmax)
    if not any(is_hard(inst, c) for c in cmax.cycles):
        return SolveResult(drop_tour, "B", True, cmax.weight, drop_lightest_weight=drop_weight, cmax=cmax)
    c1 = compute_c1(inst, cmax)
    problematic = find_problematic_cycles(c1, cmax)
    res = SolveResult(drop_tour, "C", False, cmax.weight, w_c1=c1.weight(inst),
                      drop_lightest_weight=drop_weight, cmax=cmax, c1=c1,
                      problematic=problematic)
    ham = _hamiltonian(c1, inst.n)
    if ham is not None:
        # a relaxed cover weighs at least OPT, so a Hamiltonian one is an optimal tour
        res.tour, res.route, res.certified = ham, "hamiltonian-cover", True
        return res
    if problematic:
        res.branch = "D"
        c2 = compute_c2(inst, cmax, c1)
        res.c2 = c2
        res.w_c2 = c2.weight(inst)
        outcome = color_g2(cmax, c1, c2, dot=dot)
    else:
        outcome = color_g1(cmax, c1, dot=dot)
    res.coloring = outcome
    res.route = outcome.route
    res.events = list(outcome.events)
    res.snapshots = list(outcome.snapshots)
    res.certified = outcome.certified
    candidates = [(drop_weight, drop_tour)]
    if outcome.coloring and outcome.certified:
        _, ps, weights = best_class(inst, outcome.g, outcome.coloring)
        res.class_weights = weights
        res.best_class_weight = max(weights.values(), default=0)
        class_tour = patch_to_tour(inst, ps)
        candidates.insert(0, (raw_tour_weight(inst, class_tour), class_tour))
    if not outcome.certified:
        res.events.append("coloring not certified; falling back to the best candidate tour")
        if outcome.coloring:
            _, ps, weights = best_class(inst, outcome.g, outcome.coloring)
            res.class_weights = weights
            t = patch_to_tour(inst, ps)
            candidates.append((raw_tour_weight(inst, t), t))
        for cover in (c1, res.c2):
            if cover is not None:
                t, _ = _cover_paths_tour(inst, cover)
                candidates.append((raw_tour_weight(inst, t), t))
    res.tour = max(candidates, key=lambda c: c[0])[1]
    return res


def tour_edges(order: Sequence[int]) -> list[Edge]:
    return [(order[i], order[(i + 1) % len(order)]) for i in range(len(order))]
