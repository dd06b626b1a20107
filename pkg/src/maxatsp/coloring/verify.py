"""Checks that every color class of a (partial) coloring is a set of vertex-disjoint paths."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .multigraph import Coloring, LayeredMultigraph


@dataclass
class ColoringReport:
    violations: list[tuple] = field(default_factory=list)
    uncolored: list[int] = field(default_factory=list)
    allow_uncolored: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and (self.allow_uncolored or not self.uncolored)


def monochromatic_cycles(edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Cycles in a graph of out-degree at most one (one per cycle found)."""
    succ = {}
    for u, v in edges:
        succ.setdefault(u, v)
    state: dict[int, int] = {}
    found = []
    for start in sorted(succ):
        if start in state:
            continue
        path = []
        v = start
        while v in succ and v not in state:
            state[v] = 1
            path.append(v)
            v = succ[v]
        if v in state and state[v] == 1 and v in path:
            found.append(path[path.index(v):])
        for x in path:
            state[x] = 2
    return found


def verify_coloring(g: LayeredMultigraph, a: Coloring, allow_uncolored: bool = False,
                    colors: Iterable[int] | None = None) -> ColoringReport:
    rep = ColoringReport(allow_uncolored=allow_uncolored)
    palette = set(colors) if colors is not None else None
    rep.uncolored = [i for i in range(len(g.copies)) if i not in a]
    classes: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, color in sorted(a.items()):
        if not 0 <= i < len(g.copies):
            rep.violations.append(("unknown copy", i))
            continue
        if palette is not None and color not in palette:
            rep.violations.append(("color outside palette", i, color))
        classes[color].append(g.copies[i].edge)
    for edge, ids in g.by_edge.items():
        used = [a[i] for i in ids if i in a]
        if len(used) != len(set(used)):
            rep.violations.append(("repeated color on one edge", edge, used))
    for color, edges in sorted(classes.items()):
        outs: dict[int, int] = defaultdict(int)
        ins: dict[int, int] = defaultdict(int)
        for u, v in edges:
            outs[u] += 1
            ins[v] += 1
        for v, d in sorted(outs.items()):
            if d > 1:
                rep.violations.append(("out-degree", color, v, d))
        for v, d in sorted(ins.items()):
            if d > 1:
                rep.violations.append(("in-degree", color, v, d))
        for cyc in monochromatic_cycles(edges):
            rep.violations.append(("monochromatic cycle", color, cyc))
    return rep
