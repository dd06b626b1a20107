"""Backtracking completion of partial colorings.

Colors are assigned per simple edge: an edge with k free copies receives k
distinct colors at once.  The search picks the edge with the fewest
feasible color sets, tracks per-color successor maps so that closing a
monochromatic cycle is detected in O(path length), and treats colors that
are still completely unused as interchangeable.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .multigraph import Coloring, LayeredMultigraph


class ColoringBudgetExceeded(RuntimeError):
    """The search visited more nodes than allowed without deciding."""


class _State:
    def __init__(self, colors: Sequence[int]):
        self.colors = tuple(colors)
        self.succ: dict[int, dict[int, int]] = {c: {} for c in self.colors}
        self.pred: dict[int, dict[int, int]] = {c: {} for c in self.colors}
        self.on_edge: dict[tuple[int, int], set[int]] = defaultdict(set)
        self.load: dict[int, int] = {c: 0 for c in self.colors}

    def can(self, c: int, u: int, v: int) -> bool:
        if u in self.succ[c] or v in self.pred[c] or c in self.on_edge[(u, v)]:
            return False
        s = self.succ[c]
        x = v
        while x in s:
            x = s[x]
            if x == u:
                return False
        return x != u

    def add(self, c: int, u: int, v: int) -> None:
        self.succ[c][u] = v
        self.pred[c][v] = u
        self.on_edge[(u, v)].add(c)
        self.load[c] += 1

    def remove(self, c: int, u: int, v: int) -> None:
        del self.succ[c][u]
        del self.pred[c][v]
        self.on_edge[(u, v)].discard(c)
        self.load[c] -= 1


def complete(g: LayeredMultigraph, colors: Iterable[int], fixed: Coloring,
             free: Iterable[int], budget: int = 200_000) -> Coloring | None:
    """Extend ``fixed`` to the copies in ``free``; None if no extension exists.

    Copies outside ``fixed`` and ``free`` stay uncolored and impose nothing.
    Raises ColoringBudgetExceeded when ``budget`` search nodes are spent.
    """
    colors = tuple(sorted(set(colors)))
    state = _State(colors)
    for i, c in sorted(fixed.items()):
        u, v = g.copies[i].edge
        if c not in state.succ:
            raise ValueError(f"fixed color {c} outside the palette")
        if not state.can(c, u, v):
            raise ValueError(f"fixed coloring is already invalid at copy {i}")
        state.add(c, u, v)

    need: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i in sorted(set(free)):
        if i in fixed:
            continue
        need[g.copies[i].edge].append(i)
    remaining = set(need)
    # vertex pairs joined by free copies in both directions share one color budget
    pairs = sorted({frozenset(e) for e in need if (e[1], e[0]) in need or (e[1], e[0]) in state.on_edge})
    result: Coloring = dict(fixed)
    nodes = 0

    def rec() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ColoringBudgetExceeded(f"more than {budget} nodes")
        if not remaining:
            return True
        opts: dict[tuple[int, int], list[int]] = {}
        best = None
        for e in sorted(remaining):
            o = [c for c in colors if state.can(c, *e)]
            k = len(need[e])
            if len(o) < k:
                return False
            opts[e] = o
            count = comb(len(o), k)
            if best is None or count < best[0]:
                best = (count, e)
        # a vertex needs as many distinct usable colors as it has free copies out (or in)
        out_cols: dict[int, set[int]] = defaultdict(set)
        in_cols: dict[int, set[int]] = defaultdict(set)
        out_need: dict[int, int] = defaultdict(int)
        in_need: dict[int, int] = defaultdict(int)
        for (u, v), o in opts.items():
            out_cols[u].update(o)
            in_cols[v].update(o)
            out_need[u] += len(need[(u, v)])
            in_need[v] += len(need[(u, v)])
        if any(out_need[v] > len(out_cols[v]) for v in out_need):
            return False
        if any(in_need[v] > len(in_cols[v]) for v in in_need):
            return False
        for pair in pairs:
            u, v = tuple(pair)
            both = [e for e in ((u, v), (v, u)) if e in opts]
            if len(both) < 2:
                continue
            if len(need[both[0]]) + len(need[both[1]]) > len(set(opts[both[0]]) | set(opts[both[1]])):
                return False
        e = best[1]
        k = len(need[e])
        unused = [c for c in colors if state.load[c] == 0]
        remaining.discard(e)
        for subset in combinations(opts[e], k):
            fresh = [c for c in subset if c in unused]
            if fresh != unused[:len(fresh)]:
                continue
            # colors on one edge share both endpoints, so adding them one by one is safe
            for c in subset:
                state.add(c, *e)
            if rec():
                for i, c in zip(need[e], subset):
                    result[i] = c
                return True
            for c in subset:
                state.remove(c, *e)
        remaining.add(e)
        return False

    return result if rec() else None


def exhaustive_color(g: LayeredMultigraph, colors: Iterable[int], fixed: Coloring | None = None,
                     budget: int = 10_000_000) -> Coloring | None:
    """Color every copy of ``g`` from ``colors`` or prove that it cannot be done."""
    fixed = dict(fixed or {})
    return complete(g, colors, fixed, range(len(g.copies)), budget)
