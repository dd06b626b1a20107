"""Constructive coloring of one layer (C_max + 2 C) and the 8-color G2 merge.

Colors inside a layer are the logical values 1..4 and are mapped onto the
layer's palette at the end.  External edges are colored first (marked ones
from {1, 2, 3}, unmarked ones 4); each group of C components is then
completed by a bounded search that never closes a monochromatic cycle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from ..cycle_cover import CycleCover
from ..gadgets import RelaxedCover, find_problematic_cycles
from .classify import (Classification, MarkingError, MarkSet, classify_edges,
                       find_black_cycle, mark_edges)
from .multigraph import K4, K4_PRIME, K8, Coloring, LayeredMultigraph, build_g2, layer_copies
from .search import ColoringBudgetExceeded, complete, exhaustive_color
from .verify import monochromatic_cycles, verify_coloring

log = logging.getLogger(__name__)

Edge = tuple[int, int]
K3 = (1, 2, 3)
# node budgets inside the pipeline; exhaustive_color itself defaults to 10**7
GROUP_BUDGET = 20_000
GLOBAL_BUDGET = 20_000
EXHAUSTIVE_BUDGET = 100_000


@dataclass
class LayerContext:
    g: LayeredMultigraph
    cls: Classification
    ms: MarkSet
    skip: frozenset[int]                     # component ids left uncolored
    ext: dict[Edge, int] = field(default_factory=dict)
    cmax_id: dict[Edge, int] = field(default_factory=dict)
    events: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        for i, c in enumerate(self.g.copies):
            if c.layer == "cmax":
                self.cmax_id[c.edge] = i
        self.groups = self.cls.groups()

    def fixed(self) -> Coloring:
        return {self.cmax_id[e]: k for e, k in self.ext.items()}

    def group_copies(self, group: Sequence[int]) -> list[int]:
        comp_of = self.cls.comp_of
        members = set(group)
        out = []
        for i, c in enumerate(self.g.copies):
            if c.layer == "cmax" and self.cls.label[c.edge] == "external":
                continue
            if comp_of[c.u] in members and comp_of[c.v] in members:
                out.append(i)
        return out

    def shrink_acyclic(self, color: int) -> bool:
        comp_of = self.cls.comp_of
        edges = [(comp_of[u], comp_of[v]) for (u, v), k in self.ext.items() if k == color]
        return _acyclic(edges)


def _acyclic(edges: list[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
    state: dict[int, int] = {}

    def dfs(v: int) -> bool:
        state[v] = 1
        for w in adj.get(v, ()):
            s = state.get(w, 0)
            if s == 1 or (s == 0 and not dfs(w)):
                return False
        state[v] = 2
        return True

    return all(state.get(v, 0) or dfs(v) for v in list(adj))


# --- phase 1 --------------------------------------------------------------------

def _uncolored_marked(ctx: LayerContext, ci: int) -> list[Edge]:
    return [e for e in ctx.cls.coincident_external(ci) if e in ctx.ms.marked and e not in ctx.ext]


def _color_sides(ctx: LayerContext, ci: int, into: int, out: int | None) -> None:
    """Color the uncolored marked edges around ``ci``; ``out=None`` picks 2 or 3."""
    for e in _uncolored_marked(ctx, ci):
        if ctx.cls.is_in_edge(e, ci):
            ctx.ext[e] = into
            continue
        choices = (out,) if out is not None else (2, 3)
        for k in choices:
            ctx.ext[e] = k
            if ctx.shrink_acyclic(k):
                break


def phase1(ctx: LayerContext) -> None:
    cls, ms = ctx.cls, ctx.ms
    cycles = [ci for ci, c in enumerate(cls.components) if c.kind == "cycle"]
    order = cycles + [ci for ci, c in enumerate(cls.components) if c.kind == "path"]
    while True:
        changed = True
        while changed:
            changed = False
            for ci in sorted(ms.taily & ms.favourable):
                if not _uncolored_marked(ctx, ci):
                    continue
                for f in cls.components[ci].edges:
                    colored = [e for e in cls.coincident(f) if e in ctx.ext]
                    if len(colored) != 1:
                        continue
                    e = colored[0]
                    k = ctx.ext[e] if ctx.ext[e] in K3 else 1
                    other = min(set(K3) - {k})
                    if cls.is_in_edge(e, ci):
                        _color_sides(ctx, ci, k, other)
                    else:
                        _color_sides(ctx, ci, other, k)
                    changed = True
                    break
        changed = True
        while changed:
            changed = False
            for ci in sorted(ms.taily - ms.favourable):
                if not _uncolored_marked(ctx, ci):
                    continue
                done = [ctx.ext[e] for e in sorted(ms.tails.get(ci, ())) if e in ctx.ext]
                if not done:
                    continue
                k = done[0]
                k1, k2 = sorted(set(K3) - {k})
                snapshot = dict(ctx.ext)
                for a, b in ((k1, k2), (k2, k1)):
                    ctx.ext = dict(snapshot)
                    _color_sides(ctx, ci, a, b)
                    if {ctx.ext[e] for e in ms.tails.get(ci, ())} >= set(K3):
                        break
                changed = True
        pending = [ci for ci in order if _uncolored_marked(ctx, ci)]
        if not pending:
            break
        _color_sides(ctx, pending[0], 1, None)
    if not cls.cover.is_integral:
        _separate_antennas(ctx)


def _separate_antennas(ctx: LayerContext) -> None:
    for pair, ants in sorted(ctx.cls.pair_antennas.items()):
        colored = [a for a in ants if a in ctx.ext and ctx.ext[a] in K3]
        if len(colored) < 2 or ctx.ext[colored[0]] != ctx.ext[colored[1]]:
            continue
        a = colored[1]
        old = ctx.ext[a]
        for k in K3:
            if k == old:
                continue
            ctx.ext[a] = k
            if ctx.shrink_acyclic(k):
                break
        else:
            ctx.ext[a] = old
            ctx.events.append(f"antennas of {pair} share color {old}")


# --- phase 2 --------------------------------------------------------------------

def _group_completion(ctx: LayerContext, gi: int, fixed: Coloring | None = None) -> Coloring | None:
    fixed = ctx.fixed() if fixed is None else fixed
    try:
        return complete(ctx.g, K4, fixed, ctx.group_copies(ctx.groups[gi]), GROUP_BUDGET)
    except ColoringBudgetExceeded:
        ctx.events.append(f"group {gi} completion budget exhausted")
        return None


def _is_blocked(ctx: LayerContext, gi: int) -> bool:
    return _group_completion(ctx, gi) is None


def _group_of(ctx: LayerContext) -> dict[int, int]:
    return {ci: gi for gi, grp in enumerate(ctx.groups) for ci in grp}


def _active_groups(ctx: LayerContext) -> list[int]:
    return [gi for gi, grp in enumerate(ctx.groups) if not set(grp) & ctx.skip]


def commit_unmarked(ctx: LayerContext) -> None:
    for e in ctx.cls.external:
        if e not in ctx.ms.marked:
            ctx.ext[e] = 4


def phase2(ctx: LayerContext, max_rounds: int = 64) -> None:
    """Recolor tails, then wings, of blocked groups until none is blocked."""
    gof = _group_of(ctx)
    active = _active_groups(ctx)
    for _ in range(max_rounds):
        blocked = [gi for gi in active if _is_blocked(ctx, gi)]
        if not blocked:
            return
        gi = blocked[0]
        comps = ctx.groups[gi]
        tails = sorted({e for ci in comps for e in ctx.ms.tails.get(ci, ())})
        wings = sorted({e for ci in comps for e in ctx.ms.wings.get(ci, ())} - set(tails))
        fixed_move = False
        for e in tails + wings:
            old = ctx.ext.get(e)
            touched = {gof[ctx.cls.comp_of[v]] for v in e} & set(active)
            for k in [k for k in K3 if k != old] + [4]:
                ctx.ext[e] = k
                if not ctx.shrink_acyclic(k):
                    continue
                if any(_is_blocked(ctx, g) for g in sorted(touched)):
                    continue
                fixed_move = True
                ctx.events.append(f"phase2 recolored {e} {old}->{k}")
                break
            if fixed_move:
                break
            ctx.ext[e] = old
        if not fixed_move:
            ctx.events.append(f"phase2 left group {gi} blocked")
            return


# --- phase 3 --------------------------------------------------------------------

def phase3(ctx: LayerContext) -> tuple[Coloring, list[int]]:
    """Complete every active group in turn; returns (coloring, failed groups)."""
    a = ctx.fixed()
    failed = []
    for gi in _active_groups(ctx):
        res = _group_completion(ctx, gi, a)
        if res is None:
            failed.append(gi)
        else:
            a = res
    return a, failed


# --- drivers --------------------------------------------------------------------

@dataclass
class LayerResult:
    g: LayeredMultigraph
    coloring: Coloring                       # logical colors 1..4 over g's ids
    skipped: list[int]                       # copy ids left for borrowing
    route: str
    marks: MarkSet | None
    black_cycle: list[Edge] | None
    events: list[str]
    snapshots: list[tuple[str, str]]


def _skipped_copies(g: LayeredMultigraph, cls: Classification, skip: frozenset[int],
                    groups: list[list[int]]) -> list[int]:
    comps = {ci for grp in groups if set(grp) & skip for ci in grp}
    return [i for i, c in enumerate(g.copies)
            if not (c.layer == "cmax" and cls.label[c.edge] == "external")
            and cls.comp_of[c.u] in comps and cls.comp_of[c.v] in comps]


def color_layer(cmax: CycleCover, cover: RelaxedCover, name: str = "c1",
                skip_problematic: bool = False, dot: bool = False) -> LayerResult:
    g = LayeredMultigraph(layer_copies(cmax, cover, name))
    cls = classify_edges(cmax, cover)
    snaps: list[tuple[str, str]] = []
    skip: frozenset[int] = frozenset()
    if skip_problematic:
        probs = {frozenset(c) for c in find_problematic_cycles(cover, cmax)}
        skip = frozenset(ci for ci, comp in enumerate(cls.components)
                         if comp.kind == "cycle" and frozenset(comp.vertices) in probs)
    skipped = _skipped_copies(g, cls, skip, cls.groups())
    free = [i for i in range(len(g.copies)) if i not in set(skipped)]
    try:
        ms = mark_edges(cls)
    except MarkingError as err:
        log.info("marking failed: %s %s", err, err.witness)
        return _fallback_layer(g, free, skipped, None, [f"marking failed: {err.witness}"], snaps)
    ctx = LayerContext(g, cls, ms, skip)
    phase1(ctx)
    if dot:
        snaps.append(("phase1", coloring_dot(g, ctx.fixed())))
    commit_unmarked(ctx)
    phase2(ctx)
    if dot:
        snaps.append(("phase2", coloring_dot(g, ctx.fixed())))
    a, failed = phase3(ctx)
    if dot:
        snaps.append(("phase3", coloring_dot(g, a)))
    black = find_black_cycle(cls, ms)
    if not failed and _layer_ok(g, a, skipped):
        return LayerResult(g, a, skipped, "constructive", ms, black, ctx.events, snaps)
    ctx.events.append(f"phase3 failed on groups {failed}")
    return _fallback_layer(g, free, skipped, ctx, ctx.events, snaps, ms, black)


def _layer_ok(g: LayeredMultigraph, a: Coloring, skipped: list[int]) -> bool:
    rep = verify_coloring(g, a, allow_uncolored=True)
    return rep.ok and set(rep.uncolored) <= set(skipped)


def _fallback_layer(g, free, skipped, ctx, events, snaps, ms=None, black=None) -> LayerResult:
    if ctx is not None:
        try:
            res = complete(g, K4, ctx.fixed(), free, GLOBAL_BUDGET)
        except ColoringBudgetExceeded:
            res = None
        if res is not None:
            return LayerResult(g, res, skipped, "global-completion", ms, black, events, snaps)
    sub = {i: None for i in free}
    try:
        res = complete(g, K4, {}, list(sub), EXHAUSTIVE_BUDGET)
    except ColoringBudgetExceeded:
        events.append("exhaustive budget exhausted")
        res = None
    if res is not None:
        return LayerResult(g, res, skipped, "exhaustive", ms, black, events, snaps)
    events.append("layer admits no good coloring")
    return LayerResult(g, {}, skipped, "failed", ms, black, events, snaps)


@dataclass
class ColoringOutcome:
    g: LayeredMultigraph
    coloring: Coloring
    route: str
    certified: bool
    events: list[str] = field(default_factory=list)
    snapshots: list[tuple[str, str]] = field(default_factory=list)
    black_cycles: int = 0


def color_g1(cmax: CycleCover, c1: RelaxedCover, dot: bool = False) -> ColoringOutcome:
    """Four-color G1 = C_max + 2 C1 with colors 1..4."""
    r = color_layer(cmax, c1, "c1", skip_problematic=False, dot=dot)
    certified = r.route != "failed" and verify_coloring(r.g, r.coloring, colors=K4).ok
    return ColoringOutcome(r.g, r.coloring, r.route, certified, r.events, r.snapshots,
                           int(r.black_cycle is not None))


def color_g2(cmax: CycleCover, c1: RelaxedCover, c2: RelaxedCover, dot: bool = False) -> ColoringOutcome:
    """Eight-color G2: G1 with K4, C_max + 2 C2 with K4', problematic parts by borrowing."""
    g = build_g2(cmax, c1, c2)
    r1 = color_layer(cmax, c1, "c1", skip_problematic=True, dot=dot)
    r2 = color_layer(cmax, c2, "c2", skip_problematic=True, dot=dot)
    off = len(r1.g.copies)
    a: Coloring = {i: k for i, k in r1.coloring.items()}
    a.update({i + off: K4_PRIME[k - 1] for i, k in r2.coloring.items()})
    events = [f"G1 layer: {r1.route}", f"G2' layer: {r2.route}"] + r1.events + r2.events
    snaps = [(f"g1-{n}", s) for n, s in r1.snapshots] + [(f"g2p-{n}", s) for n, s in r2.snapshots]
    black = int(r1.black_cycle is not None) + int(r2.black_cycle is not None)
    route = "borrow"
    if r1.route == "failed" or r2.route == "failed":
        a = {}
    uncolored = [i for i in range(len(g.copies)) if i not in a]
    hot = {v for i in uncolored for v in g.copies[i].edge}
    res = None
    for radius in range(3):
        if radius:
            hot |= {v for c in g.copies if set(c.edge) & hot for v in c.edge}
        fixed = {i: k for i, k in a.items() if not set(g.copies[i].edge) & hot} if radius else a
        free = [i for i in range(len(g.copies)) if i not in fixed]
        try:
            res = complete(g, K8, fixed, free, GLOBAL_BUDGET)
        except ColoringBudgetExceeded:
            res = None
        if res is not None:
            route = "borrow" if radius == 0 else f"borrow-radius-{radius}"
            break
    if res is None:
        try:
            res = exhaustive_color(g, K8, budget=EXHAUSTIVE_BUDGET)
            route = "exhaustive"
            if res is None:
                events.append("G2 admits no good 8-coloring")
        except ColoringBudgetExceeded:
            events.append("G2 exhaustive search budget exhausted")
            res = None
    if res is None:
        events.append("G2 coloring failed")
        partial = a if verify_coloring(g, a, allow_uncolored=True, colors=K8).ok else {}
        return ColoringOutcome(g, partial, "failed", False, events, snaps, black)
    certified = verify_coloring(g, res, colors=K8).ok
    return ColoringOutcome(g, res, route, certified, events, snaps, black)


def coloring_dot(g: LayeredMultigraph, a: Coloring) -> str:
    """Graphviz text: one edge per copy, labeled with its color or '-'."""
    lines = ["digraph coloring {"]
    for i, c in enumerate(g.copies):
        lbl = str(a[i]) if i in a else "-"
        style = ", style=dashed" if c.half else ""
        lines.append(f'  {c.u} -> {c.v} [label="{c.layer}:{lbl}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def has_monochromatic_cycle(g: LayeredMultigraph, a: Coloring) -> bool:
    by: dict[int, list[Edge]] = {}
    for i, k in a.items():
        by.setdefault(k, []).append(g.copies[i].edge)
    return any(monochromatic_cycles(edges) for edges in by.values())
