"""Edge classification around the components of C1 and nice sets of marked edges."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from ..cycle_cover import CycleCover
from ..gadgets import HEAD, TAIL, Component, HalfEdge, RelaxedCover

log = logging.getLogger(__name__)

Edge = tuple[int, int]


class MarkingError(RuntimeError):
    """No nice set was found; ``witness`` names the first failing clause."""

    def __init__(self, msg: str, witness: tuple):
        super().__init__(msg)
        self.witness = witness


@dataclass
class Classification:
    cmax: CycleCover
    cover: RelaxedCover
    components: list[Component]
    comp_of: dict[int, int]
    label: dict[Edge, str]                  # C_max edge -> external / internal / halfy
    quasiexternal: frozenset[Edge]
    antennas: dict[Edge, Edge | None]       # halfy C_max edge -> its antenna
    pair_antennas: dict[tuple[int, int], list[Edge]]  # C_max 2-cycle -> its antennas

    @property
    def external(self) -> list[Edge]:
        return sorted(e for e, lbl in self.label.items() if lbl == "external")

    def coincident(self, f: Edge) -> tuple[Edge, Edge]:
        """The C_max edges leaving the tail and entering the head of ``f``."""
        x, y = f
        return (x, self.cmax.succ[x]), (self.cmax.pred[y], y)

    def coincident_external(self, ci: int) -> list[Edge]:
        """External edges incident with component ``ci``, sorted."""
        vs = self.components[ci].vertices
        out = set()
        for v in vs:
            for e in ((v, self.cmax.succ[v]), (self.cmax.pred[v], v)):
                if self.label[e] == "external":
                    out.add(e)
        return sorted(out)

    def is_in_edge(self, e: Edge, ci: int) -> bool:
        return self.comp_of[e[1]] == ci and self.comp_of[e[0]] != ci

    def groups(self) -> list[list[int]]:
        """Components linked by halfy C_max edges or single half-edges of the cover."""
        parent = list(range(len(self.components)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        links = [e for e, lbl in self.label.items() if lbl == "halfy"]
        links += [(h.u, h.v) for h in self.cover.single_halves]
        for u, v in links:
            a, b = find(self.comp_of[u]), find(self.comp_of[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
        out: dict[int, list[int]] = {}
        for ci in range(len(self.components)):
            out.setdefault(find(ci), []).append(ci)
        return [sorted(g) for _, g in sorted(out.items())]


def _antenna(cmax: CycleCover, cover: RelaxedCover, e: Edge) -> Edge | None:
    u, v = e
    full = cover.full_edges
    if HalfEdge(u, v, TAIL) in cover.halves:
        # h-cycle continues from the missing head at v through C1's whole edge into v
        preds = [x for x, y in full if y == v]
        if len(preds) != 1:
            return None
        v1 = preds[0]
        return v1, cmax.succ[v1]
    if HalfEdge(u, v, HEAD) in cover.halves:
        succs = [y for x, y in full if x == u]
        if len(succs) != 1:
            return None
        v1 = succs[0]
        return cmax.pred[v1], v1
    return None


def classify_edges(cmax: CycleCover, c1: RelaxedCover) -> Classification:
    comps = c1.components
    comp_of = {v: i for i, c in enumerate(comps) for v in c.vertices}
    for v in range(len(cmax.succ)):
        comp_of.setdefault(v, -1 - v)
    label: dict[Edge, str] = {}
    for e in sorted(cmax.edges):
        inside = [h in c1.halves for h in (HalfEdge(*e, TAIL), HalfEdge(*e, HEAD))]
        if sum(inside) == 1:
            label[e] = "halfy"
        elif comp_of[e[0]] != comp_of[e[1]]:
            label[e] = "external"
        else:
            label[e] = "internal"
    ext_at: dict[int, bool] = {}
    for v in range(len(cmax.succ)):
        ext_at[v] = (label[(v, cmax.succ[v])] == "external"
                     or label[(cmax.pred[v], v)] == "external")
    quasi = frozenset(e for e, lbl in label.items()
                      if lbl == "internal" and ext_at[e[0]] and ext_at[e[1]])
    antennas = {e: _antenna(cmax, c1, e) for e, lbl in label.items() if lbl == "halfy"}
    pair_antennas: dict[tuple[int, int], list[Edge]] = {}
    for pair in cmax.two_cycles():
        a, b = pair
        found = [antennas[e] for e in ((a, b), (b, a)) if antennas.get(e) is not None]
        if any(label.get(e) == "halfy" for e in ((a, b), (b, a))):
            pair_antennas[pair] = sorted(set(found))
    return Classification(cmax, c1, comps, comp_of, label, quasi, antennas, pair_antennas)


# --- marking --------------------------------------------------------------------

@dataclass
class MarkSet:
    marked: frozenset[Edge]
    tails: dict[int, frozenset[Edge]] = field(default_factory=dict)
    wings: dict[int, frozenset[Edge]] = field(default_factory=dict)
    taily: frozenset[int] = frozenset()
    favourable: frozenset[int] = frozenset()
    route: str = "greedy"


def _winged(cls: Classification, f: Edge, marked: frozenset[Edge]) -> bool:
    return all(cls.label[e] != "external" or e in marked for e in cls.coincident(f))


def compute_roles(cls: Classification, marked: frozenset[Edge] | set[Edge], route: str = "greedy") -> MarkSet:
    marked = frozenset(marked)
    tails: dict[int, frozenset[Edge]] = {}
    wings: dict[int, frozenset[Edge]] = {}
    taily = set()
    for ci, comp in enumerate(cls.components):
        ext = cls.coincident_external(ci)
        all_marked = all(e in marked for e in ext)
        t = set()
        for f in comp.edges:
            if not _winged(cls, f, marked):
                t.update(e for e in cls.coincident(f) if e in marked)
        if all_marked:
            t = {e for e in ext if e in marked}
        tails[ci] = frozenset(t)
        wings[ci] = frozenset(e for e in ext if e in marked and e not in t)
        if comp.kind == "cycle" and sum(e in marked for e in ext) == 2 * len(comp):
            taily.add(ci)
    favourable = set()
    for ci in taily:
        for f in cls.components[ci].edges:
            e1, e2 = cls.coincident(f)
            o1 = cls.comp_of[e1[1]] if cls.comp_of[e1[0]] == ci else cls.comp_of[e1[0]]
            o2 = cls.comp_of[e2[1]] if cls.comp_of[e2[0]] == ci else cls.comp_of[e2[0]]
            if o1 != o2 and e1 in wings.get(o1, ()) and e2 in wings.get(o2, ()):
                favourable.add(ci)
                break
    return MarkSet(marked, tails, wings, frozenset(taily), frozenset(favourable), route)


def nice_violations(cls: Classification, ms: MarkSet) -> list[tuple]:
    """Every failing clause of the nice-set definition, as (clause, witness)."""
    out: list[tuple] = []
    for e in ms.marked:
        if cls.label.get(e) != "external":
            out.append(("marked non-external", e))
    for ci, comp in enumerate(cls.components):
        winged = sum(_winged(cls, f, ms.marked) for f in comp.edges)
        if winged < len(comp) - 1:
            out.append(("winged count", ci))
    owner: dict[Edge, int] = {}
    for ci, comp in enumerate(cls.components):
        if comp.kind != "cycle":
            continue
        for e in ms.tails.get(ci, ()):
            if e in owner and owner[e] != ci:
                out.append(("tail of two cycles", e))
            owner[e] = ci
    for ci, comp in enumerate(cls.components):
        if comp.kind != "cycle" or len(comp) != 2 or len(ms.tails.get(ci, ())) != 1:
            continue
        shared = any(w in ms.wings.get(cj, ()) for w in ms.wings.get(ci, ())
                     for cj in range(len(cls.components)) if cj != ci)
        if not shared:
            out.append(("lone tail without shared wing", ci))
    if not cls.cover.is_integral:
        for pair, ants in sorted(cls.pair_antennas.items()):
            # an antenna that is itself halfy can never be marked; the clause then has no force
            markable = [a for a in ants if cls.label.get(a) == "external"]
            if markable and not any(a in ms.marked for a in markable):
                out.append(("no marked antenna", pair))
    return out


def _blocks(cls: Classification) -> list[list[Edge]]:
    """External edges split into independent marking blocks."""
    ext = cls.external
    parent = {e: e for e in ext}

    def find(x: Edge) -> Edge:
        while parent[x] != x:
            x = parent[x]
        return x

    def union(a: Edge, b: Edge) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    by_comp: dict[int, list[Edge]] = {}
    for e in ext:
        for v in e:
            by_comp.setdefault(cls.comp_of[v], []).append(e)
    for edges in by_comp.values():
        for e in edges[1:]:
            union(edges[0], e)
    for ants in cls.pair_antennas.values():
        ants = [a for a in ants if a in parent]
        for a in ants[1:]:
            union(ants[0], a)
    out: dict[Edge, list[Edge]] = {}
    for e in ext:
        out.setdefault(find(e), []).append(e)
    return [sorted(b) for _, b in sorted(out.items())]


def _score(cls: Classification, marked: set[Edge]) -> int:
    return len(nice_violations(cls, compute_roles(cls, marked)))


def mark_edges(cls: Classification, exhaustive_limit: int = 16) -> MarkSet:
    """A nice set of marked external edges.

    Starts from all external edges marked and greedily unmarks the edge that
    removes the most violations, sweeping cycles from longest to shortest.
    Blocks that stay violated are searched exhaustively by increasing number
    of unmarked edges.
    """
    marked = set(cls.external)
    order = sorted(range(len(cls.components)),
                   key=lambda ci: (-len(cls.components[ci]), min(cls.components[ci].vertices)))
    protected = {a for ants in cls.pair_antennas.values() for a in ants}
    score = _score(cls, marked)
    improved = True
    while score and improved:
        improved = False
        for ci in order:
            best = None
            for e in cls.coincident_external(ci):
                if e not in marked or e in protected:
                    continue
                s = _score(cls, marked - {e})
                if s < score and (best is None or s < best[0]):
                    best = (s, e)
            if best is not None:
                score = best[0]
                marked.discard(best[1])
                improved = True
    ms = compute_roles(cls, marked, "greedy")
    if not score:
        return ms
    marked = set(cls.external)
    for block in _blocks(cls):
        if len(block) > exhaustive_limit:
            raise MarkingError("block too large for exhaustive marking", ("block size", len(block)))
        found = None
        for k in range(len(block) + 1):
            for off in combinations(block, k):
                trial = (marked - set(block)) | (set(block) - set(off))
                if not _block_violations(cls, trial, set(block)):
                    found = trial
                    break
            if found is not None:
                break
        if found is None:
            viol = _block_violations(cls, marked, set(block))
            raise MarkingError("no nice marking exists for a block", viol[0])
        marked = found
    ms = compute_roles(cls, marked, "exhaustive")
    viol = nice_violations(cls, ms)
    if viol:
        raise MarkingError("marked set is not nice", viol[0])
    log.debug("marking fell back to exhaustive search")
    return ms


def _block_violations(cls: Classification, marked: set[Edge], block: set[Edge]) -> list[tuple]:
    touched = {cls.comp_of[v] for e in block for v in e}
    out = []
    for v in nice_violations(cls, compute_roles(cls, marked)):
        kind, wit = v
        if kind in ("winged count", "lone tail without shared wing") and wit in touched:
            out.append(v)
        elif kind in ("tail of two cycles", "marked non-external") and wit in block:
            out.append(v)
        elif kind == "no marked antenna" and set(cls.pair_antennas.get(wit, ())) & block:
            out.append(v)
    return out


def find_black_cycle(cls: Classification, ms: MarkSet) -> list[Edge] | None:
    """A cycle of unmarked C_max edges and doubly-marked C1 edges through an external edge."""
    adj: dict[int, list[Edge]] = {}
    for e, lbl in cls.label.items():
        if lbl != "halfy" and e not in ms.marked:
            adj.setdefault(e[0], []).append(e)
    for f in cls.cover.full_edges:
        if all(e in ms.marked for e in cls.coincident(f)):
            adj.setdefault(f[0], []).append(f)
    for start in sorted(e for e in cls.external if e not in ms.marked):
        # search a path from start's head back to its tail
        target = start[0]
        stack = [(start[1], [start])]
        seen = {start[1]}
        while stack:
            v, path = stack.pop()
            if v == target:
                return path
            for e in adj.get(v, ()):
                if e[1] not in seen:
                    seen.add(e[1])
                    stack.append((e[1], path + [e]))
    return None
