"""Alternating cycles and h-cycles of a cover against C_max.

The symmetric difference of the half-edge sets of C_max and a relaxed
cover C splits uniquely into closed alternating cycles (whole edges only)
and alternating h-cycles, which start and end with a single half-edge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .cycle_cover import CycleCover
from .gadgets import TAIL, HalfEdge, RelaxedCover, as_relaxed, halves_of, verify_relaxed_constraints
from .instance import Instance

log = logging.getLogger(__name__)


class NotAlternatingError(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    """One element of an alternating structure: a whole edge or a single half."""

    halves: frozenset[HalfEdge]
    in_cover: bool

    @property
    def edge(self) -> tuple[int, int]:
        h = next(iter(self.halves))
        return h.u, h.v

    @property
    def is_half(self) -> bool:
        return len(self.halves) == 1


@dataclass(frozen=True)
class AlternatingStructure:
    pieces: tuple[Piece, ...]
    kind: str  # "cycle" or "h-cycle"

    @property
    def halves(self) -> frozenset[HalfEdge]:
        return frozenset(h for p in self.pieces for h in p.halves)


def _pieces(diff: set[HalfEdge], cover: RelaxedCover) -> list[Piece]:
    out = []
    seen = set()
    for h in sorted(diff):
        if h in seen:
            continue
        group = {h}
        if h.partner() in diff:
            group.add(h.partner())
        seen |= group
        out.append(Piece(frozenset(group), h in cover.halves))
    return out


def decompose(c: CycleCover | RelaxedCover, cmax: CycleCover) -> list[AlternatingStructure]:
    """Split C_max (+) c into alternating cycles and h-cycles.

    Every piece of the symmetric difference lands in exactly one structure.
    """
    cover = as_relaxed(c)
    diff = set(as_relaxed(cmax).halves) ^ set(cover.halves)
    pieces = _pieces(diff, cover)
    # endpoints at original vertices: ("out", v) for tail halves, ("in", v) for heads
    ends: dict[tuple[str, int], list[int]] = {}
    for idx, p in enumerate(pieces):
        for h in p.halves:
            key = ("out", h.u) if h.side == TAIL else ("in", h.v)
            ends.setdefault(key, []).append(idx)

    def other_end(idx: int, key: tuple[str, int]) -> tuple[str, int] | None:
        for h in pieces[idx].halves:
            k = ("out", h.u) if h.side == TAIL else ("in", h.v)
            if k != key:
                return k
        return None

    def partner(idx: int, key: tuple[str, int]) -> int | None:
        group = ends.get(key, [])
        rest = [j for j in group if j != idx]
        return rest[0] if rest else None

    used = [False] * len(pieces)
    out = []

    def walk(start: int, key: tuple[str, int] | None) -> list[int]:
        seq = [start]
        used[start] = True
        cur = start
        while key is not None:
            nxt = partner(cur, key)
            if nxt is None or used[nxt]:
                break
            seq.append(nxt)
            used[nxt] = True
            key = other_end(nxt, key)
            cur = nxt
        return seq

    for idx, p in enumerate(pieces):
        if used[idx] or not p.is_half:
            continue
        h = next(iter(p.halves))
        key = ("out", h.u) if h.side == TAIL else ("in", h.v)
        seq = walk(idx, key)
        out.append(AlternatingStructure(tuple(pieces[i] for i in seq), "h-cycle"))
    for idx, p in enumerate(pieces):
        if used[idx]:
            continue
        u, v = p.edge
        seq = walk(idx, ("in", v))
        out.append(AlternatingStructure(tuple(pieces[i] for i in seq), "cycle"))
    return out


def alternating_weight(inst: Instance, a: AlternatingStructure, relative_to: CycleCover | RelaxedCover) -> int:
    """Weight gained by applying ``a`` to ``relative_to`` (internal units)."""
    cover = as_relaxed(relative_to)
    total = 0
    for h in a.halves:
        w = h.weight(inst)
        total += -w if h in cover.halves else w
    return total


def _check_alternating(cover: RelaxedCover, a: AlternatingStructure) -> None:
    flags = []
    for p in a.pieces:
        inside = [h in cover.halves for h in p.halves]
        if all(inside):
            flags.append(True)
        elif not any(inside):
            flags.append(False)
        else:
            raise NotAlternatingError(f"piece {p.edge} is split by the cover")
    for x, y in zip(flags, flags[1:]):
        if x == y:
            raise NotAlternatingError("consecutive pieces share membership")
    if a.kind == "cycle" and len(flags) > 1 and flags[0] == flags[-1]:
        raise NotAlternatingError("cycle does not close alternately")


def apply(c: CycleCover | RelaxedCover, a: AlternatingStructure) -> RelaxedCover:
    """``c`` (+) ``a``."""
    cover = as_relaxed(c)
    _check_alternating(cover, a)
    return RelaxedCover(cover.halves ^ a.halves)


def is_necessary(inst: Instance, a: AlternatingStructure, c: RelaxedCover, cmax: CycleCover,
                 c1: RelaxedCover | None = None) -> bool:
    """An alternating cycle is necessary when applying it to ``c`` would
    produce a structure the cover definition forbids.  h-cycles are never
    filtered, so they report False."""
    if a.kind != "cycle":
        return False
    after = apply(c, a)
    rep = verify_relaxed_constraints(inst, after, cmax, c1)
    return not (rep.passed("ii") and rep.passed("iii") and rep.passed("iv"))


def necessity_filter(inst: Instance, c: RelaxedCover, cmax: CycleCover,
                     c1: RelaxedCover | None = None) -> RelaxedCover:
    """Apply non-necessary alternating cycles until only necessary ones remain.

    Each application gains the cycle's nonnegative alternating weight, so
    the cover never gets lighter.
    """
    rounds = 0
    while True:
        todo = [a for a in decompose(c, cmax)
                if a.kind == "cycle" and not is_necessary(inst, a, c, cmax, c1)]
        if not todo:
            break
        rounds += 1
        a = todo[0]
        gain = alternating_weight(inst, a, c)
        if gain < 0:
            log.warning("non-necessary cycle with negative gain %s; C_max is not maximal", gain)
        c = apply(c, a)
    if rounds > 1:
        log.debug("necessity filter applied %d cycles one at a time", rounds)
    return c


def cycle_from_edges(edges: Sequence[tuple[int, int]], in_cover: Sequence[bool]) -> AlternatingStructure:
    """Build an alternating cycle from whole edges (test and debugging helper)."""
    pieces = tuple(Piece(frozenset(halves_of(u, v)), f) for (u, v), f in zip(edges, in_cover))
    return AlternatingStructure(pieces, "cycle")
