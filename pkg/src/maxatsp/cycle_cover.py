"""Maximum-weight cycle covers and the cycle-level helpers built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .instance import Instance
from .matching import max_weight_assignment


def cycles_of(succ: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation, each rotated to start at its smallest vertex."""
    seen = [False] * len(succ)
    out = []
    for start in range(len(succ)):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = succ[v]
        out.append(tuple(cyc))
    return out


def cycle_edges(cycle: Sequence[int]) -> list[tuple[int, int]]:
    k = len(cycle)
    return [(cycle[i], cycle[(i + 1) % k]) for i in range(k)]


@dataclass(frozen=True)
class CycleCover:
    """Vertex-disjoint directed cycles covering every vertex, as a successor map."""

    succ: tuple[int, ...]
    weight: int

    @classmethod
    def from_succ(cls, inst: Instance, succ: Sequence[int]) -> CycleCover:
        succ = tuple(succ)
        n = inst.n
        if len(succ) != n or sorted(succ) != list(range(n)):
            raise ValueError("successor map must be a permutation")
        if any(succ[v] == v for v in range(n)):
            raise ValueError("a cycle cover has no 1-cycles")
        return cls(succ, sum(inst.w(v, succ[v]) for v in range(n)))

    @classmethod
    def from_cycles(cls, inst: Instance, cycles: Sequence[Sequence[int]]) -> CycleCover:
        succ = [-1] * inst.n
        for cyc in cycles:
            for u, v in cycle_edges(cyc):
                succ[u] = v
        return cls.from_succ(inst, succ)

    @cached_property
    def cycles(self) -> list[tuple[int, ...]]:
        return cycles_of(self.succ)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((v, s) for v, s in enumerate(self.succ))

    @cached_property
    def pred(self) -> tuple[int, ...]:
        p = [0] * len(self.succ)
        for v, s in enumerate(self.succ):
            p[s] = v
        return tuple(p)

    def cycle_of(self, v: int) -> tuple[int, ...]:
        for cyc in self.cycles:
            if v in cyc:
                return cyc
        raise KeyError(v)

    def two_cycles(self) -> list[tuple[int, int]]:
        return [c for c in self.cycles if len(c) == 2]


def max_cycle_cover(inst: Instance) -> CycleCover:
    """Maximum-weight cycle cover via a derangement assignment."""
    sigma = max_weight_assignment(inst.weights, forbid_diagonal=True)
    return CycleCover.from_succ(inst, sigma)


def cycle_weight(inst: Instance, cycle: Sequence[int]) -> int:
    return sum(inst.w(u, v) for u, v in cycle_edges(cycle))


def is_hard(inst: Instance, cycle: Sequence[int]) -> bool:
    """True iff every edge weighs strictly more than a quarter of the cycle."""
    total = cycle_weight(inst, cycle)
    return all(4 * inst.w(u, v) > total for u, v in cycle_edges(cycle))


def lightest_edge(inst: Instance, cycle: Sequence[int]) -> tuple[int, int]:
    return min(cycle_edges(cycle), key=lambda e: (inst.w(*e), e))


def drop_lightest_and_collect_paths(inst: Instance, cover: CycleCover) -> list[list[int]]:
    """One path per cycle: the cycle with its lightest edge removed."""
    paths = []
    for cyc in cover.cycles:
        u, v = lightest_edge(inst, cyc)
        i = cyc.index(v)
        paths.append(list(cyc[i:]) + list(cyc[:i]))
    return paths
