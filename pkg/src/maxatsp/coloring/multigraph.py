"""Multigraphs G1 = C_max + 2 C1 and G2 = 2 C_max + 2 C1 + 2 C2 as edge copies."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from ..cycle_cover import CycleCover
from ..gadgets import RelaxedCover
from ..instance import Instance

# a coloring maps copy ids to colors; absent ids are uncolored
Coloring = dict[int, int]

K4 = (1, 2, 3, 4)
K4_PRIME = (5, 6, 7, 8)
K8 = K4 + K4_PRIME


@dataclass(frozen=True)
class EdgeCopy:
    u: int
    v: int
    layer: str   # "cmax", "c1" or "c2"
    copy: int    # which copy of that cover contributed it
    half: bool   # contributed by a single half-edge

    @property
    def edge(self) -> tuple[int, int]:
        return self.u, self.v


@dataclass
class LayeredMultigraph:
    copies: list[EdgeCopy] = field(default_factory=list)

    @cached_property
    def by_edge(self) -> dict[tuple[int, int], list[int]]:
        d: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, c in enumerate(self.copies):
            d[c.edge].append(i)
        return dict(d)

    def multiplicity(self, u: int, v: int) -> int:
        return len(self.by_edge.get((u, v), ()))

    def weight(self, inst: Instance) -> int:
        return sum(copy_weight(inst, c) for c in self.copies)

    def ids(self, layer: str | None = None, copy: int | None = None) -> list[int]:
        return [i for i, c in enumerate(self.copies)
                if (layer is None or c.layer == layer) and (copy is None or c.copy == copy)]


def copy_weight(inst: Instance, c: EdgeCopy) -> int:
    """A single half-edge of a cover appears twice in 2C, i.e. as one whole copy."""
    return inst.w(c.u, c.v)


def layer_copies(cmax: CycleCover, cover: RelaxedCover, name: str, cmax_copy: int = 0) -> list[EdgeCopy]:
    """One copy of C_max, two copies per whole edge of ``cover``, one per single half."""
    out = [EdgeCopy(u, v, "cmax", cmax_copy, False) for u, v in sorted(cmax.edges)]
    for u, v in sorted(cover.full_edges):
        out.append(EdgeCopy(u, v, name, 0, False))
        out.append(EdgeCopy(u, v, name, 1, False))
    for h in sorted(cover.single_halves):
        out.append(EdgeCopy(h.u, h.v, name, 0, True))
    return out


def build_g1(cmax: CycleCover, c1: RelaxedCover) -> LayeredMultigraph:
    return LayeredMultigraph(layer_copies(cmax, c1, "c1"))


def build_g2(cmax: CycleCover, c1: RelaxedCover, c2: RelaxedCover) -> LayeredMultigraph:
    """G1's copies first (C_max copy 0), then C_max copy 1 with C2."""
    return LayeredMultigraph(layer_copies(cmax, c1, "c1", 0) + layer_copies(cmax, c2, "c2", 1))


def class_weights(inst: Instance, g: LayeredMultigraph, a: Coloring) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for i, color in a.items():
        out[color] += copy_weight(inst, g.copies[i])
    return dict(out)
