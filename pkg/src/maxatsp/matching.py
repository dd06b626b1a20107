"""Exact maximum-weight matching primitives.

Bipartite assignment goes through SciPy's linear_sum_assignment when every
partial sum is exactly representable as a float, and through the general
matching engine otherwise.  General perfect matchings use the blossom
implementation in networkx, which stays in integer arithmetic for integer
weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

_FLOAT_EXACT = 2**52


class InfeasibleAssignmentError(ValueError):
    pass


class NoPerfectMatchingError(ValueError):
    pass


@dataclass
class UndirectedWeightedGraph:
    n: int
    edges: list[tuple[int, int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen = set()
        for u, v, _ in self.edges:
            self._check(u, v, seen)

    def _check(self, u: int, v: int, seen: set) -> None:
        if u == v:
            raise ValueError(f"self-loop on vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)

    def add_edge(self, u: int, v: int, weight: int) -> None:
        seen = {(min(a, b), max(a, b)) for a, b, _ in self.edges}
        self._check(u, v, seen)
        self.edges.append((u, v, weight))


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    weight: int

    def mate(self) -> dict[int, int]:
        m = {}
        for u, v in self.pairs:
            m[u] = v
            m[v] = u
        return m

    def is_perfect(self, n: int) -> bool:
        return 2 * len(self.pairs) == n and len(self.mate()) == n


def _assignment_via_matching(costs: list[list[int]], forbid_diagonal: bool) -> list[int]:
    n = len(costs)
    g = UndirectedWeightedGraph(2 * n)
    for u in range(n):
        for v in range(n):
            if forbid_diagonal and u == v:
                continue
            g.edges.append((u, n + v, costs[u][v]))
    m = max_weight_perfect_matching(g)
    sigma = [0] * n
    for a, b in m.pairs:
        u, v = (a, b) if a < n else (b, a)
        sigma[u] = v - n
    return sigma


def max_weight_assignment(costs: Sequence[Sequence[int]], forbid_diagonal: bool = True) -> list[int]:
    """Permutation maximizing the sum of ``costs[v][sigma[v]]``.

    With ``forbid_diagonal`` the permutation has no fixed points.
    """
    n = len(costs)
    if n < 2 and forbid_diagonal:
        raise InfeasibleAssignmentError("a derangement needs at least two elements")
    rows = [list(map(int, r)) for r in costs]
    if any(len(r) != n for r in rows):
        raise ValueError("cost matrix must be square")
    biggest = max((abs(x) for r in rows for x in r), default=0)
    if (biggest + 1) * (n + 1) * 4 >= _FLOAT_EXACT:
        sigma = _assignment_via_matching(rows, forbid_diagonal)
    else:
        mat = np.array(rows, dtype=np.float64)
        if forbid_diagonal:
            # any assignment using the diagonal loses to every derangement
            np.fill_diagonal(mat, -float((biggest + 1) * (n + 1)))
        r, c = linear_sum_assignment(mat, maximize=True)
        sigma = [0] * n
        for i, j in zip(r.tolist(), c.tolist()):
            sigma[i] = j
    if forbid_diagonal and any(sigma[v] == v for v in range(n)):
        raise InfeasibleAssignmentError("assignment solver returned a fixed point")
    return sigma


def max_weight_perfect_matching(g: UndirectedWeightedGraph) -> Matching:
    """Maximum-weight perfect matching of ``g``; zero-weight edges count."""
    if g.n % 2:
        raise NoPerfectMatchingError(f"odd vertex count {g.n}")
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    for u, v, w in g.edges:
        graph.add_edge(u, v, weight=w)
    mate = nx.max_weight_matching(graph, maxcardinality=True, weight="weight")
    if 2 * len(mate) != g.n:
        raise NoPerfectMatchingError(
            f"maximum matching covers {2 * len(mate)} of {g.n} vertices")
    pairs = tuple(sorted((min(u, v), max(u, v)) for u, v in mate))
    weight = sum(graph[u][v]["weight"] for u, v in pairs)
    return Matching(pairs, weight)
