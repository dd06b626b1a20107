"""Exact reference solvers for desk-scale instances.

Nothing here imports the solver modules it is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Any, Sequence

import numpy as np

from .instance import Instance

HELD_KARP_MAX_N = 16
BRUTE_COVER_MAX_N = 8
BRUTE_MATCHING_MAX_N = 14
BRUTE_SUPERSTRING_MAX = 8


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: Any
    certificate: Any


def held_karp_max(inst: Instance) -> OracleResult:
    """Maximum tour weight by dynamic programming over vertex subsets.

    The value is in internal units; the certificate is a vertex order
    starting at 0.
    """
    n = inst.n
    if n > HELD_KARP_MAX_N:
        raise OracleSizeError(f"Held-Karp limited to n <= {HELD_KARP_MAX_N}, got {n}")
    w = np.array(inst.weights, dtype=np.int64)
    if n == 2:
        return OracleResult(int(w[0, 1] + w[1, 0]), (0, 1))
    # subsets of vertices 1..n-1; dp[mask, j] = best path 0 -> ... -> j over mask
    m = n - 1
    size = 1 << m
    neg = np.iinfo(np.int64).min // 4
    dp = np.full((size, m), neg, dtype=np.int64)
    parent = np.full((size, m), -1, dtype=np.int64)
    for j in range(m):
        dp[1 << j, j] = w[0, j + 1]
    inner = w[1:, 1:]
    masks = np.arange(size)
    popcount = np.array([bin(x).count("1") for x in range(size)])
    bits = (masks[:, None] >> np.arange(m)[None, :]) & 1
    for k in range(1, m):
        layer = masks[popcount == k]
        vals = dp[layer]                                   # (L, m) over last vertex j
        cand = vals[:, :, None] + inner[None, :, :]        # (L, j, k)
        best_j = np.argmax(cand, axis=1)                   # (L, k)
        best = np.take_along_axis(cand, best_j[:, None, :], axis=1)[:, 0, :]
        for nxt in range(m):
            ok = bits[layer, nxt] == 0
            if not ok.any():
                continue
            src = layer[ok]
            dst = src | (1 << nxt)
            val = best[ok, nxt]
            valid = val > neg // 2
            dst, val, src_j = dst[valid], val[valid], best_j[ok, nxt][valid]
            better = val > dp[dst, nxt]
            dp[dst[better], nxt] = val[better]
            parent[dst[better], nxt] = src_j[better]
    full = size - 1
    closing = dp[full] + w[1:, 0]
    last = int(np.argmax(closing))
    value = int(closing[last])
    order = []
    mask, j = full, last
    while j >= 0:
        order.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    order.append(0)
    order.reverse()
    return OracleResult(value, tuple(order))


def brute_cycle_cover(inst: Instance) -> OracleResult:
    """Maximum weight over all derangements (successor functions)."""
    n = inst.n
    if n > BRUTE_COVER_MAX_N:
        raise OracleSizeError(f"derangement scan limited to n <= {BRUTE_COVER_MAX_N}")
    best, arg = None, None
    for perm in permutations(range(n)):
        if any(perm[v] == v for v in range(n)):
            continue
        total = sum(inst.weights[v][perm[v]] for v in range(n))
        if best is None or total > best:
            best, arg = total, perm
    return OracleResult(best, arg)


def brute_perfect_matching(n: int, edges: Sequence[tuple[int, int, int]]) -> OracleResult:
    """Optimum perfect matching by pairing the lowest unmatched vertex.

    Value is None when no perfect matching exists.
    """
    if n > BRUTE_MATCHING_MAX_N:
        raise OracleSizeError(f"brute matching limited to {BRUTE_MATCHING_MAX_N} vertices")
    adj: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for u, v, w in edges:
        adj[u][v] = w
        adj[v][u] = w

    def rec(free: frozenset) -> tuple[int | None, tuple]:
        if not free:
            return 0, ()
        u = min(free)
        best: int | None = None
        best_pairs: tuple = ()
        for v, w in adj[u].items():
            if v in free:
                sub, pairs = rec(free - {u, v})
                if sub is not None and (best is None or sub + w > best):
                    best, best_pairs = sub + w, ((min(u, v), max(u, v)),) + pairs
        return best, best_pairs

    value, pairs = rec(frozenset(range(n)))
    return OracleResult(value, tuple(sorted(pairs)) if value is not None else None)


def _naive_overlap(s: str, t: str) -> int:
    for k in range(min(len(s), len(t)) - 1, 0, -1):
        if s[-k:] == t[:k]:
            return k
    return 0


def brute_superstring(strings: Sequence[str]) -> OracleResult:
    """Shortest superstring by scanning every merge order."""
    uniq = sorted(set(strings))
    core = [s for s in uniq if not any(s != t and s in t for t in uniq)]
    if len(core) > BRUTE_SUPERSTRING_MAX:
        raise OracleSizeError(f"brute superstring limited to {BRUTE_SUPERSTRING_MAX} strings")
    if not core:
        return OracleResult(0, "")
    best = None
    for perm in permutations(core):
        merged = perm[0]
        for prev, cur in zip(perm, perm[1:]):
            merged += cur[_naive_overlap(prev, cur):]
        if best is None or (len(merged), merged) < (len(best), best):
            best = merged
    return OracleResult(len(best), best)
