"""Shortest common superstring through the overlap graph and the Max ATSP solver."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .instance import Instance, Tour
from .tour import solve


def approximation_factor(alpha: Fraction) -> Fraction:
    """Superstring factor implied by an alpha-approximation for Max ATSP."""
    return 2 + Fraction(11) * (1 - alpha) / (9 - 2 * alpha)


def _prefix_function(seq: Sequence) -> list[int]:
    pi = [0] * len(seq)
    for i in range(1, len(seq)):
        k = pi[i - 1]
        while k and seq[i] != seq[k]:
            k = pi[k - 1]
        if seq[i] == seq[k]:
            k += 1
        pi[i] = k
    return pi


def overlap(s: str, t: str) -> int:
    """Longest proper suffix of ``s`` that is a prefix of ``t``."""
    if not s or not t:
        raise ValueError("overlap needs nonempty strings")
    # the sentinel cannot equal any character, so borders never cross it
    pi = _prefix_function([*t, None, *s])
    cap = min(len(s), len(t)) - 1
    k = pi[-1]
    # a border that is too long is not the answer; its own borders still may be
    while k > cap:
        k = pi[k - 1]
    return k


def eliminate_substrings(strings: Sequence[str]) -> list[str]:
    """Drop duplicates and strings contained in another one; first occurrences keep their order."""
    uniq = list(dict.fromkeys(strings))
    if any(not s for s in uniq):
        raise ValueError("strings must be nonempty")
    return [s for s in uniq if not any(s != t and s in t for t in uniq)]


def build_overlap_instance(strings: Sequence[str]) -> Instance:
    k = len(strings)
    if k < 2:
        raise ValueError("need at least two strings")
    return Instance.from_values([[0 if i == j else overlap(strings[i], strings[j])
                                  for j in range(k)] for i in range(k)])


def merge_path(strings: Sequence[str], order: Sequence[int]) -> str:
    out = strings[order[0]]
    for a, b in zip(order, order[1:]):
        out += strings[b][overlap(strings[a], strings[b]):]
    return out


def superstring_from_tour(strings: Sequence[str], tour: Tour) -> str:
    """Open the tour at its smallest-overlap edge and merge along the path."""
    order = list(tour.order)
    if len(order) == 1:
        return strings[order[0]]
    k = len(order)
    # ties prefer the closing edge, so a tied tour is read in its given order
    cut = min(range(k), key=lambda i: (overlap(strings[order[i]], strings[order[(i + 1) % k]]), k - 1 - i))
    path = order[cut + 1:] + order[:cut + 1]
    return merge_path(strings, path)


@dataclass
class SuperstringResult:
    superstring: str
    strings: list[str]
    total_length: int
    compression: int
    tour: Tour | None
    certified: bool

    def stats(self) -> dict:
        return {
            "inputs": len(self.strings),
            "total_length": self.total_length,
            "length": len(self.superstring),
            "compression": self.compression,
            "certified": self.certified,
        }


def shortest_superstring(strings: Sequence[str]) -> SuperstringResult:
    kept = eliminate_substrings(strings)
    if len(kept) <= 1:
        s = kept[0] if kept else ""
        return SuperstringResult(s, kept, len(s), 0, None, True)
    inst = build_overlap_instance(kept)
    res = solve(inst, oracle=False)
    s = superstring_from_tour(kept, res.tour)
    total = sum(map(len, kept))
    return SuperstringResult(s, kept, total, total - len(s), res.tour, res.certified)
