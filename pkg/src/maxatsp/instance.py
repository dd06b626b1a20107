"""Problem instances: complete directed graphs with exact nonnegative weights.

Weights are parsed as exact rationals and stored as integers in units of
``1/unit``, where ``unit`` is twice the least common denominator of the
input.  The extra factor of two keeps every half-edge weight integral.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


class InstanceFormatError(ValueError):
    """Base class for instance-file parse errors."""


class MalformedRowError(InstanceFormatError):
    pass


class NegativeWeightError(InstanceFormatError):
    pass


class NonNumericTokenError(InstanceFormatError):
    pass


class NonZeroDiagonalError(InstanceFormatError):
    pass


@dataclass(frozen=True)
class Instance:
    """Complete digraph on ``n`` vertices.

    ``weights[u][v]`` is the weight of edge (u, v) in internal units; the
    real weight is ``weights[u][v] / unit``.  Instances are immutable.
    """

    weights: tuple[tuple[int, ...], ...]
    unit: int = 2

    def __post_init__(self) -> None:
        n = len(self.weights)
        if n < 2:
            raise ValueError("an instance needs at least two vertices")
        if self.unit <= 0 or self.unit % 2:
            raise ValueError("unit must be a positive even integer")
        for u, row in enumerate(self.weights):
            if len(row) != n:
                raise ValueError(f"row {u} has {len(row)} entries, expected {n}")
            for v, x in enumerate(row):
                if not isinstance(x, int):
                    raise TypeError("internal weights must be integers")
                if x < 0:
                    raise ValueError(f"negative weight on ({u}, {v})")
                if u == v and x != 0:
                    raise ValueError(f"nonzero diagonal entry at {u}")
                if x % 2:
                    raise ValueError("internal weights must be even")

    @classmethod
    def from_values(cls, matrix: Sequence[Sequence[int | Fraction | str]]) -> Instance:
        """Build an instance from real weights (ints, Fractions or numeric strings)."""
        values = [[Fraction(x) for x in row] for row in matrix]
        scale = 1
        for row in values:
            for x in row:
                scale = lcm(scale, x.denominator)
        unit = 2 * scale
        weights = tuple(tuple(int(x * unit) for x in row) for row in values)
        return cls(weights, unit)

    @property
    def n(self) -> int:
        return len(self.weights)

    def w(self, u: int, v: int) -> int:
        return self.weights[u][v]

    def value(self, raw: int) -> Fraction:
        """Convert an internal weight to the input's units."""
        return Fraction(raw, self.unit)

    def max_weight(self) -> int:
        return max(max(row) for row in self.weights)


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle given as a cyclic vertex order."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("tour order must be a permutation of 0..n-1")

    def __len__(self) -> int:
        return len(self.order)

    def edges(self) -> list[tuple[int, int]]:
        k = len(self.order)
        return [(self.order[i], self.order[(i + 1) % k]) for i in range(k)]


def raw_tour_weight(inst: Instance, tour: Tour) -> int:
    if len(tour) != inst.n:
        raise ValueError(f"tour has {len(tour)} vertices, instance has {inst.n}")
    return sum(inst.w(u, v) for u, v in tour.edges())


def tour_weight(inst: Instance, tour: Tour) -> Fraction:
    """Exact weight of ``tour`` in the instance's input units."""
    return inst.value(raw_tour_weight(inst, tour))


def _parse_token(token: str, row: int, col: int) -> Fraction:
    try:
        x = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise NonNumericTokenError(
            f"row {row}, column {col}: {token!r} is not a number") from None
    if x < 0:
        raise NegativeWeightError(f"row {row}, column {col}: negative weight {token}")
    return x


def load_instance(text: str) -> Instance:
    """Parse the instance text format: ``n`` followed by ``n`` rows of ``n`` numbers."""
    lines = [line.split() for line in text.splitlines()]
    lines = [tokens for tokens in lines if tokens]
    if not lines:
        raise MalformedRowError("empty instance file")
    header = lines[0]
    if len(header) != 1 or not header[0].isdigit():
        raise MalformedRowError(f"first line must hold the vertex count, got {' '.join(header)!r}")
    n = int(header[0])
    if n < 2:
        raise MalformedRowError(f"vertex count must be at least 2, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise MalformedRowError(f"expected {n} rows, found {len(rows)}")
    matrix = []
    for i, tokens in enumerate(rows):
        if len(tokens) != n:
            raise MalformedRowError(f"row {i} has {len(tokens)} entries, expected {n}")
        row = [_parse_token(tok, i, j) for j, tok in enumerate(tokens)]
        if row[i] != 0:
            raise NonZeroDiagonalError(f"diagonal entry {i} must be 0")
        matrix.append(row)
    return Instance.from_values(matrix)


def _format_value(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    sign = "-" if scaled < 0 else ""
    q = str(abs(scaled.numerator))
    q = q.rjust(digits + 1, "0")
    return f"{sign}{q[:-digits]}.{q[-digits:]}"


def render_instance(inst: Instance) -> str:
    lines = [str(inst.n)]
    for row in inst.weights:
        lines.append(" ".join(_format_value(inst.value(x)) for x in row))
    return "\n".join(lines) + "\n"


def random_instance(n: int, max_w: int, seed: int) -> Instance:
    """Uniform integer weights in ``[0, max_w]``, deterministic in ``seed``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if max_w < 0:
        raise ValueError("max_w must be nonnegative")
    rng = random.Random(seed)
    matrix = [[0 if u == v else rng.randint(0, max_w) for v in range(n)] for u in range(n)]
    return Instance.from_values(matrix)


def instance_from_edges(n: int, edges: Iterable[tuple[int, int, int | Fraction]]) -> Instance:
    """All-zero instance with the listed edges set to the given weights."""
    matrix: list[list[int | Fraction]] = [[0] * n for _ in range(n)]
    for u, v, x in edges:
        matrix[u][v] = x
    return Instance.from_values(matrix)
