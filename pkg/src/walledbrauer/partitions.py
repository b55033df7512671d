"""Young diagrams and the two counting formulas built on them.

A :class:`Partition` is an immutable, non-increasing tuple of positive parts.
The canonical ordering used everywhere in the package is lexicographically
decreasing, so ``(3) > (2, 1) > (1, 1, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator


@dataclass(frozen=True, order=False)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells ``(row, col)``, both zero-based, row by row."""
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for r in self.parts if r > j) for j in range(self.parts[0])))

    def hook(self, i: int, j: int) -> int:
        arm = self.parts[i] - j - 1
        leg = sum(1 for r in self.parts[i + 1:] if r > j)
        return arm + leg + 1

    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data) -> "Partition":
        return cls(tuple(data))

    def __lt__(self, other: "Partition") -> bool:
        # canonical order is lexicographically *decreasing*: (3) comes first
        return self.parts > other.parts

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


EMPTY = Partition(())


def as_partition(mu) -> Partition:
    if isinstance(mu, Partition):
        return mu
    return Partition(tuple(mu))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(p: int) -> list[Partition]:
    """All partitions of ``p`` in lexicographically decreasing order."""
    if p == 0:
        raise ValueError("empty weight")
    if p < 0:
        raise ValueError(f"negative weight {p}")
    return [Partition(parts) for parts in _partitions(p, p)]


def add_box(mu) -> list[Partition]:
    mu = as_partition(mu)
    parts = list(mu.parts)
    out = []
    for i in range(len(parts) + 1):
        if i == len(parts):
            out.append(Partition(tuple(parts) + (1,)))
        elif i == 0 or parts[i - 1] > parts[i]:
            new = parts.copy()
            new[i] += 1
            out.append(Partition(tuple(new)))
    return out


def remove_box(mu) -> list[Partition]:
    """Diagrams obtained by deleting one removable corner, top row first."""
    mu = as_partition(mu)
    parts = list(mu.parts)
    out = []
    for i in range(len(parts)):
        if i == len(parts) - 1 or parts[i] > parts[i + 1]:
            new = parts.copy()
            new[i] -= 1
            out.append(Partition(tuple(x for x in new if x > 0)))
    return out


def common_child(mu, nu) -> Partition | None:
    """The unique ``tau`` with ``tau = mu - box = nu - box``, for ``mu != nu``."""
    mu, nu = as_partition(mu), as_partition(nu)
    if mu.weight != nu.weight:
        raise ValueError(f"weight mismatch: {mu} vs {nu}")
    if mu == nu:
        return None
    shared = set(remove_box(mu)) & set(remove_box(nu))
    if len(shared) != 1:
        return None
    return shared.pop()


def box_related(mu, nu) -> bool:
    return common_child(mu, nu) is not None


def common_children(mu, nu) -> list[Partition]:
    """Children shared by ``mu`` and ``nu`` in canonical order (all children if equal)."""
    mu, nu = as_partition(mu), as_partition(nu)
    return sorted(set(remove_box(mu)) & set(remove_box(nu)))


@lru_cache(maxsize=None)
def _dimension(parts: tuple[int, ...]) -> int:
    mu = Partition(parts)
    hooks = prod(mu.hook(i, j) for i, j in mu.cells())
    return factorial(mu.weight) // hooks


def irrep_dimension(mu) -> int:
    """Dimension of the S_p irrep, by the hook length formula."""
    return _dimension(as_partition(mu).parts)


@lru_cache(maxsize=None)
def _multiplicity(parts: tuple[int, ...], d: int) -> int:
    mu = Partition(parts)
    if mu.height > d:
        return 0
    value = Fraction(1)
    for i, j in mu.cells():
        value *= Fraction(d + j - i, mu.hook(i, j))
    assert value.denominator == 1
    return int(value)


def multiplicity(mu, d: int) -> int:
    """Multiplicity of irrep ``mu`` in (C^d)^{otimes p}: the hook-content formula."""
    if d < 1:
        raise ValueError(f"local dimension must be positive, got {d}")
    return _multiplicity(as_partition(mu).parts, d)
