"""Permutations of S_p and Young's orthogonal (Young-Yamanouchi) irreps.

Rows and columns of an irrep of ``mu`` are indexed by branching paths
``(1) = mu^(1) < mu^(2) < ... < mu^(p) = mu``.  Paths are kept in last-letter
order: grouped by the penultimate diagram ``alpha`` (canonical order), then
recursively by the earlier diagrams.  All paths through a given ``alpha``
are therefore contiguous, so an index ``i`` of ``mu`` splits literally into
the pair ``(alpha, i_alpha)``.

Two orientations are supported.  ``"LR"`` adapts the irrep to the chain
S_1 < S_2 < ... < S_p acting on slots 1, 2, ..., p (slot p is added last).
``"RL"`` is the mirror image: it is the LR table conjugated by the reversal
``k -> p + 1 - k``, so slot 1 is the one added last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from .partitions import Partition, as_partition, irrep_dimension, remove_box

MAX_GROUP_ORDER = 8
ORIENTATIONS = ("LR", "RL")


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., p-1}``; ``images[k]`` is the image of ``k``.

    Serialized one-based.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, p: int) -> "Permutation":
        return cls(tuple(range(p)))

    @classmethod
    def transposition(cls, a: int, b: int, p: int) -> "Permutation":
        """The transposition ``(a b)`` with one-based labels."""
        images = list(range(p))
        images[a - 1], images[b - 1] = images[b - 1], images[a - 1]
        return cls(tuple(images))

    @classmethod
    def from_cycle(cls, cycle, p: int) -> "Permutation":
        """A single cycle given with one-based labels, e.g. ``(1, 2, 3)``."""
        images = list(range(p))
        cycle = [c - 1 for c in cycle]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a] = b
        return cls(tuple(images))

    def __call__(self, k: int) -> int:
        return self.images[k]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition ``(self * other)(k) = self(other(k))``."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[k] for k in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, v in enumerate(self.images):
            inv[v] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc, k = [], start
            while k not in seen:
                seen.add(k)
                cyc.append(k)
                k = self.images[k]
            out.append(tuple(cyc))
        return out

    def n_cycles(self) -> int:
        return len(self.cycles())

    def extend(self, p: int) -> "Permutation":
        """The same permutation acting on ``p >= degree`` points."""
        return Permutation(self.images + tuple(range(self.degree, p)))

    def to_json(self) -> list[int]:
        return [k + 1 for k in self.images]

    @classmethod
    def from_json(cls, data) -> "Permutation":
        return cls(tuple(int(k) - 1 for k in data))

    def __repr__(self) -> str:
        return f"Permutation({self.to_json()})"


def enumerate_group(p: int) -> list[Permutation]:
    if p < 1:
        raise ValueError(f"group degree must be positive, got {p}")
    if p > MAX_GROUP_ORDER:
        raise ValueError("group too large")
    return [Permutation(images) for images in itertools.permutations(range(p))]


def reversal(p: int) -> Permutation:
    """The involution ``k -> p + 1 - k``."""
    return Permutation(tuple(range(p - 1, -1, -1)))


@dataclass(frozen=True)
class BranchPath:
    chain: tuple[Partition, ...]

    def __post_init__(self) -> None:
        chain = tuple(as_partition(c) for c in self.chain)
        if not chain or chain[0] != Partition((1,)):
            raise ValueError("a branching path starts at (1)")
        for a, b in zip(chain, chain[1:]):
            if a not in remove_box(b):
                raise ValueError(f"{a} -> {b} does not add one box")
        object.__setattr__(self, "chain", chain)

    @property
    def shape(self) -> Partition:
        return self.chain[-1]

    @property
    def parent(self) -> Partition:
        """The penultimate diagram ``alpha`` of ``I_alpha``."""
        return self.chain[-2] if len(self.chain) > 1 else Partition(())

    def truncate(self) -> "BranchPath":
        return BranchPath(self.chain[:-1])

    def rows(self) -> tuple[int, ...]:
        """Row (zero-based) of the box added at each step: the Yamanouchi word."""
        out, prev = [], ()
        for c in self.chain:
            parts = c.parts
            for i, x in enumerate(parts):
                if i >= len(prev) or prev[i] != x:
                    out.append(i)
                    break
            prev = parts
        return tuple(out)

    def contents(self) -> tuple[int, ...]:
        """Content ``col - row`` of the box added at each step."""
        counts: dict[int, int] = {}
        out = []
        for r in self.rows():
            col = counts.get(r, 0)
            counts[r] = col + 1
            out.append(col - r)
        return tuple(out)

    @classmethod
    def from_rows(cls, rows) -> "BranchPath":
        parts: list[int] = []
        chain = []
        for r in rows:
            if r == len(parts):
                parts.append(1)
            else:
                parts[r] += 1
            chain.append(Partition(tuple(parts)))
        return cls(tuple(chain))

    def to_json(self) -> list[list[int]]:
        return [c.to_json() for c in self.chain]

    @classmethod
    def from_json(cls, data) -> "BranchPath":
        return cls(tuple(Partition(tuple(c)) for c in data))

    def __repr__(self) -> str:
        return "BranchPath(" + "->".join(str(c) for c in self.chain) + ")"


@lru_cache(maxsize=None)
def branch_paths(mu) -> tuple[BranchPath, ...]:
    """All branching paths ending in ``mu``, in last-letter order."""
    mu = as_partition(mu)
    if mu.weight == 0:
        raise ValueError("the empty diagram has no branching path")
    if mu.weight == 1:
        return (BranchPath((mu,)),)
    out = []
    for alpha in sorted(remove_box(mu)):
        for path in branch_paths(alpha):
            out.append(BranchPath(path.chain + (mu,)))
    return tuple(out)


def _adjacent_generator(paths: tuple[BranchPath, ...], k: int) -> np.ndarray:
    """Young's orthogonal form for the adjacent transposition ``(k, k+1)``, zero-based ``k``."""
    index = {path.rows(): n for n, path in enumerate(paths)}
    dim = len(paths)
    mat = np.zeros((dim, dim))
    for n, path in enumerate(paths):
        rows, cont = path.rows(), path.contents()
        axial = cont[k + 1] - cont[k]
        mat[n, n] = 1.0 / axial
        if abs(axial) > 1:
            swapped = list(rows)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            m = index[tuple(swapped)]
            mat[m, n] = np.sqrt(1.0 - 1.0 / axial**2)
    return mat


@dataclass(frozen=True)
class IrrepTable:
    mu: Partition
    paths: tuple[BranchPath, ...]
    matrices: dict = field(repr=False, compare=False)
    orientation: str = "LR"

    @property
    def dimension(self) -> int:
        return len(self.paths)

    @property
    def degree(self) -> int:
        return self.mu.weight

    def __call__(self, sigma: Permutation) -> np.ndarray:
        return self.matrices[sigma]

    def path_index(self, path: BranchPath) -> int:
        """Zero-based row/column index of ``path``."""
        try:
            return self.paths.index(path)
        except ValueError:
            raise ValueError(f"{path} is not a path of {self.mu}") from None

    def index_path(self, index: int) -> BranchPath:
        if not 0 <= index < self.dimension:
            raise ValueError(f"index {index} out of range for {self.mu}")
        return self.paths[index]

    def block(self, alpha) -> list[int]:
        """Indices whose penultimate diagram is ``alpha`` (contiguous)."""
        alpha = as_partition(alpha)
        return [n for n, path in enumerate(self.paths) if path.parent == alpha]

    def split_index(self, index: int) -> tuple[Partition, int]:
        """``i -> (alpha, i_alpha)`` with ``i_alpha`` zero-based inside the alpha block."""
        alpha = self.paths[index].parent
        return alpha, self.block(alpha).index(index)


@lru_cache(maxsize=None)
def young_yamanouchi(mu, orientation: str = "LR") -> IrrepTable:
    mu = as_partition(mu)
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    p = mu.weight
    if p > MAX_GROUP_ORDER:
        raise ValueError("group too large")
    paths = branch_paths(mu)
    assert len(paths) == irrep_dimension(mu)
    if orientation == "RL":
        base = young_yamanouchi(mu, "LR")
        rho = reversal(p)
        matrices = {s: base.matrices[rho * s * rho] for s in base.matrices}
        return IrrepTable(mu, paths, matrices, "RL")

    gens = [(Permutation.transposition(k + 1, k + 2, p), _adjacent_generator(paths, k))
            for k in range(p - 1)]
    ident = Permutation.identity(p)
    matrices = {ident: np.eye(len(paths))}
    frontier = [ident]
    while frontier:
        nxt = []
        for sigma in frontier:
            for s, mat in gens:
                tau = s * sigma
                if tau not in matrices:
                    matrices[tau] = mat @ matrices[sigma]
                    nxt.append(tau)
        frontier = nxt
    assert len(matrices) == factorial(p)
    return IrrepTable(mu, paths, matrices, "LR")
