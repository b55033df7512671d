"""Irreducible matrix units of C[S_p] acting on (C^d)^{otimes p}.

``E^mu_ij = (d_mu / p!) sum_sigma phi^mu_ji(sigma^{-1}) V_sigma``.  The
orientation of the underlying irrep table decides which slot is the last one
of the branching chain: slot ``p`` for ``"LR"`` and slot ``1`` for ``"RL"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .partitions import Partition, as_partition, enumerate_partitions, multiplicity
from .symgroup import BranchPath, Permutation, enumerate_group, young_yamanouchi
from .oracle import VerificationReport
from .tensor import DenseOperator, partial_trace_array, perm_matrix


@dataclass(frozen=True)
class UnitLabel:
    mu: Partition
    row: BranchPath
    col: BranchPath
    orientation: str = "LR"

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", as_partition(self.mu))
        table = young_yamanouchi(self.mu, self.orientation)
        table.path_index(self.row)
        table.path_index(self.col)

    @classmethod
    def from_indices(cls, mu, i: int, j: int, orientation: str = "LR") -> "UnitLabel":
        table = young_yamanouchi(as_partition(mu), orientation)
        return cls(table.mu, table.index_path(i), table.index_path(j), orientation)

    @property
    def indices(self) -> tuple[int, int]:
        table = young_yamanouchi(self.mu, self.orientation)
        return table.path_index(self.row), table.path_index(self.col)

    def to_json(self) -> dict:
        return {
            "mu": self.mu.to_json(),
            "row": self.row.to_json(),
            "col": self.col.to_json(),
            "orient": self.orientation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "UnitLabel":
        return cls(
            Partition.from_json(data["mu"]),
            BranchPath.from_json(data["row"]),
            BranchPath.from_json(data["col"]),
            data["orient"],
        )


@lru_cache(maxsize=None)
def unit_array(mu, d: int, orientation: str = "LR") -> np.ndarray:
    """All units of ``mu`` as a real array of shape ``(d_mu, d_mu, d^p, d^p)``.

    Zero units (``m_mu = 0``) come out as exact zeros.
    """
    mu = as_partition(mu)
    table = young_yamanouchi(mu, orientation)
    p, dim = mu.weight, table.dimension
    size = d**p
    out = np.zeros((dim, dim, size, size))
    if multiplicity(mu, d) == 0:
        out.setflags(write=False)
        return out
    scale = dim / factorial(p)
    for sigma in enumerate_group(p):
        phi_inv = table(sigma.inverse())
        v = perm_matrix(sigma, d, p)
        # out[i, j] += phi_ji(sigma^-1) V_sigma
        out += scale * phi_inv.T[:, :, None, None] * v[None, None, :, :]
    out.setflags(write=False)
    return out


def unit_matrix(mu, i: int, j: int, d: int, orientation: str = "LR") -> np.ndarray:
    return unit_array(as_partition(mu), d, orientation)[i, j]


def matrix_unit(label: UnitLabel, d: int) -> DenseOperator:
    i, j = label.indices
    return DenseOperator(d, label.mu.weight, unit_matrix(label.mu, i, j, d, label.orientation))


def all_labels(p: int, orientation: str = "LR") -> list[tuple[Partition, int, int]]:
    out = []
    for mu in enumerate_partitions(p):
        dim = young_yamanouchi(mu, orientation).dimension
        out.extend((mu, i, j) for i in range(dim) for j in range(dim))
    return out


def expand_permutation(sigma: Permutation, p: int | None = None) -> dict:
    """Coefficients ``{(mu, i, j): phi^mu_ij(sigma)}`` with ``V_sigma = sum coeff * E^mu_ij``."""
    p = sigma.degree if p is None else p
    sigma = sigma.extend(p)
    out = {}
    for mu in enumerate_partitions(p):
        phi = young_yamanouchi(mu, "LR")(sigma)
        for i in range(phi.shape[0]):
            for j in range(phi.shape[1]):
                out[(mu, i, j)] = float(phi[i, j])
    return out


def conjugate_unit(sigma: Permutation, label: UnitLabel) -> dict:
    """Coefficients of ``V_sigma E^mu_ij V_sigma^{-1}`` in the units ``E^mu_kl``."""
    table = young_yamanouchi(label.mu, label.orientation)
    i, j = label.indices
    left, right = table(sigma), table(sigma.inverse())
    out = {}
    for k in range(table.dimension):
        for l in range(table.dimension):
            c = left[k, i] * right[j, l]
            if c != 0.0:
                out[(k, l)] = float(c)
    return out


def last_slot(p: int, orientation: str) -> int:
    """Zero-based slot added last by the branching chain of ``orientation``."""
    return p - 1 if orientation == "LR" else 0


@dataclass(frozen=True)
class TracedUnit:
    alpha: Partition | None
    scale: float
    reduced: UnitLabel | None
    residual: float


def trace_last_unit(label: UnitLabel, d: int, slot: int | None = None) -> TracedUnit:
    """Partial trace of ``E^mu_{I_alpha J_alpha'}`` over the last slot of its chain.

    Returns ``c`` with ``tr_last E = c E^alpha_{i_alpha j_alpha}`` (zero when
    ``alpha != alpha'``), measured densely, plus the residual of that fit.
    """
    mu, orient = label.mu, label.orientation
    p = mu.weight
    if p < 2:
        raise ValueError("need p >= 2 to trace a slot")
    expected = last_slot(p, orient)
    if slot is not None and slot != expected:
        raise ValueError("trace incompatible with construction order")
    table = young_yamanouchi(mu, orient)
    i, j = label.indices
    alpha, ia = table.split_index(i)
    beta, jb = table.split_index(j)
    traced = partial_trace_array(unit_matrix(mu, i, j, d, orient), d, p, [expected])
    if alpha != beta:
        return TracedUnit(None, 0.0, None, float(np.max(np.abs(traced))))
    reduced_table = young_yamanouchi(alpha, orient)
    reduced = UnitLabel(alpha, reduced_table.index_path(ia), reduced_table.index_path(jb), orient)
    target = unit_matrix(alpha, ia, jb, d, orient)
    norm = float(np.vdot(target, target).real)
    scale = float(np.vdot(target, traced).real / norm) if norm > 0 else 0.0
    residual = float(np.max(np.abs(traced - scale * target)))
    return TracedUnit(alpha, scale, reduced, residual)


def trace_scale_closed_form(mu, alpha, d: int) -> float:
    """Conjectured value of the traced-unit constant: ``m_mu / m_alpha``."""
    m_alpha = multiplicity(alpha, d)
    return multiplicity(mu, d) / m_alpha if m_alpha else 0.0


def unit_product_law_check(p: int, d: int, tol: float = 1e-11, orientation: str = "LR"):
    """Worst deviation of ``E^mu_ij E^nu_kl = delta^{mu nu} delta_jk E^mu_il`` and of the trace law."""
    blocks = {mu: unit_array(mu, d, orientation) for mu in enumerate_partitions(p)}
    worst = 0.0
    for mu, arr in blocks.items():
        m = multiplicity(mu, d)
        dim = arr.shape[0]
        for i in range(dim):
            for j in range(dim):
                worst = max(worst, abs(float(np.trace(arr[i, j])) - m * float(i == j)))
        for nu, brr in blocks.items():
            # all products at once: (i, j) x (k, l)
            prod = np.einsum("ijab,klbc->ijklac", arr, brr, optimize=True)
            target = np.zeros_like(prod)
            if mu == nu:
                for j in range(dim):
                    target[:, j, j] = arr
            worst = max(worst, float(np.max(np.abs(prod - target))))
    return VerificationReport("units.law", p, d, worst, tol, len(blocks) ** 2)
