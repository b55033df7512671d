"""Explicit matrix units of the two-pair algebra A_{2,2}.

Labels ``"S"`` and ``"A"`` name the symmetric and antisymmetric projectors of
S_2.  At ``p = 2`` both orientations give the same units, so the side layout
does not matter here (the tests assert this).

Normalizations follow what makes the matrix-unit laws hold densely:
``G2[k, l] = d^2 / sqrt(m_k m_l) (E_k (x) 1) Q^(2) (E_l (x) 1)`` and the
``Q^(2)`` term inside ``G0`` carries the same ``d^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import sqrt

import numpy as np

from .partitions import Partition, multiplicity
from .matrixunits import unit_matrix
from .symgroup import enumerate_group
from .tensor import DenseOperator, partial_transpose, perm_operator
from .oracle import VerificationReport
from .walled import q_matrix

LABELS = ("S", "A")
PAIRS = ("SS", "SA", "AS", "AA")
SHAPES = {"S": Partition((2,)), "A": Partition((1, 1))}
SIGN = {"S": 1, "A": -1}
TOL = 1e-10


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError("A_{2,2} is only treated for d >= 2")


def e2(label: str, d: int) -> np.ndarray:
    return unit_matrix(SHAPES[label], 0, 0, d)


def m2(label: str, d: int) -> int:
    return multiplicity(SHAPES[label], d)


@dataclass(frozen=True)
class Unit:
    """An operator together with the flag telling whether it vanishes at this ``d``."""

    operator: DenseOperator = field(repr=False)
    vanishes: bool
    name: str = ""


def _wrap(arr: np.ndarray, d: int, name: str, vanishes: bool | None = None) -> Unit:
    op = DenseOperator(d, 4, arr)
    if vanishes is None:
        vanishes = op.is_zero(TOL)
    return Unit(op, vanishes, name)


def g2_matrix(k: str, l: str, d: int) -> np.ndarray:
    mk, ml = m2(k, d), m2(l, d)
    if mk == 0 or ml == 0:
        return np.zeros((d**4, d**4))
    one = np.eye(d * d)
    return d * d / sqrt(mk * ml) * np.kron(e2(k, d), one) @ q_matrix(2, 2, d) @ np.kron(e2(l, d), one)


def g2_unit(k: str, l: str, d: int) -> Unit:
    _check_d(d)
    return _wrap(g2_matrix(k, l, d), d, f"G2[{k}{l}]", m2(k, d) == 0 or m2(l, d) == 0)


def q2_rep_matrix(d: int) -> np.ndarray:
    """Matrix of ``Q^(2)`` in the two-dimensional irrep, order ``(S, A)``."""
    _check_d(d)
    r = sqrt(d * d - 1)
    return np.array([[d + 1, r], [r, d - 1]]) / (2 * d)


def q2_rep_matrix_dense(d: int) -> np.ndarray:
    """``phi(Q)[k, l] = Tr(G2[l, k] Q^(2))``."""
    q = q_matrix(2, 2, d)
    return np.array([[np.trace(g2_matrix(l, k, d) @ q) for l in LABELS] for k in LABELS])


def b1_matrix(d: int) -> np.ndarray:
    """Quasi-multiplication coefficients of the ``Q^(1)`` generators, order SS, SA, AS, AA."""
    _check_d(d)
    return np.diag([d + 2, d, d, d - 2]) / (4 * d)


def b1_inverse_diag(pair: str, d: int) -> float:
    """``1 / B[pair, pair]``, or ``0`` when that entry vanishes (``d = 2``, ``AA``)."""
    b = b1_matrix(d)[PAIRS.index(pair), PAIRS.index(pair)]
    return 1.0 / b if abs(b) > TOL else 0.0


def _ee(i: str, j: str, d: int) -> np.ndarray:
    return np.kron(e2(i, d), e2(j, d))


def g1hat_matrix(ij: str, kl: str, d: int) -> np.ndarray:
    return _ee(ij[0], ij[1], d) @ q_matrix(1, 2, d) @ _ee(kl[0], kl[1], d)


def g1_matrix(ij: str, kl: str, d: int) -> np.ndarray:
    return b1_inverse_diag(ij, d) * g1hat_matrix(ij, kl, d)


def g1_unit(ij: str, kl: str, d: int) -> Unit:
    _check_d(d)
    excluded = b1_inverse_diag(ij, d) == 0.0 or b1_inverse_diag(kl, d) == 0.0
    arr = np.zeros((d**4, d**4)) if excluded else g1_matrix(ij, kl, d)
    return _wrap(arr, d, f"G1[{ij}][{kl}]", excluded)


def g1_prefactor(ij: str, d: int) -> float:
    return b1_inverse_diag(ij, d)


def g0_matrix(i: str, j: str, d: int) -> np.ndarray:
    ee = _ee(i, j, d)
    out = ee - b1_inverse_diag(i + j, d) * ee @ q_matrix(1, 2, d) @ ee
    if i == j and m2(i, d):
        one = np.eye(d * d)
        out = out - d * d / m2(i, d) * np.kron(one, e2(i, d)) @ q_matrix(2, 2, d) @ np.kron(e2(j, d), one)
    return out


def g0_unit(i: str, j: str, d: int) -> Unit:
    _check_d(d)
    return _wrap(g0_matrix(i, j, d), d, f"G0[{i}{j}]")


def g0_trace_closed_form(i: str, j: str, d: int) -> float:
    """Trace of ``G0[i, j]`` for ``d > 2``."""
    if i != j:
        return (d * d - 4) * (d * d - 1) / 4
    if i == "S":
        return d * d * (d - 1) * (d + 3) / 4
    return d * d * (d - 3) * (d + 1) / 4


@lru_cache(maxsize=None)
def _projector_arrays(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    g2 = sum(g2_matrix(k, k, d) for k in LABELS)
    g1 = sum(g1_matrix(kl, kl, d) for kl in PAIRS)
    g0 = np.eye(d**4) - g1 - g2
    for arr in (g2, g1, g0):
        arr.setflags(write=False)
    return g2, g1, g0


def projectors(d: int) -> tuple[DenseOperator, DenseOperator, DenseOperator]:
    """Central projectors onto the three ideals, in the order ``(G2, G1, G0)``."""
    _check_d(d)
    return tuple(DenseOperator(d, 4, a) for a in _projector_arrays(d))


def family(d: int) -> dict[str, list[tuple[tuple[str, str], Unit]]]:
    """All candidate matrix units grouped by ideal, with vanishing flags."""
    return {
        "M2": [((k, l), g2_unit(k, l, d)) for k in LABELS for l in LABELS],
        "M1": [((a, b), g1_unit(a, b, d)) for a in PAIRS for b in PAIRS],
        "M0": [((i, j), g0_unit(i, j, d)) for i in LABELS for j in LABELS],
    }


def generators(d: int) -> list[np.ndarray]:
    """Partial transposes (on the right block) of all 24 permutations of four slots."""
    return [
        partial_transpose(perm_operator(s, d, 4), [2, 3]).entries.real for s in enumerate_group(4)
    ]


@dataclass(frozen=True)
class Block:
    ideal: str
    kind: str
    size: int

    def to_json(self) -> dict:
        return {"ideal": self.ideal, "kind": self.kind, "size": self.size}


@dataclass(frozen=True)
class Decomposition22:
    d: int
    blocks: tuple[Block, ...]
    excluded: tuple[str, ...]
    irrep_dims: dict

    @property
    def total_dimension(self) -> int:
        return sum(b.size**2 for b in self.blocks)

    def signature(self) -> str:
        mats = [f"M({b.size})" for b in self.blocks if b.kind == "matrix"]
        scalars = sum(1 for b in self.blocks if b.kind == "scalar")
        parts = mats + ([f"C^{scalars}"] if scalars else [])
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "blocks": [b.to_json() for b in self.blocks],
            "dim": self.total_dimension,
        }


def decompose_22(d: int) -> Decomposition22:
    """Block structure read off from which units survive at this ``d``."""
    _check_d(d)
    fam = family(d)
    live2 = sorted({k for (k, l), u in fam["M2"] if not u.vanishes})
    live1 = sorted({a for (a, b), u in fam["M1"] if not u.vanishes and a == b})
    live0 = [(i, j) for (i, j), u in fam["M0"] if not u.vanishes]
    excluded = [u.name for group in fam.values() for _, u in group if u.vanishes]
    blocks = [Block("M2", "matrix", len(live2)), Block("M1", "matrix", len(live1))]
    blocks += [Block("M0", "scalar", 1) for _ in live0]
    irrep_dims = {"M2": len(live2), "M1": len(live1), "M0": len(live0)}
    return Decomposition22(d, tuple(b for b in blocks if b.size), tuple(excluded), irrep_dims)


def q0_identity_residuals(d: int) -> dict[str, float]:
    """Residuals of the two ``Q^(0)`` product identities over all ``i, j``.

    ``Q0 (E_i (x) E_j) Q2 = delta_ij (E_i (x) 1 - (d + s_j)/(2d)) Q2`` with ``s_S = 1``, ``s_A = -1``;
    ``Q0 (E_i (x) E_j) Q1 = (E_i (x) E_j - B[ij, ij]) Q1``.
    """
    q0, q1, q2 = (q_matrix(k, 2, d) for k in range(3))
    one, ident = np.eye(d * d), np.eye(d**4)
    bdiag = np.diag(b1_matrix(d))
    out = {"Q2": 0.0, "Q1": 0.0}
    for i in LABELS:
        for j in LABELS:
            ee = _ee(i, j, d)
            lhs2 = q0 @ ee @ q2
            rhs2 = float(i == j) * (np.kron(e2(i, d), one) - (d + SIGN[j]) / (2 * d) * ident) @ q2
            lhs1 = q0 @ ee @ q1
            rhs1 = (ee - bdiag[PAIRS.index(i + j)] * ident) @ q1
            out["Q2"] = max(out["Q2"], float(np.max(np.abs(lhs2 - rhs2))))
            out["Q1"] = max(out["Q1"], float(np.max(np.abs(lhs1 - rhs1))))
    return out


def n0_not_ideal_witness(d: int, tol: float = TOL) -> VerificationReport:
    """Both ``Q^(0)`` product identities hold, and ``Q^(0) (E_S (x) E_S) Q^(1)`` leaks into ``M1``.

    The leak is the norm of ``G1 x G1`` for that product ``x``: a nonzero
    value puts ``x`` outside the span of the ``Q^(0)`` sector.
    """
    _check_d(d)
    res = q0_identity_residuals(d)
    q0, q1 = q_matrix(0, 2, d), q_matrix(1, 2, d)
    x = q0 @ _ee("S", "S", d) @ q1
    _, g1, _ = _projector_arrays(d)
    leak = float(np.max(np.abs(g1 @ x @ g1)))
    worst = max(res.values())
    if leak <= tol:
        worst = float("inf")
    return VerificationReport("a22.n0_not_ideal", 2, d, worst, tol, 2, {"leak": leak, **res})
