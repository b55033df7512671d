"""Arc operators, the projector family Q^(k), contraction and the one-free-pair closed forms.

A walled operator lives on ``2p`` slots laid out as ``1, ..., p | p', ..., 1'``.
Arc number ``j`` (zero-based, counted from the wall) joins slot ``p-1-j`` with
slot ``p+j``.  ``V^(r)`` carries arcs ``0..r-1``, the ones nearest the wall.

Products ``E_left (x) E_right`` need an orientation for each side.  Two
layouts are used throughout:

* ``WALL_LAST``: the wall-adjacent slots ``p`` and ``p'`` close both branching
  chains.  The two sides are mirror images of each other.
* ``WALL_FIRST``: the chains start at the wall and close on the outer slots
  ``1`` and ``1'``.  This is the layout in which ``V^(p-1)`` contracts exactly
  the systems of the penultimate diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .partitions import Partition, as_partition, multiplicity
from .symgroup import Permutation, young_yamanouchi
from .matrixunits import all_labels, unit_matrix
from .oracle import VerificationReport
from .tensor import DenseOperator, partial_transpose, perm_operator

WALL_LAST = ("LR", "RL")
WALL_FIRST = ("RL", "LR")


@dataclass(frozen=True)
class ArcConfig:
    p: int
    d: int
    r: int

    def __post_init__(self) -> None:
        if self.p < 1 or self.d < 1:
            raise ValueError("p and d must be positive")
        if not 0 <= self.r <= self.p:
            raise ValueError(f"number of arcs {self.r} outside 0..{self.p}")


def arc_slots(p: int, j: int) -> tuple[int, int]:
    """Zero-based slot pair of arc ``j`` counted from the wall."""
    if not 0 <= j < p:
        raise ValueError(f"arc {j} outside 0..{p - 1}")
    return p - 1 - j, p + j


def walled_permutation(pairs, p: int) -> Permutation:
    """Product of the transpositions exchanging each arc pair ``j`` in ``pairs``."""
    images = list(range(2 * p))
    for j in pairs:
        a, b = arc_slots(p, j)
        images[a], images[b] = b, a
    return Permutation(tuple(images))


def arcs_operator(arcs, p: int, d: int) -> DenseOperator:
    """Tensor product of ``d P^+`` over the arcs in ``arcs``, identity elsewhere."""
    swap = perm_operator(walled_permutation(arcs, p), d, 2 * p)
    return partial_transpose(swap, range(p, 2 * p))


@lru_cache(maxsize=None)
def arcs_matrix(arcs: tuple[int, ...], p: int, d: int) -> np.ndarray:
    """Real contiguous matrix of :func:`arcs_operator`, cached."""
    out = np.ascontiguousarray(arcs_operator(arcs, p, d).entries.real)
    out.setflags(write=False)
    return out


def v_matrix(p: int, d: int, r: int) -> np.ndarray:
    return arcs_matrix(tuple(range(r)), p, d)


def q_matrix(k: int, p: int, d: int) -> np.ndarray:
    out = v_matrix(p, d, k) / d**k
    if k < p:
        out = out - v_matrix(p, d, k + 1) / d ** (k + 1)
    return out


def arc_operator(cfg: ArcConfig) -> DenseOperator:
    return arcs_operator(range(cfg.r), cfg.p, cfg.d)


def v_arcs(p: int, d: int, r: int) -> DenseOperator:
    return arc_operator(ArcConfig(p, d, r))


def complement_arcs(p: int, d: int, r: int, s: int) -> DenseOperator:
    """``V^(s minus r)``: arcs ``r..s-1``, outside the first ``r``."""
    if not 0 <= r <= s <= p:
        raise ValueError("need 0 <= r <= s <= p")
    return arcs_operator(range(r, s), p, d)


def q_projector(k: int, p: int, d: int) -> DenseOperator:
    if not 0 <= k <= p:
        raise ValueError(f"k={k} outside 0..{p}")
    head = v_arcs(p, d, k) / d**k
    if k == p:
        return head
    return head - v_arcs(p, d, k + 1) / d ** (k + 1)


def q_trace_closed_form(k: int, p: int, d: int) -> int:
    if k == p:
        return 1
    return d ** (2 * (p - k - 1)) * (d * d - 1)


def _omega(d: int, r: int) -> np.ndarray:
    """Unnormalized ``sum_x |x>|reverse x>`` on the ``2r`` middle slots."""
    t = np.zeros((d,) * (2 * r))
    for x in np.ndindex(*(d,) * r):
        t[x + x[::-1]] = 1.0
    return t.reshape(d ** (2 * r))


def contract_array(arr: np.ndarray, p: int, d: int, r: int) -> np.ndarray:
    """``(1 (x) <omega| (x) 1) X (1 (x) |omega> (x) 1)`` on the ``2(p-r)`` outer slots."""
    if r == 0:
        return arr
    outer = d ** (p - r)
    mid = d ** (2 * r)
    omega = _omega(d, r)
    t = arr.reshape(outer, mid, outer, outer, mid, outer)
    out = np.einsum("m,amcbne,n->acbe", omega, t, omega, optimize=True)
    return out.reshape(outer * outer, outer * outer)


def contract(X: DenseOperator, r: int) -> DenseOperator:
    """The reduced operator ``X_r`` with ``V^(r) X V^(r) = X_r (x) V^(r)``.

    Equal to the partial trace of ``V^(r) X V^(r)`` over the arc slots divided
    by ``d^r``; it lives on the ``2(p-r)`` outer slots in the same layout.
    """
    if X.arity % 2:
        raise ValueError("walled operators have an even number of slots")
    p = X.arity // 2
    if not 0 <= r <= p:
        raise ValueError(f"r={r} outside 0..{p}")
    if r == 0:
        return X
    out = contract_array(X.entries, p, X.local_dim, r)
    return DenseOperator(X.local_dim, 2 * (p - r), out)


def expand_contracted(Y: DenseOperator, r: int) -> DenseOperator:
    """Place ``Y`` on the outer slots and ``V^(r)`` on the middle ones."""
    d = Y.local_dim
    q = Y.arity // 2
    omega = _omega(d, r)
    outer = d**q
    t = Y.entries.reshape(outer, outer, outer, outer)
    full = np.einsum("acbe,m,n->amcbne", t, omega, omega)
    size = outer * outer * omega.size
    return DenseOperator(d, 2 * (q + r), full.reshape(size, size))


# products of units on the two sides


def pair_unit_matrix(left, right, d: int, layout=WALL_LAST) -> np.ndarray:
    """``E^mu_ij (x) E^nu_kl`` with ``left=(mu, i, j)`` and ``right=(nu, k, l)``."""
    mu, i, j = left
    nu, k, l = right
    return np.kron(unit_matrix(mu, i, j, d, layout[0]), unit_matrix(nu, k, l, d, layout[1]))


def pair_unit(left, right, d: int, layout=WALL_LAST) -> DenseOperator:
    p = as_partition(left[0]).weight
    return DenseOperator(d, 2 * p, pair_unit_matrix(left, right, d, layout))


def _split(mu, i: int, orientation: str) -> tuple[Partition, int]:
    return young_yamanouchi(as_partition(mu), orientation).split_index(i)


def appendix_trace(mu, I, J, nu, K, L, p: int, d: int) -> float:
    """Closed form of ``Tr[E^mu_IJ (x) E^nu_KL V^(p-1)]`` in the wall-first layout."""
    mu, nu = as_partition(mu), as_partition(nu)
    if mu.weight != p or nu.weight != p:
        raise ValueError("label weight does not match p")
    alpha, ia = _split(mu, I, WALL_FIRST[0])
    alpha2, ja = _split(mu, J, WALL_FIRST[0])
    beta, kb = _split(nu, K, WALL_FIRST[1])
    beta2, lb = _split(nu, L, WALL_FIRST[1])
    if alpha != beta or alpha2 != beta2 or alpha != alpha2:
        return 0.0
    if ia != kb or ja != lb:
        return 0.0
    m_alpha = multiplicity(alpha, d)
    if m_alpha == 0:
        return 0.0
    return multiplicity(mu, d) * multiplicity(nu, d) / m_alpha


def appendix_sandwich_coeffs(mu, I, J, nu, K, L, p: int, d: int) -> tuple[float, float]:
    """``(a, b)`` with ``V^(p-1) E (x) E V^(p-1) = a V^(p) + b V^(p-1)`` (wall-first layout)."""
    mu, nu = as_partition(mu), as_partition(nu)
    alpha, ia = _split(mu, I, WALL_FIRST[0])
    alpha2, ja = _split(mu, J, WALL_FIRST[0])
    beta, kb = _split(nu, K, WALL_FIRST[1])
    beta2, lb = _split(nu, L, WALL_FIRST[1])
    if (alpha, ia) != (beta, kb) or (alpha2, ja) != (beta2, lb):
        return 0.0, 0.0
    m_mu, m_nu = multiplicity(mu, d), multiplicity(nu, d)
    m_alpha = multiplicity(alpha, d)
    same_irrep = float(mu == nu)
    ratio = m_mu * m_nu / m_alpha if (alpha == alpha2 and m_alpha) else 0.0
    norm = d * (d * d - 1)
    a = (d * m_nu * same_irrep - ratio) / norm
    b = (d * ratio - m_nu * same_irrep) / norm
    return a, b


def q_sandwich_coeff(mu, I, J, nu, K, L, p: int, d: int) -> float:
    """``c`` with ``Q^(p-1) E (x) E Q^(p-1) = c Q^(p-1)`` (wall-first layout)."""
    mu, nu = as_partition(mu), as_partition(nu)
    alpha, ia = _split(mu, I, WALL_FIRST[0])
    alpha2, ja = _split(mu, J, WALL_FIRST[0])
    beta, kb = _split(nu, K, WALL_FIRST[1])
    beta2, lb = _split(nu, L, WALL_FIRST[1])
    if (alpha, ia) != (beta, kb) or (alpha2, ja) != (beta2, lb):
        return 0.0
    m_mu, m_nu = multiplicity(mu, d), multiplicity(nu, d)
    m_alpha = multiplicity(alpha, d)
    ratio = m_mu * m_nu / m_alpha if (alpha == alpha2 and m_alpha) else 0.0
    return (d * ratio - m_nu * float(mu == nu)) / (d**p * (d * d - 1))


def q_sandwich_check(p: int, d: int, tol: float = 1e-10):
    """Dense check of ``Q^(p-1) E (x) E Q^(p-1) = c Q^(p-1)`` over all wall-first label pairs."""
    q = q_matrix(p - 1, p, d)
    worst, n = 0.0, 0
    for left in all_labels(p, WALL_FIRST[0]):
        for right in all_labels(p, WALL_FIRST[1]):
            x = pair_unit_matrix(left, right, d, WALL_FIRST)
            c = q_sandwich_coeff(*left, *right, p, d)
            worst = max(worst, float(np.max(np.abs(q @ x @ q - c * q))))
            n += 1
    return VerificationReport("appendix.q_sandwich", p, d, worst, tol, n)
