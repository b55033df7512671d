"""Generators of the ideal carried by Q^(p-1), their Gram matrix and the pure basis.

For multi-indices ``Gamma = [xi, eta; I, K; kappa]`` and
``Delta = [mu, nu; J, L; tau]`` the generator is

    Ghat(Gamma, Delta) = E^xi_{I A} (x) E^eta_{K A} . Q^(p-1) . E^mu_{B J} (x) E^nu_{B L}

where ``A`` (``B``) is a path through ``kappa`` (``tau``) with a fixed free
index.  Units use the wall-first layout, so ``kappa`` is the irrep of the
systems joined by the ``p-1`` arcs.

``Q^(p-1)`` has rank ``d^2 - 1``.  Writing ``Q = W W^T`` every generator
factors as ``(X_Gamma W)(Y_Delta^T W)^T``, which keeps the ``p = 3`` sweeps
cheap: products of generators reduce to ``(d^2-1) x (d^2-1)`` cores.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .partitions import (
    Partition,
    as_partition,
    common_children,
    enumerate_partitions,
    multiplicity,
    remove_box,
)
from .symgroup import young_yamanouchi
from .matrixunits import unit_matrix
from .tensor import DenseOperator
from .walled import WALL_FIRST, _omega, contract_array, pair_unit_matrix, q_matrix, v_matrix

EIG_CUTOFF = 1e-9


@dataclass(frozen=True)
class MultiIndex:
    xi: Partition
    eta: Partition
    row_left: int
    row_right: int
    kappa: Partition

    def __post_init__(self) -> None:
        for name in ("xi", "eta", "kappa"):
            object.__setattr__(self, name, as_partition(getattr(self, name)))
        if self.kappa not in common_children(self.xi, self.eta):
            raise ValueError(f"{self.kappa} is not a common child of {self.xi} and {self.eta}")
        if not 0 <= self.row_left < young_yamanouchi(self.xi, WALL_FIRST[0]).dimension:
            raise ValueError("row_left out of range")
        if not 0 <= self.row_right < young_yamanouchi(self.eta, WALL_FIRST[1]).dimension:
            raise ValueError("row_right out of range")

    @property
    def pair(self) -> tuple[Partition, Partition]:
        return self.xi, self.eta

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "eta": self.eta.to_json(),
            "row_left": self.row_left,
            "row_right": self.row_right,
            "kappa": self.kappa.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultiIndex":
        return cls(
            Partition.from_json(data["xi"]),
            Partition.from_json(data["eta"]),
            int(data["row_left"]),
            int(data["row_right"]),
            Partition.from_json(data["kappa"]),
        )

    def __str__(self) -> str:
        return f"[{self.xi},{self.eta};{self.row_left},{self.row_right};{self.kappa}]"


@dataclass(frozen=True)
class MixedIndex:
    """A pure-basis label inside a singular block: eigen-direction ``component``."""

    xi: Partition
    eta: Partition
    row_left: int
    row_right: int
    component: int

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "eta": self.eta.to_json(),
            "row_left": self.row_left,
            "row_right": self.row_right,
            "component": self.component,
        }

    def __str__(self) -> str:
        return f"[{self.xi},{self.eta};{self.row_left},{self.row_right};#{self.component}]"


def index_pairs(p: int) -> list[tuple[Partition, Partition]]:
    """Pairs ``(xi, eta)`` that are equal or box-related, in canonical order."""
    parts = enumerate_partitions(p)
    return [(a, b) for a in parts for b in parts if common_children(a, b)]


@lru_cache(maxsize=None)
def index_set(p: int) -> tuple[MultiIndex, ...]:
    if p < 2:
        raise ValueError("the one-free-pair ideal needs p >= 2")
    out = []
    for xi, eta in index_pairs(p):
        dx = young_yamanouchi(xi, WALL_FIRST[0]).dimension
        de = young_yamanouchi(eta, WALL_FIRST[1]).dimension
        for i in range(dx):
            for k in range(de):
                for kappa in common_children(xi, eta):
                    out.append(MultiIndex(xi, eta, i, k, kappa))
    return tuple(out)


def _free_path(mu: Partition, kappa: Partition, side: int, choice: int = 0) -> int:
    block = young_yamanouchi(mu, WALL_FIRST[side]).block(kappa)
    return block[choice]


def left_factor(gamma: MultiIndex, d: int, choice: int = 0) -> np.ndarray:
    """``E^xi_{I A} (x) E^eta_{K A}``, the factor to the left of ``Q``."""
    a = _free_path(gamma.xi, gamma.kappa, 0, choice)
    b = _free_path(gamma.eta, gamma.kappa, 1, choice)
    return np.kron(
        unit_matrix(gamma.xi, gamma.row_left, a, d, WALL_FIRST[0]),
        unit_matrix(gamma.eta, gamma.row_right, b, d, WALL_FIRST[1]),
    )


def right_factor(delta: MultiIndex, d: int, choice: int = 0) -> np.ndarray:
    """``E^mu_{B J} (x) E^nu_{B L}``, the factor to the right of ``Q``."""
    a = _free_path(delta.xi, delta.kappa, 0, choice)
    b = _free_path(delta.eta, delta.kappa, 1, choice)
    return np.kron(
        unit_matrix(delta.xi, a, delta.row_left, d, WALL_FIRST[0]),
        unit_matrix(delta.eta, b, delta.row_right, d, WALL_FIRST[1]),
    )


def ghat_vanishes(gamma: MultiIndex, delta: MultiIndex, d: int) -> bool:
    return any(
        multiplicity(mu, d) == 0 for mu in (gamma.xi, gamma.eta, delta.xi, delta.eta)
    )


def ghat(gamma: MultiIndex, delta: MultiIndex, p: int, d: int, choice: int = 0) -> DenseOperator:
    if gamma.xi.weight != p or delta.xi.weight != p:
        raise ValueError("index weights do not match p")
    q = q_matrix(p - 1, p, d)
    out = left_factor(gamma, d, choice) @ q @ right_factor(delta, d, choice)
    return DenseOperator(d, 2 * p, out)


@lru_cache(maxsize=None)
def q_isometry(p: int, d: int) -> np.ndarray:
    """Orthonormal ``W`` with ``W W^T = Q^(p-1)``; shape ``(d^{2p}, d^2 - 1)``."""
    omega = _omega(d, p - 1) / np.sqrt(d ** (p - 1))
    cols = np.zeros((d ** (2 * p), d * d))
    for a in range(d):
        for b in range(d):
            ea, eb = np.eye(d)[a], np.eye(d)[b]
            cols[:, a * d + b] = np.kron(np.kron(ea, omega), eb)
    # remove the fully contracted direction sum_a f_aa / sqrt(d)
    diag = np.eye(d).reshape(d * d) / np.sqrt(d)
    basis = np.linalg.svd(np.eye(d * d) - np.outer(diag, diag))[0][:, : d * d - 1]
    w = cols @ basis
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class GeneratorFactors:
    """``Ghat(Gamma, Delta) = left[Gamma] @ right[Delta].T`` for every index pair."""

    p: int
    d: int
    indices: tuple[MultiIndex, ...]
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)

    def operator(self, a: int, b: int) -> np.ndarray:
        return self.left[a] @ self.right[b].T

    def core(self) -> np.ndarray:
        """``core[D, L] = right[D].T @ left[L]``; ``Ghat_GD Ghat_LP = left_G core_DL right_P^T``."""
        return np.einsum("dxk,lxm->dlkm", self.right, self.left, optimize=True)


@lru_cache(maxsize=None)
def generator_factors(p: int, d: int, choice: int = 0) -> GeneratorFactors:
    w = q_isometry(p, d)
    idx = index_set(p)
    left = np.stack([left_factor(g, d, choice) @ w for g in idx])
    right = np.stack([right_factor(g, d, choice).T @ w for g in idx])
    left.setflags(write=False)
    right.setflags(write=False)
    return GeneratorFactors(p, d, idx, left, right)


def gram_entry(delta: MultiIndex, lam: MultiIndex, p: int, d: int) -> float:
    """Coefficient ``Bhat[Delta, Lambda]`` of ``Ghat_GD Ghat_LP = Bhat_DL Ghat_GP``."""
    if delta.pair != lam.pair:
        return 0.0
    if (delta.row_left, delta.row_right) != (lam.row_left, lam.row_right):
        return 0.0
    mu, nu = delta.pair
    m_mu, m_nu = multiplicity(mu, d), multiplicity(nu, d)
    if m_mu == 0 or m_nu == 0:
        return 0.0
    first = 0.0
    if delta.kappa == lam.kappa:
        first = d * m_mu * m_nu / multiplicity(delta.kappa, d)
    second = m_mu * float(mu == nu)
    return (first - second) / (d**p * (d * d - 1))


def gram_block(mu, nu, p: int, d: int) -> np.ndarray:
    """Inner block ``B_{mu nu}`` over the common children of ``mu`` and ``nu``."""
    mu, nu = as_partition(mu), as_partition(nu)
    kids = common_children(mu, nu)
    if not kids:
        raise ValueError(f"{mu} and {nu} are neither equal nor box-related")
    rows = [MultiIndex(mu, nu, 0, 0, k) for k in kids]
    return np.array([[gram_entry(a, b, p, d) for b in rows] for a in rows])


@dataclass(frozen=True)
class GramMatrix:
    p: int
    d: int
    index_set: tuple[MultiIndex, ...]
    entries: np.ndarray = field(repr=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "index_set": [g.to_json() for g in self.index_set],
            "entries": [[float(x) for x in row] for row in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.entries:
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def gram_matrix(p: int, d: int) -> GramMatrix:
    idx = index_set(p)
    entries = np.array([[gram_entry(a, b, p, d) for b in idx] for a in idx])
    return GramMatrix(p, d, idx, entries)


def dense_quasi_coefficients(p: int, d: int) -> tuple[np.ndarray, float]:
    """Measured ``Bhat`` from the generator cores, plus how far each core is from ``c * 1``."""
    core = generator_factors(p, d).core()
    rank = core.shape[-1]
    coeff = np.einsum("dlkk->dl", core) / rank
    spread = core - coeff[:, :, None, None] * np.eye(rank)
    return coeff, float(np.max(np.abs(spread)))


@dataclass(frozen=True)
class Invertibility:
    invertible: bool
    witnesses: tuple[Partition, ...]


def is_invertible(p: int, d: int) -> Invertibility:
    """``Bhat`` is regular iff ``d m_mu != sum of m_alpha`` over the children, for each admissible ``mu``."""
    if p < 2:
        raise ValueError("need p >= 2")
    bad = []
    for mu in enumerate_partitions(p):
        m_mu = multiplicity(mu, d)
        if m_mu == 0:
            continue
        if d * m_mu == sum(multiplicity(a, d) for a in remove_box(mu)):
            bad.append(mu)
    return Invertibility(not bad, tuple(bad))


@dataclass(frozen=True)
class PureBasis:
    """``G_ab = sum L[G, a] R[D, b] Ghat(G, D)``; satisfies ``G_ab G_ce = delta_bc G_ae``."""

    p: int
    d: int
    labels: tuple
    lcoef: np.ndarray = field(repr=False)
    rcoef: np.ndarray = field(repr=False)
    dropped: tuple = ()

    @property
    def size(self) -> int:
        return len(self.labels)

    def factors(self) -> tuple[np.ndarray, np.ndarray]:
        """Low-rank factors with ``G_ab = left[a] @ right[b].T``."""
        fac = generator_factors(self.p, self.d)
        left = np.einsum("ga,gxk->axk", self.lcoef, fac.left, optimize=True)
        right = np.einsum("gb,gxk->bxk", self.rcoef, fac.right, optimize=True)
        return left, right

    def operator(self, a: int, b: int) -> DenseOperator:
        left, right = self.factors()
        return DenseOperator(self.d, 2 * self.p, left[a] @ right[b].T)

    def index_of(self, label) -> int:
        return self.labels.index(label)


def _aligned(u: np.ndarray, tol: float = 1e-12) -> bool:
    return all(np.sum(np.abs(col) > tol) == 1 for col in u.T)


def pure_basis(p: int, d: int, allow_singular: bool = True) -> PureBasis:
    idx = index_set(p)
    n = len(idx)
    position = {g: k for k, g in enumerate(idx)}
    full = gram_matrix(p, d).entries
    scale = np.max(np.abs(np.linalg.eigvalsh(full))) if n else 1.0
    inv = is_invertible(p, d)
    if not inv.invertible and not allow_singular:
        raise ValueError(f"singular Gram matrix, witnesses {list(map(str, inv.witnesses))}")

    labels, lcols, rcols, dropped = [], [], [], []
    for xi, eta in index_pairs(p):
        kids = common_children(xi, eta)
        block = gram_block(xi, eta, p, d)
        evals, evecs = np.linalg.eigh(block)
        keep = evals > EIG_CUTOFF * scale
        dx = young_yamanouchi(xi, WALL_FIRST[0]).dimension
        de = young_yamanouchi(eta, WALL_FIRST[1]).dimension
        regular = bool(np.all(keep))
        for i in range(dx):
            for k in range(de):
                rows = [position[MultiIndex(xi, eta, i, k, kappa)] for kappa in kids]
                if regular:
                    binv = np.linalg.inv(block)
                    for c, kappa in enumerate(kids):
                        lcol, rcol = np.zeros(n), np.zeros(n)
                        lcol[rows] = binv[:, c]
                        rcol[rows[c]] = 1.0
                        labels.append(idx[rows[c]])
                        lcols.append(lcol)
                        rcols.append(rcol)
                    continue
                u = evecs[:, keep]
                lam = evals[keep]
                aligned = _aligned(u)
                for c in range(u.shape[1]):
                    lcol, rcol = np.zeros(n), np.zeros(n)
                    lcol[rows] = u[:, c] / lam[c]
                    rcol[rows] = u[:, c]
                    if aligned:
                        where = int(np.argmax(np.abs(u[:, c])))
                        sign = np.sign(u[where, c])
                        lcol *= sign
                        rcol *= sign
                        labels.append(idx[rows[where]])
                    else:
                        labels.append(MixedIndex(xi, eta, i, k, c))
                    lcols.append(lcol)
                    rcols.append(rcol)
                kept_rows = set()
                if aligned:
                    kept_rows = {rows[int(np.argmax(np.abs(u[:, c])))] for c in range(u.shape[1])}
                    dropped.extend(idx[r] for r in rows if r not in kept_rows)
                else:
                    dropped.extend(idx[r] for r in rows)
    lcoef = np.array(lcols).T if lcols else np.zeros((n, 0))
    rcoef = np.array(rcols).T if rcols else np.zeros((n, 0))
    return PureBasis(p, d, tuple(labels), lcoef, rcoef, tuple(dropped))


# overlaps between sandwiches with different arc numbers


def _side_contract(left: np.ndarray, right: np.ndarray, p: int, d: int, r: int) -> np.ndarray:
    """``contract(left (x) right, r)`` computed side by side.

    The arcs pair the last ``r`` slots of the left block with the first ``r``
    slots of the right block in reverse order, so the right factor enters
    transposed on those slots (the ping-pong step).
    """
    o, m = d ** (p - r), d**r
    a = left.reshape(o, m, o, m)
    b = right.reshape((d,) * r + (o,) + (d,) * r + (o,))
    # reverse the order of the arc slots on the right block
    rev = list(range(r - 1, -1, -1)) + [r] + [r + 1 + j for j in range(r - 1, -1, -1)] + [2 * r + 1]
    b = b.transpose(rev).reshape(m, o, m, o)
    out = np.einsum("axcy,xbye->abce", a, b, optimize=True)
    return out.reshape(o * o, o * o)


def _pair_product(first, second, d: int, layout) -> tuple[float, tuple | None]:
    """``(E_a (x) E_b)(E_c (x) E_e)`` by the unit law: a scalar times a pair label."""
    (mu, i, j), (nu, k, l) = first
    (mu2, i2, j2), (nu2, k2, l2) = second
    if mu != mu2 or nu != nu2 or j != i2 or l != k2:
        return 0.0, None
    return 1.0, ((mu, i, j2), (nu, k, l2))


def overlap(r: int, s: int, labels, p: int, d: int, layout=WALL_FIRST) -> tuple[float, float]:
    """``Tr[(A V^(r) B)(C V^(s) D)]`` for pair units ``A, B, C, D``, computed two ways.

    ``labels`` is ``(A, B, C, D)``, each a pair ``((mu, i, j), (nu, k, l))``.
    Returns ``(dense, reduced)``.
    """
    if not 0 <= r < s <= p:
        raise ValueError("overlap needs 0 <= r < s <= p")
    A, B, C, D = labels
    mats = [pair_unit_matrix(x[0], x[1], d, layout) for x in (A, B, C, D)]
    vr = v_matrix(p, d, r)
    vs = v_matrix(p, d, s)
    dense = float(np.trace(mats[0] @ vr @ mats[1] @ mats[2] @ vs @ mats[3]))

    # reduction: Tr[P V^(r) R V^(s)] with P = D A and R = B C, then contract r arcs
    cp, plabel = _pair_product(D, A, d, layout)
    cr, rlabel = _pair_product(B, C, d, layout)
    if plabel is None or rlabel is None:
        return dense, 0.0
    units = [
        (unit_matrix(x[0][0], x[0][1], x[0][2], d, layout[0]),
         unit_matrix(x[1][0], x[1][1], x[1][2], d, layout[1]))
        for x in (plabel, rlabel)
    ]
    if r:
        yp = _side_contract(units[0][0], units[0][1], p, d, r)
        yr = _side_contract(units[1][0], units[1][1], p, d, r)
    else:
        yp = np.kron(*units[0])
        yr = np.kron(*units[1])
    y = yp @ yr
    q = p - r
    # remaining s - r arcs sit next to the wall of the reduced system
    reduced = float(np.trace(contract_array(y, q, d, s - r)))
    return dense, cp * cr * reduced


def pure_law_residual(basis: PureBasis) -> float:
    """Worst deviation of ``G_ab G_ce = delta_bc G_ae`` over the whole basis.

    Uses the factored form: the law holds iff ``right[b].T @ left[c] = delta_bc 1``
    on the range of ``Q^(p-1)``, checked on the small cores.
    """
    left, right = basis.factors()
    cores = np.einsum("bxk,cxl->bckl", right, left, optimize=True)
    rank = cores.shape[-1]
    target = np.einsum("bc,kl->bckl", np.eye(basis.size), np.eye(rank))
    return float(np.max(np.abs(cores - target), initial=0.0))


def pure_law_dense_residual(basis: PureBasis, pairs) -> float:
    """The same law on explicit dense operators for selected ``(a, b, c, e)`` quadruples."""
    worst = 0.0
    for a, b, c, e in pairs:
        lhs = basis.operator(a, b).entries @ basis.operator(c, e).entries
        rhs = basis.operator(a, e).entries if b == c else np.zeros_like(lhs)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
