"""Squeezing pair units of S_3 by the single arc next to the wall.

``V X V = Y (x) V`` with ``V`` the arc on ``(3, 3')`` and ``Y`` an element of
A_{2,2} on the outer slots.  ``Y`` is expanded in the explicit A_{2,2}
matrix units of :mod:`algebra22`.  Units use the mirror (wall-last) layout,
so the indices of the mixed irrep ``C = (2,1)`` are the S_2 irreps on the two
outer systems, exactly the labels of the A_{2,2} units.

Closed forms (``T3 = Tr[X V^(3)]``, ``T2 = Tr[X V^(2)]``):

* ``lambda2[i, j] = delta^{mu nu} delta_ik delta_jl m_mu / sqrt(m_i m_j)``
* ``lambda1[[ik], [jl]] = Binv[jl] (T2 / d - T3 / d^2) / (d^2 - 1)``
* ``lambda0[i, k] = (m_mu m_nu / d - Binv[ik] (T2 / d - T3 / d^2) - delta_ik T3 / m_i) / Tr G0[i, k]``
  for ``X = E^mu_ii (x) E^nu_kk``.

``T2`` comes from the one-free-pair trace formula, rotated from the
wall-first to the wall-last layout by the intertwiner between the two
Young bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, sqrt

import numpy as np

from . import algebra22 as a22
from .matrixunits import unit_matrix
from .oracle import VerificationReport, merge
from .partitions import Partition, as_partition, enumerate_partitions, irrep_dimension, multiplicity
from .symgroup import Permutation, enumerate_group, young_yamanouchi
from .tensor import DenseOperator, partial_transpose, perm_matrix
from .walled import (
    WALL_LAST,
    appendix_trace,
    arcs_matrix,
    contract_array,
    expand_contracted,
    pair_unit_matrix,
)

P = 3
S2_NAME = {Partition((2,)): "S", Partition((1, 1)): "A"}


def index_name(mu, i: int, side: int = 0) -> str:
    """S_2 label (``"S"`` or ``"A"``) of path ``i`` of an S_3 irrep."""
    path = young_yamanouchi(as_partition(mu), WALL_LAST[side]).paths[i]
    return S2_NAME[path.parent]


def s3_labels() -> list[tuple[Partition, int, int]]:
    """The six units ``E_S^(3), E^C_SS, E^C_SA, E^C_AS, E^C_AA, E_A^(3)`` as ``(mu, i, j)``."""
    out = []
    for mu in enumerate_partitions(P):
        dim = irrep_dimension(mu)
        out.extend((mu, i, j) for i in range(dim) for j in range(dim))
    return out


def s3_units(d: int) -> dict[str, DenseOperator]:
    if d < 2:
        raise ValueError("need d >= 2")
    out = {}
    for mu, i, j in s3_labels():
        if mu == Partition((2, 1)):
            key = "C" + index_name(mu, i) + index_name(mu, j)
        else:
            key = "3" + S2_NAME[Partition((2,))] if mu == Partition((3,)) else "3A"
        out[key] = DenseOperator(d, P, unit_matrix(mu, i, j, d, "LR"))
    return out


# one arc, any p


def single_arc_matrix(p: int, d: int) -> np.ndarray:
    return arcs_matrix((0,), p, d)


def single_arc_trace(mu, i, j, nu, k, l, p: int, d: int) -> float:
    """``Tr(V E^mu_ij (x) E^nu_kl) = delta_ij delta_kl m_mu m_nu / d``."""
    if i != j or k != l:
        return 0.0
    return multiplicity(mu, d) * multiplicity(nu, d) / d


def _slot(label, p: int) -> int:
    """Zero-based slot of a one-based label: ``k`` or the primed string ``"k'"``."""
    if isinstance(label, str):
        return 2 * p - int(label.rstrip("'"))
    return label - 1


def _swaps(pairs, p: int, d: int) -> np.ndarray:
    """Product of label transpositions on ``2p`` slots (disjoint pairs)."""
    images = list(range(2 * p))
    for a, b in pairs:
        x, y = _slot(a, p), _slot(b, p)
        if x != y:
            images[x], images[y] = images[y], images[x]
    return perm_matrix(Permutation(tuple(images)), d, 2 * p)


def _transposed_swap(a, b, p: int, d: int) -> np.ndarray:
    op = DenseOperator(d, 2 * p, _swaps([(a, b)], p, d))
    return np.ascontiguousarray(partial_transpose(op, range(p, 2 * p)).entries.real)


def arc_conjugation_facts(p: int, d: int, tol: float = 1e-12) -> VerificationReport:
    """The single-arc rewriting rules for every ``a < p`` and ``c' < p'``; vacuous at ``p = 1``."""
    if p < 1:
        raise ValueError("need p >= 1")
    arc = _transposed_swap(p, f"{p}'", p, d)
    devs = []
    for a in range(1, p):
        left = _swaps([(a, p)], p, d)
        devs.append(float(np.max(np.abs(arc @ left @ arc - arc))))
        for c in range(1, p):
            right = _swaps([(f"{p}'", f"{c}'")], p, d)
            if a == 1:
                devs.append(float(np.max(np.abs(arc @ right @ arc - arc))))
            first = arc @ left @ right @ arc
            second = arc @ _transposed_swap(a, f"{c}'", p, d)
            move = _swaps([(a, p - 1), (f"{p - 1}'", f"{c}'")], p, d)
            third = move @ arc @ _transposed_swap(p - 1, f"{p - 1}'", p, d) @ move
            devs.append(float(np.max(np.abs(first - second))))
            devs.append(float(np.max(np.abs(second - third))))
    return merge("squeeze.arc_facts", devs, tol, p, d)


def unit_decomposition_residual(mu, I: int, J: int, d: int) -> float:
    """Residual of the expansion of ``E^mu_{I_gamma J_alpha}`` through transpositions ``(a, p)``.

    Units are left-to-right, so ``gamma`` and ``alpha`` are irreps of the first
    ``p - 1`` slots and the ``E^gamma`` terms act there.
    """
    mu = as_partition(mu)
    p = mu.weight
    table = young_yamanouchi(mu, "LR")
    gamma, ig = table.split_index(I)
    alpha, ja = table.split_index(J)
    dg = irrep_dimension(gamma)
    scale = irrep_dimension(mu) / (p * dg)
    size = d**p
    lhs = unit_matrix(mu, I, J, d, "LR")
    rhs = np.zeros((size, size))
    for kg, K in enumerate(table.block(gamma)):
        e_gamma = np.kron(unit_matrix(gamma, ig, kg, d, "LR"), np.eye(d)) if p > 1 else np.eye(d)
        mixed = np.zeros((size, size))
        for a in range(1, p):
            t = Permutation.transposition(a, p, p)
            mixed += table(t)[J, K] * perm_matrix(t, d, p)
        rhs += scale * e_gamma @ mixed
    if alpha == gamma:
        rhs += scale * np.kron(unit_matrix(gamma, ig, ja, d, "LR"), np.eye(d))
    return float(np.max(np.abs(lhs - rhs)))


def unit_decomposition_lemma(mu, I: int, J: int, d: int, tol: float = 1e-10) -> VerificationReport:
    mu = as_partition(mu)
    return VerificationReport(
        "squeeze.unit_decomposition", mu.weight, d, unit_decomposition_residual(mu, I, J, d), tol
    )


# changes of Young basis


@lru_cache(maxsize=None)
def intertwiner(mu) -> np.ndarray:
    """Orthogonal ``U`` with ``phi_RL(s) = U^T phi_LR(s) U`` for all ``s``.

    Then ``E^LR_ij = sum_ab U_ia U_jb E^RL_ab``.
    """
    mu = as_partition(mu)
    lr, rl = young_yamanouchi(mu, "LR"), young_yamanouchi(mu, "RL")
    dim, p = lr.dimension, mu.weight
    group = enumerate_group(p)
    for r in range(dim):
        for c in range(dim):
            seed = np.zeros((dim, dim))
            seed[r, c] = 1.0
            u = sum(lr(s) @ seed @ rl(s).T for s in group) * dim / factorial(p)
            norm = np.sqrt(np.trace(u.T @ u) / dim)
            if norm > 1e-8:
                u = u / norm
                # the sign is irrelevant: U always enters an even number of times
                return u
    raise RuntimeError("no intertwiner found")


def wall_last_arc_trace(left, right, arcs: int, p: int, d: int) -> float:
    """``Tr[E^mu_ij (x) E^nu_kl V^(arcs)]`` for mirror-layout units, by closed forms.

    ``arcs = p`` is the full contraction ``delta^{mu nu} delta_ik delta_jl m_mu``.
    ``arcs = p - 1`` rotates the wall-first trace formula through the intertwiners.
    """
    mu, i, j = left
    nu, k, l = right
    mu, nu = as_partition(mu), as_partition(nu)
    if arcs == p:
        return float(multiplicity(mu, d)) if (mu == nu and i == k and j == l) else 0.0
    if arcs != p - 1:
        raise ValueError("closed form known for p - 1 and p arcs only")
    um, un = intertwiner(mu), intertwiner(nu)
    total = 0.0
    dm, dn = um.shape[0], un.shape[0]
    for a in range(dm):
        for b in range(dm):
            cl = um[i, a] * um[j, b]
            if cl == 0.0:
                continue
            for c in range(dn):
                for e in range(dn):
                    # the mirrored right unit E^RL_kl = sum U_ck U_el E^LR_ce
                    cr = un[c, k] * un[e, l]
                    if cr == 0.0:
                        continue
                    total += cl * cr * appendix_trace(mu, a, b, nu, c, e, p, d)
    return total


# the expansion


@dataclass(frozen=True)
class SqueezeExpansion:
    mu: Partition
    ij: tuple[int, int]
    nu: Partition
    kl: tuple[int, int]
    d: int
    lambda2: dict = field(default_factory=dict)
    lambda1: dict = field(default_factory=dict)
    lambda0: dict = field(default_factory=dict)
    residual: float = 0.0
    vanishing: bool = False

    def label_names(self) -> tuple[str, str]:
        i, j = self.ij
        k, l = self.kl
        return (index_name(self.mu, i) + index_name(self.mu, j),
                index_name(self.nu, k, 1) + index_name(self.nu, l, 1))

    def to_json(self) -> dict:
        ij, kl = self.label_names()
        return {
            "input": {"mu": self.mu.to_json(), "ij": ij, "nu": self.nu.to_json(), "kl": kl},
            "lambda2": {a + b: float(v) for (a, b), v in sorted(self.lambda2.items())},
            "lambda1": {f"[{a}][{b}]": float(v) for (a, b), v in sorted(self.lambda1.items())},
            "lambda0": {a + b: float(v) for (a, b), v in sorted(self.lambda0.items())},
            "residual": float(self.residual),
        }


def closed_form_coefficients(mu, ij, nu, kl, d: int) -> tuple[dict, dict, dict]:
    mu, nu = as_partition(mu), as_partition(nu)
    i, j = ij
    k, l = kl
    ni, nj = index_name(mu, i), index_name(mu, j)
    nk, nl = index_name(nu, k, 1), index_name(nu, l, 1)
    m_mu, m_nu = multiplicity(mu, d), multiplicity(nu, d)
    lam2, lam1, lam0 = {}, {}, {}
    if m_mu == 0 or m_nu == 0:
        return lam2, lam1, lam0
    t3 = wall_last_arc_trace((mu, i, j), (nu, k, l), P, P, d)
    t2 = wall_last_arc_trace((mu, i, j), (nu, k, l), P - 1, P, d)
    if mu == nu and i == k and j == l:
        lam2[(ni, nj)] = m_mu / sqrt(a22.m2(ni, d) * a22.m2(nj, d))
    q1 = t2 / d - t3 / d**2
    row, col = ni + nk, nj + nl
    binv = a22.b1_inverse_diag(col, d)
    if binv and a22.b1_inverse_diag(row, d) and abs(q1) > 0:
        lam1[(row, col)] = binv * q1 / (d * d - 1)
    if i == j and k == l:
        tr0 = a22.g0_trace_closed_form(ni, nk, d)
        if tr0 > 0 and not (d == 2 and ni != nk):
            trace_y = m_mu * m_nu / d
            g2_part = t3 / a22.m2(ni, d) if ni == nk else 0.0
            value = (trace_y - a22.b1_inverse_diag(row, d) * q1 - g2_part) / tr0
            if abs(value) > 0:
                lam0[(ni, nk)] = value
    return lam2, lam1, lam0


def extracted_coefficients(y: np.ndarray, d: int) -> tuple[dict, dict, dict]:
    """Coefficients of ``Y`` by trace pairing: ``lambda_ab = Tr(Y G_ba) / Tr(G_aa)``."""
    fam = a22.family(d)
    lookup = {
        (name, label): u.operator.entries.real
        for name, group in fam.items()
        for label, u in group
        if not u.vanishes
    }
    out = {"M2": {}, "M1": {}, "M0": {}}
    for (name, label), g in lookup.items():
        a, b = label
        if name == "M0":
            partner, diag = g, g
        else:
            partner, diag = lookup.get((name, (b, a))), lookup.get((name, (a, a)))
        if partner is None or diag is None:
            continue
        value = float(np.sum(y * partner.T)) / float(np.trace(diag))
        if abs(value) > 1e-13:
            out[name][label] = value
    return out["M2"], out["M1"], out["M0"]


def assemble(lam2: dict, lam1: dict, lam0: dict, d: int) -> np.ndarray:
    y = np.zeros((d**4, d**4))
    for (k, l), c in lam2.items():
        y += c * a22.g2_matrix(k, l, d)
    for (ab, ce), c in lam1.items():
        y += c * a22.g1_matrix(ab, ce, d)
    for (i, k), c in lam0.items():
        y += c * a22.g0_matrix(i, k, d)
    return y


def squeeze_lhs(mu, ij, nu, kl, d: int) -> np.ndarray:
    x = pair_unit_matrix((mu, *ij), (nu, *kl), d, WALL_LAST)
    v = single_arc_matrix(P, d)
    return v @ x @ v


def trace_out_arc(lhs: np.ndarray, d: int) -> np.ndarray:
    """Partial trace of a six-slot operator over slots ``3, 3'``; equals ``d Y`` for ``Y (x) V``."""
    t = lhs.reshape(d * d, d * d, d * d, d * d, d * d, d * d)
    return np.einsum("amcbme->acbe", t).reshape(d**4, d**4)


def squeeze(mu, i, j, nu, k, l, d: int) -> SqueezeExpansion:
    """Closed-form expansion plus the dense residual of ``V X V = V (x) sum lambda G``."""
    mu, nu = as_partition(mu), as_partition(nu)
    if d < 2:
        raise ValueError("need d >= 2")
    vanishing = multiplicity(mu, d) == 0 or multiplicity(nu, d) == 0
    lam2, lam1, lam0 = closed_form_coefficients(mu, (i, j), nu, (k, l), d)
    rhs = expand_contracted(DenseOperator(d, 4, assemble(lam2, lam1, lam0, d)), 1).entries.real
    lhs = squeeze_lhs(mu, (i, j), nu, (k, l), d)
    residual = float(np.max(np.abs(lhs - rhs)))
    return SqueezeExpansion(mu, (i, j), nu, (k, l), d, lam2, lam1, lam0, residual, vanishing)


def coefficient_disagreement(mu, ij, nu, kl, d: int, dense: bool = False) -> float:
    """Largest gap between closed-form and trace-extracted coefficients.

    With ``dense`` the extraction starts from the six-slot sandwich, traced
    over the arc and divided by ``d``; otherwise from :func:`contract_array`.
    """
    if dense:
        y = trace_out_arc(squeeze_lhs(mu, ij, nu, kl, d), d) / d
    else:
        x = pair_unit_matrix((mu, *ij), (nu, *kl), d, WALL_LAST)
        y = contract_array(x, P, d, 1)
    closed = closed_form_coefficients(mu, ij, nu, kl, d)
    measured = extracted_coefficients(y, d)
    gap = 0.0
    worst = None
    for c, m in zip(closed, measured):
        for key in set(c) | set(m):
            diff = abs(c.get(key, 0.0) - m.get(key, 0.0))
            if diff > gap:
                gap, worst = diff, (key, c.get(key, 0.0), m.get(key, 0.0))
    if gap > 1e-8:
        raise AssertionError(f"closed form and extraction disagree at {worst}")
    return gap


def reduced_residual(mu, ij, nu, kl, d: int) -> float:
    """Residual on the four outer slots; cheap enough for ``d = 4, 5``."""
    x = pair_unit_matrix((mu, *ij), (nu, *kl), d, WALL_LAST)
    y = contract_array(x, P, d, 1)
    return float(np.max(np.abs(y - assemble(*closed_form_coefficients(mu, ij, nu, kl, d), d))))


def admissible_inputs(d: int) -> list[tuple]:
    """All ``(mu, ij, nu, kl)`` with both units nonzero at this ``d``."""
    labels = [x for x in s3_labels() if multiplicity(x[0], d) > 0]
    return [(mu, (i, j), nu, (k, l)) for mu, i, j in labels for nu, k, l in labels]


def alternative_coefficients(mu, ij, nu, kl, d: int) -> tuple[dict, dict, dict]:
    """An alternative normalization of the coefficients, kept for comparison; it does not close the identity.

    Uses ``B[jj][jj] = m_j (m_j - 1)``, ``B[ik][ik] = m_i m_k`` for ``i != k``,
    ``lambda2 = m_mu / (d^2 sqrt(m_i m_j))`` and labels ``G1[[ii][jj]]``.
    """
    mu, nu = as_partition(mu), as_partition(nu)
    i, j = ij
    k, l = kl
    ni, nj = index_name(mu, i), index_name(mu, j)
    nk, nl = index_name(nu, k, 1), index_name(nu, l, 1)
    m_mu, m_nu = multiplicity(mu, d), multiplicity(nu, d)
    m = {"S": a22.m2("S", d), "A": a22.m2("A", d)}

    def b_alt(x: str, y: str) -> float:
        return m[x] * (m[x] - 1) if x == y else m[x] * m[y]

    lam2, lam1, lam0 = {}, {}, {}
    if mu == nu and i == k and j == l and m[ni] and m[nj]:
        lam2[(ni, nj)] = m_mu / (d * d * sqrt(m[ni] * m[nj]))
    if ni == nk and nj == nl and m[ni]:
        b = b_alt(nj, nj)
        if b:
            value = (float(ni == nj) * m_mu * m_nu / m[ni] - float(mu == nu) * m_mu / d) / (b * d * (d * d - 1))
            if value:
                lam1[(ni + ni, nj + nj)] = value
    if i == j and k == l:
        tr0 = a22.g0_trace_closed_form(ni, nk, d)
        if tr0 > 0 and m[ni]:
            b = b_alt(ni, nk)
            corr = (m_mu * m_nu / m[ni] - float(mu == nu) * m_mu / d) / b if (ni == nk and b) else 0.0
            last = float(ni == nk and mu == nu) * m_mu / (d * sqrt(m[ni] * m[nk]))
            lam0[(ni, nk)] = (m_mu * m_nu - corr - last) / (d * tr0)
    return lam2, lam1, lam0


def alternative_residual(mu, ij, nu, kl, d: int) -> float:
    lam2, lam1, lam0 = alternative_coefficients(mu, ij, nu, kl, d)
    rhs = expand_contracted(DenseOperator(d, 4, assemble(lam2, lam1, lam0, d)), 1).entries.real
    return float(np.max(np.abs(squeeze_lhs(mu, ij, nu, kl, d) - rhs)))


def squeeze_report(d: int, tol: float = 1e-9) -> VerificationReport:
    devs = [squeeze(mu, *ij, nu, *kl, d).residual for mu, ij, nu, kl in admissible_inputs(d)]
    return merge("squeeze.theorem", devs, tol, P, d)
