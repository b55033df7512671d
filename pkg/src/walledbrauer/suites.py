"""Claim runners shared by the command line and the acceptance tests.

Each runner returns a list of :class:`VerificationReport`, one per claim.
Dense computations are the reference; closed forms are what is checked.
"""

from __future__ import annotations

import random

import numpy as np

from . import algebra22 as a22
from . import contraction33 as c33
from .gram import (
    dense_quasi_coefficients,
    gram_matrix,
    is_invertible,
    overlap,
    pure_basis,
    pure_law_dense_residual,
    pure_law_residual,
)
from .matrixunits import all_labels, unit_array, unit_product_law_check
from .oracle import VerificationReport, merge, normalized_deviation, span_rank
from .partitions import enumerate_partitions
from .symgroup import young_yamanouchi
from .walled import (
    WALL_FIRST,
    appendix_sandwich_coeffs,
    appendix_trace,
    pair_unit_matrix,
    q_matrix,
    q_sandwich_check,
    q_trace_closed_form,
    v_matrix,
)

SUITES = ("units", "q", "gram", "a22", "squeeze", "appendix")


def unit_reports(p: int, d: int, tol: float = 1e-11) -> list[VerificationReport]:
    out = []
    for orientation in ("LR", "RL"):
        r = unit_product_law_check(p, d, tol, orientation)
        out.append(VerificationReport(f"units.law_{orientation}", p, d, r.max_abs_deviation, tol, r.n_cases))
    return out


def q_reports(p: int, d: int, tol: float = 1e-11) -> list[VerificationReport]:
    qs = [q_matrix(k, p, d) for k in range(p + 1)]
    orth = []
    for k, a in enumerate(qs):
        for l, b in enumerate(qs):
            target = a if k == l else np.zeros_like(a)
            orth.append(normalized_deviation(a @ b, target))
    complete = normalized_deviation(sum(qs), np.eye(d ** (2 * p)))
    traces = [abs(np.trace(q) - q_trace_closed_form(k, p, d)) for k, q in enumerate(qs)]
    return [
        merge("q.orthogonality", orth, tol, p, d),
        VerificationReport("q.completeness", p, d, complete, tol),
        merge("q.trace", traces, tol, p, d),
    ]


def _pair_labels(p: int):
    labels = all_labels(p, WALL_FIRST[0])
    return [(a, b) for a in labels for b in all_labels(p, WALL_FIRST[1])]


def appendix_reports(p: int, d: int, tol: float = 1e-10) -> list[VerificationReport]:
    if p < 2:
        raise ValueError("the one-free-pair formulas need p >= 2")
    vp1, vp = v_matrix(p, d, p - 1), v_matrix(p, d, p)
    traces, sandwiches = [], []
    for left, right in _pair_labels(p):
        x = pair_unit_matrix(left, right, d, WALL_FIRST)
        args = (*left, *right, p, d)
        traces.append(abs(float(np.sum(x * vp1)) - appendix_trace(*args)))
        a, b = appendix_sandwich_coeffs(*args)
        sandwiches.append(normalized_deviation(vp1 @ x @ vp1, a * vp + b * vp1))
    return [
        merge("appendix.trace", traces, tol, p, d),
        merge("appendix.sandwich", sandwiches, tol, p, d),
        q_sandwich_check(p, d, tol),
    ]


def sample_overlap_labels(p: int, rng: random.Random, diagonal_only: bool = False):
    """Labels ``(A, B, C, D)`` chosen so that ``D A`` and ``B C`` are nonzero pair units.

    ``diagonal_only`` uses one diagonal pair unit for all four, which makes
    most traces nonzero.
    """

    def pick(mu=None, i=None, j=None, side=0):
        if mu is None:
            mu = rng.choice(enumerate_partitions(p))
        n = young_yamanouchi(mu, WALL_FIRST[side]).dimension
        return (mu, rng.randrange(n) if i is None else i, rng.randrange(n) if j is None else j)

    def diagonal(side):
        unit = pick(side=side)
        return (unit[0], unit[1], unit[1])

    if diagonal_only:
        a = (diagonal(0), diagonal(1))
        return a, a, a, a
    a = (pick(), pick(side=1))
    b = (pick(), pick(side=1))
    c = (pick(b[0][0], b[0][2]), pick(b[1][0], b[1][2], side=1))
    dd = (pick(a[0][0], None, a[0][1]), pick(a[1][0], None, a[1][1], side=1))
    return a, b, c, dd


def overlap_report(p: int, d: int, samples: int = 6, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    """Direct dense traces against the contract-and-ping-pong evaluation."""
    rng = random.Random(seed)
    devs, nonzero = [], 0
    for r in range(p):
        for s in range(r + 1, p + 1):
            for n in range(samples):
                labels = sample_overlap_labels(p, rng, diagonal_only=n % 2 == 0)
                dense, reduced = overlap(r, s, labels, p, d)
                scale = max(1.0, abs(dense))
                devs.append(abs(dense - reduced) / scale)
                nonzero += abs(dense) > 1e-9
    report = merge("gram.overlap", devs, tol, p, d)
    return VerificationReport(report.claim_id, p, d, report.max_abs_deviation, tol, report.n_cases,
                              {"nonzero": nonzero})


def gram_reports(p: int, d: int, tol: float = 1e-9) -> list[VerificationReport]:
    if p < 2:
        raise ValueError("the Gram construction needs p >= 2")
    measured, spread = dense_quasi_coefficients(p, d)
    closed = gram_matrix(p, d).entries
    basis = pure_basis(p, d)
    inv = is_invertible(p, d)
    out = [
        VerificationReport("gram.coefficients", p, d, float(np.max(np.abs(measured - closed))), tol),
        VerificationReport("gram.core_scalar", p, d, spread, tol),
        VerificationReport("gram.pure_law", p, d, pure_law_residual(basis), tol, basis.size,
                           {"invertible": inv.invertible, "witnesses": [w.to_json() for w in inv.witnesses]}),
        overlap_report(p, d, tol=tol),
    ]
    if p == 2:
        n = basis.size
        quads = [(a, b, c, e) for a in range(n) for b in range(n) for c in range(n) for e in range(n)]
        out.append(merge("gram.pure_law_dense", [pure_law_dense_residual(basis, quads)], tol, p, d))
    return out


def _law_residual(units: dict, scalar: bool) -> float:
    """Matrix-unit law inside one family; ``scalar`` families are orthogonal idempotents."""
    worst = 0.0
    for (a, b), x in units.items():
        for (c, e), y in units.items():
            if scalar:
                target = x if (a, b) == (c, e) else 0.0
            else:
                target = units[(a, e)] if b == c else 0.0
            worst = max(worst, float(np.max(np.abs(x @ y - target))))
    return worst


def a22_reports(d: int, tol: float = 1e-10) -> list[VerificationReport]:
    fam = a22.family(d)
    live = {
        name: {label: u.operator.entries.real for label, u in group if not u.vanishes}
        for name, group in fam.items()
    }
    out = []
    rank = span_rank(a22.generators(d))
    dec = a22.decompose_22(d)
    out.append(VerificationReport("a22.dimension", 2, d, float(abs(rank - dec.total_dimension)), 0.0, 1,
                                  {"span_rank": rank, "blocks": dec.signature()}))
    out.append(VerificationReport("a22.law_M2", 2, d, _law_residual(live["M2"], False), tol))
    out.append(VerificationReport("a22.law_M1", 2, d, _law_residual(live["M1"], False), tol))
    out.append(VerificationReport("a22.law_M0", 2, d, _law_residual(live["M0"], True), tol))
    cross = 0.0
    names = list(live)
    for x in names:
        for y in names:
            if x == y:
                continue
            for g in live[x].values():
                for h in live[y].values():
                    cross = max(cross, float(np.max(np.abs(g @ h))))
    out.append(VerificationReport("a22.annihilation", 2, d, cross, tol))
    g2, g1, g0 = (p.entries.real for p in a22.projectors(d))
    proj = max(float(np.max(np.abs(x @ x - x))) for x in (g2, g1, g0))
    out.append(VerificationReport("a22.projectors", 2, d, proj, tol))
    excluded_aa = d == 2
    traces = [
        abs(np.trace(g2) - 2),
        abs(np.trace(g1) - (3 if excluded_aa else 4) * (d * d - 1)),
    ]
    for (i, j), u in fam["M0"]:
        expected = 0.0 if (d == 2 and (i, j) != ("S", "S")) else a22.g0_trace_closed_form(i, j, d)
        traces.append(abs(np.trace(u.operator.entries.real) - expected))
    for (ij, kl), u in fam["M1"]:
        if ij == kl and not u.vanishes:
            traces.append(abs(np.trace(u.operator.entries.real) - (d * d - 1)))
    out.append(merge("a22.traces", traces, tol, 2, d))
    measured, _ = dense_quasi_coefficients(2, d)
    out.append(VerificationReport("a22.b1", 2, d, float(np.max(np.abs(measured - a22.b1_matrix(d)))), tol))
    out.append(VerificationReport("a22.q2_rep", 2, d,
                                  float(np.max(np.abs(a22.q2_rep_matrix_dense(d) - a22.q2_rep_matrix(d)))), tol))
    orient = max(
        float(np.max(np.abs(unit_array(mu, d, "LR") - unit_array(mu, d, "RL"))))
        for mu in enumerate_partitions(2)
    )
    out.append(VerificationReport("a22.orientation", 2, d, orient, tol))
    out.append(a22.n0_not_ideal_witness(d, tol))
    return out


def squeeze_reports(d: int, tol: float = 1e-9) -> list[VerificationReport]:
    out = [c33.squeeze_report(d, tol)]
    gaps = [c33.coefficient_disagreement(mu, ij, nu, kl, d) for mu, ij, nu, kl in c33.admissible_inputs(d)]
    out.append(merge("squeeze.extraction", gaps, tol, 3, d))
    for p in (2, 3):
        out.append(c33.arc_conjugation_facts(p, d))
        lemma = []
        for mu in enumerate_partitions(p):
            n = young_yamanouchi(mu).dimension
            lemma += [c33.unit_decomposition_residual(mu, i, j, d) for i in range(n) for j in range(n)]
        out.append(merge("squeeze.unit_decomposition", lemma, 1e-10, p, d))
        arc = c33.single_arc_matrix(p, d)
        traces = []
        for left in all_labels(p, "LR"):
            for right in all_labels(p, "RL"):
                x = pair_unit_matrix(left, right, d)
                traces.append(abs(float(np.sum(x * arc)) - c33.single_arc_trace(*left, *right, p, d)))
        out.append(merge("squeeze.single_arc_trace", traces, 1e-11, p, d))
    return out


def run_suite(name: str, p: int, d: int, tol: float | None = None) -> list[VerificationReport]:
    """Dispatch by suite name; ``tol`` overrides each claim's default tolerance."""
    kw = {} if tol is None else {"tol": tol}
    if name == "units":
        return unit_reports(p, d, **kw)
    if name == "q":
        return q_reports(p, d, **kw)
    if name == "appendix":
        return appendix_reports(p, d, **kw)
    if name == "gram":
        return gram_reports(p, d, **kw)
    if name == "a22":
        return a22_reports(d, **kw)
    if name == "squeeze":
        return squeeze_reports(d, **kw)
    if name == "all":
        out = []
        for suite in SUITES:
            if suite in ("appendix", "gram") and p < 2:
                continue
            out += run_suite(suite, p, d, tol)
        return out
    raise ValueError(f"unknown suite {name!r}")
