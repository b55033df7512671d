import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walledbrauer import algebra22 as a22
from walledbrauer.gram import (
    MultiIndex,
    dense_quasi_coefficients,
    generator_factors,
    ghat,
    ghat_vanishes,
    gram_block,
    gram_entry,
    gram_matrix,
    index_set,
    is_invertible,
    overlap,
    pure_basis,
    pure_law_dense_residual,
    pure_law_residual,
    q_isometry,
)
from walledbrauer.oracle import span_rank
from walledbrauer.partitions import Partition, multiplicity
from walledbrauer.suites import sample_overlap_labels
from walledbrauer.walled import q_matrix

S, A, ONE = Partition((2,)), Partition((1, 1)), Partition((1,))
C = Partition((2, 1))


def test_multi_index_validation_and_json():
    g = MultiIndex(S, A, 0, 0, ONE)
    assert MultiIndex.from_json(json.loads(json.dumps(g.to_json()))) == g
    with pytest.raises(ValueError):
        MultiIndex(Partition((3,)), Partition((1, 1, 1)), 0, 0, Partition((2,)))
    with pytest.raises(ValueError):
        MultiIndex(S, S, 1, 0, ONE)


def test_index_set_sizes():
    assert len(index_set(2)) == 4
    assert len(index_set(3)) == 18
    with pytest.raises(ValueError):
        index_set(1)


def test_gram_entry_example():
    g = MultiIndex(S, S, 0, 0, ONE)
    assert gram_entry(g, g, 2, 3) == pytest.approx(5 / 12)
    assert gram_entry(g, MultiIndex(A, A, 0, 0, ONE), 2, 3) == 0.0


def test_gram_block_shapes():
    related = gram_block(Partition((3,)), C, 3, 3)
    m = multiplicity
    assert related.shape == (1, 1)
    assert related[0, 0] == pytest.approx(m(Partition((3,)), 3) * m(C, 3) / (9 * 8 * m(S, 3)))
    assert gram_block(C, C, 3, 3).shape == (2, 2)
    with pytest.raises(ValueError):
        gram_block(Partition((3,)), Partition((1, 1, 1)), 3, 3)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_gram_matrix_structure(p, d):
    gm = gram_matrix(p, d)
    np.testing.assert_allclose(gm.entries, gm.entries.T)
    for a, g in enumerate(gm.index_set):
        for b, h in enumerate(gm.index_set):
            if g.pair != h.pair or (g.row_left, g.row_right) != (h.row_left, h.row_right):
                assert gm.entries[a, b] == 0.0


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_quasi_multiplication_closed_form(p, d):
    measured, spread = dense_quasi_coefficients(p, d)
    assert spread < 1e-10
    np.testing.assert_allclose(measured, gram_matrix(p, d).entries, atol=1e-10)


def test_quasi_multiplication_dense_p2():
    p, d = 2, 3
    idx = index_set(p)
    b = gram_matrix(p, d).entries
    ops = {(x, y): ghat(g, h, p, d).entries for x, g in enumerate(idx) for y, h in enumerate(idx)}
    for (g, dd), x in ops.items():
        for (l, pp), y in ops.items():
            np.testing.assert_allclose(x @ y, b[dd, l] * ops[(g, pp)], atol=1e-10)


@pytest.mark.slow
def test_quasi_multiplication_dense_p3_sample():
    p, d = 3, 3
    idx = index_set(p)
    b = gram_matrix(p, d).entries
    rng = np.random.default_rng(3)
    for _ in range(3):
        g, dd, pp = rng.integers(len(idx), size=3)
        lam = dd  # same block so the coefficient is nonzero
        lhs = ghat(idx[g], idx[dd], p, d).entries @ ghat(idx[lam], idx[pp], p, d).entries
        np.testing.assert_allclose(lhs, b[dd, lam] * ghat(idx[g], idx[pp], p, d).entries, atol=1e-10)


def test_ghat_adjoint_symmetry():
    p, d = 3, 2
    idx = index_set(p)
    for g in idx[::3]:
        for h in idx[::4]:
            np.testing.assert_allclose(ghat(g, h, p, d).entries.T, ghat(h, g, p, d).entries, atol=1e-12)


def test_ghat_vanishing_flag():
    tri = Partition((1, 1, 1))
    g = MultiIndex(tri, tri, 0, 0, Partition((1, 1)))
    assert ghat_vanishes(g, g, 2)
    assert not np.any(ghat(g, g, 3, 2).entries)
    with pytest.raises(ValueError):
        ghat(MultiIndex(S, S, 0, 0, ONE), g, 3, 2)


@pytest.mark.slow
def test_free_index_independence():
    # the common child (2,1) of (3,1) has two branching paths, first reachable at weight four
    p, d = 4, 2
    idx = [g for g in index_set(p) if g.kappa == C][:4]
    for g in idx:
        for h in idx:
            np.testing.assert_allclose(ghat(g, h, p, d, choice=0).entries, ghat(g, h, p, d, choice=1).entries,
                                       atol=1e-11)


def test_q_isometry():
    for p, d in [(2, 2), (2, 3), (3, 2)]:
        w = q_isometry(p, d)
        np.testing.assert_allclose(w.T @ w, np.eye(d * d - 1), atol=1e-12)
        np.testing.assert_allclose(w @ w.T, q_matrix(p - 1, p, d), atol=1e-12)


def test_generator_factors_reconstruct():
    fac = generator_factors(2, 3)
    for a in range(4):
        for b in range(4):
            np.testing.assert_allclose(fac.operator(a, b), ghat(fac.indices[a], fac.indices[b], 2, 3).entries,
                                       atol=1e-12)


def test_invertibility_predicate():
    assert is_invertible(2, 3).invertible
    inv = is_invertible(2, 2)
    assert not inv.invertible and inv.witnesses == (A,)
    assert is_invertible(3, 3).witnesses == (Partition((1, 1, 1)),)
    assert is_invertible(3, 2).witnesses == (C,)
    assert is_invertible(2, 4).invertible


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_pure_basis_law(p, d):
    basis = pure_basis(p, d)
    assert pure_law_residual(basis) < 1e-10


def test_pure_basis_law_dense_and_idempotents():
    basis = pure_basis(2, 3)
    n = basis.size
    quads = [(a, b, c, e) for a in range(n) for b in range(n) for c in range(n) for e in range(n)]
    assert pure_law_dense_residual(basis, quads) < 1e-10
    for a in range(n):
        g = basis.operator(a, a).entries
        np.testing.assert_allclose(g @ g, g, atol=1e-10)


def test_pure_basis_singular_handling():
    basis = pure_basis(2, 2)
    assert basis.size == 3
    assert [str(x) for x in basis.dropped] == ["[(1,1),(1,1);0,0;(1)]"]
    with pytest.raises(ValueError, match="singular"):
        pure_basis(2, 2, allow_singular=False)
    assert pure_basis(3, 3).size == 17
    assert pure_basis(3, 2).size == 9


@pytest.mark.parametrize("d", [2, 3])
def test_pure_basis_matches_explicit_two_pair_family(d):
    basis = pure_basis(2, d)
    names = {(S, S): "SS", (S, A): "SA", (A, S): "AS", (A, A): "AA"}
    for a, g in enumerate(basis.labels):
        for b, h in enumerate(basis.labels):
            explicit = a22.g1_unit(names[g.pair], names[h.pair], d).operator.entries.real
            np.testing.assert_allclose(basis.operator(a, b).entries, explicit, atol=1e-10)


def test_pure_basis_spans_generator_family():
    p, d = 2, 3
    idx = index_set(p)
    gens = [ghat(g, h, p, d).entries for g in idx for h in idx]
    basis = pure_basis(p, d)
    pure = [basis.operator(a, b).entries for a in range(basis.size) for b in range(basis.size)]
    assert span_rank(gens) == span_rank(pure) == span_rank(gens + pure) == 16


def test_overlap_rejects_degenerate_pair():
    label = ((S, 0, 0), (S, 0, 0))
    with pytest.raises(ValueError):
        overlap(1, 1, (label,) * 4, 2, 3)


def test_overlap_two_pair_example():
    label = ((S, 0, 0), (S, 0, 0))
    dense, reduced = overlap(1, 2, (label,) * 4, 2, 3)
    assert dense == pytest.approx(reduced, abs=1e-10)
    assert dense != pytest.approx(0.0)


@settings(max_examples=15)
@given(st.integers(0, 1), st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.integers(0, 2**16))
def test_overlap_paths_agree(r, pd, seed):
    p, d = pd
    rng = random.Random(seed)
    for s in range(r + 1, p + 1):
        labels = sample_overlap_labels(p, rng, diagonal_only=seed % 2 == 0)
        dense, reduced = overlap(r, s, labels, p, d)
        assert dense == pytest.approx(reduced, abs=1e-9 * max(1.0, abs(dense)))
