import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from walledbrauer import algebra22 as a22
from walledbrauer.gram import dense_quasi_coefficients
from walledbrauer.oracle import (
    VerificationReport,
    assert_equal,
    dense_gram,
    merge,
    normalized_deviation,
    span_rank,
)
from walledbrauer.tensor import DenseOperator
from walledbrauer.walled import q_matrix, v_matrix


def test_report_pass_flag_and_json():
    ok = VerificationReport("x", 2, 3, 1e-12, 1e-11)
    bad = VerificationReport("x", 2, 3, 2e-11, 1e-11)
    assert ok.passed and not bad.passed
    data = json.loads(ok.dumps())
    assert set(data) == {"claim_id", "p", "d", "max_abs_deviation", "tolerance", "pass", "n_cases"}
    assert data["pass"] is True
    assert not VerificationReport("x", None, None, float("nan"), 1.0).passed


def test_dense_gram_examples():
    np.testing.assert_allclose(dense_gram([np.eye(2)[:, [0]] @ np.eye(2)[[0]], np.diag([0.0, 1.0])]), np.eye(2))
    d = 3
    plus = v_matrix(1, d, 1) / d
    np.testing.assert_allclose(dense_gram([np.eye(9) - plus, plus]), np.diag([8.0, 1.0]), atol=1e-12)
    with pytest.raises(ValueError):
        dense_gram([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        dense_gram([])


def test_dense_gram_accepts_operators_and_complex():
    op = DenseOperator(2, 1, np.array([[0, 1j], [-1j, 0]]))
    g = dense_gram([op, op])
    assert np.allclose(g, 2)


def test_gram_of_middle_generators_matches_normalization():
    d = 3
    gens = [a22.g1hat_matrix(a, a, d) for a in a22.PAIRS]
    frob = np.diag(dense_gram(gens))
    measured, _ = dense_quasi_coefficients(2, d)
    # Ghat^2 = Bhat Ghat and Tr Ghat = Bhat (d^2 - 1), so the Frobenius norm is Bhat^2 (d^2 - 1)
    np.testing.assert_allclose(frob, np.diag(measured) ** 2 * (d * d - 1), atol=1e-10)
    np.testing.assert_allclose(np.diag(measured), np.array([5, 3, 3, 1]) / 12, atol=1e-12)


def test_span_rank():
    assert span_rank(a22.generators(3)) == 23
    fam = [np.eye(4), np.diag([1.0, 0, 0, 0])]
    assert span_rank(fam + fam) == span_rank(fam) == 2
    assert span_rank([np.zeros((2, 2))]) == 0


@pytest.mark.slow
def test_span_rank_four():
    assert span_rank(a22.generators(4)) == 24


def test_assert_equal_and_negative_control():
    q1, q2 = q_matrix(1, 2, 3), q_matrix(2, 2, 3)
    assert assert_equal(q1, q1, "same", 0.0).max_abs_deviation == 0.0
    assert assert_equal(q1 @ q2, np.zeros_like(q1), "orth", 1e-11).passed
    broken = q1 @ (q2 + 1e-6 * np.eye(81))
    assert not assert_equal(broken, np.zeros_like(q1), "orth", 1e-11).passed
    with pytest.raises(ValueError):
        normalized_deviation(np.eye(2), np.eye(3))


def test_normalization_only_above_one():
    assert normalized_deviation(np.array([0.5]), np.array([0.4])) == pytest.approx(0.1)
    assert normalized_deviation(np.array([10.0]), np.array([9.0])) == pytest.approx(0.1)


def test_merge():
    r = merge("m", [1e-13, 3e-12, 0.0], 1e-11, 2, 3)
    assert r.n_cases == 3 and r.max_abs_deviation == 3e-12 and r.passed
    assert merge("m", [], 0.0).passed


@given(st.integers(1, 5), st.integers(0, 2**16))
def test_gram_is_psd_and_rank_invariant(n, seed):
    rng = np.random.default_rng(seed)
    fam = [rng.normal(size=(3, 3)) for _ in range(n)]
    g = dense_gram(fam)
    np.testing.assert_allclose(g, g.T, atol=1e-12)
    assert np.min(np.linalg.eigvalsh(g)) > -1e-11 * max(1.0, np.max(g))
    mixed = fam[::-1] + [sum(fam)]
    assert span_rank(mixed) == span_rank(fam)
