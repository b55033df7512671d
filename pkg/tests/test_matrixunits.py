import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from walledbrauer.matrixunits import (
    UnitLabel,
    all_labels,
    conjugate_unit,
    expand_permutation,
    matrix_unit,
    trace_last_unit,
    trace_scale_closed_form,
    unit_array,
    unit_matrix,
    unit_product_law_check,
)
from walledbrauer.partitions import Partition, enumerate_partitions, multiplicity
from walledbrauer.symgroup import Permutation, enumerate_group, reversal
from walledbrauer.tensor import perm_matrix, swap

S, A, C = Partition((2,)), Partition((1, 1)), Partition((2, 1))


def test_small_units():
    np.testing.assert_allclose(unit_matrix(Partition((1,)), 0, 0, 3), np.eye(3))
    sw = swap(3).entries.real
    np.testing.assert_allclose(unit_matrix(S, 0, 0, 3), (np.eye(9) + sw) / 2, atol=1e-15)
    np.testing.assert_allclose(unit_matrix(A, 0, 0, 3), (np.eye(9) - sw) / 2, atol=1e-15)


def test_vanishing_unit_is_explicit_zero():
    arr = unit_array(Partition((1, 1, 1)), 2)
    assert arr.shape == (1, 1, 8, 8) and not arr.any()


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("orientation", ["LR", "RL"])
def test_product_law(p, d, orientation):
    report = unit_product_law_check(p, d, orientation=orientation)
    assert report.passed, report.to_json()


def test_product_law_negative_control():
    # a perturbed unit must break the law
    arr = unit_array(C, 3).copy()
    arr[0, 0] = arr[0, 0] * 1.001
    assert np.max(np.abs(arr[0, 0] @ arr[0, 0] - arr[0, 0])) > 1e-6


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_completeness(p, d):
    total = sum(unit_array(mu, d)[i, i] for mu in enumerate_partitions(p) for i in range(unit_array(mu, d).shape[0]))
    np.testing.assert_allclose(total, np.eye(d**p), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_hermiticity_rank_and_orientation(d):
    rho = perm_matrix(reversal(3), d)
    for mu, i, j in all_labels(3):
        e = unit_matrix(mu, i, j, d)
        np.testing.assert_allclose(e.T, unit_matrix(mu, j, i, d), atol=1e-14)
        np.testing.assert_allclose(unit_matrix(mu, i, j, d, "RL"), rho @ e @ rho, atol=1e-14)
        if i == j:
            assert np.linalg.matrix_rank(e, tol=1e-9) == multiplicity(mu, d)


def test_label_json_and_lookup():
    label = UnitLabel.from_indices(C, 1, 0)
    assert label.indices == (1, 0)
    assert UnitLabel.from_json(label.to_json()) == label
    assert label.to_json()["orient"] == "LR"
    np.testing.assert_allclose(matrix_unit(label, 2).entries.real, unit_matrix(C, 1, 0, 2))


def test_expand_permutation_examples():
    coeffs = expand_permutation(Permutation.transposition(1, 2, 2))
    assert coeffs[(S, 0, 0)] == pytest.approx(1.0)
    assert coeffs[(A, 0, 0)] == pytest.approx(-1.0)
    ident = expand_permutation(Permutation.identity(3))
    assert all(v == pytest.approx(float(i == j)) for (mu, i, j), v in ident.items())


def test_permutation_reconstruction_p3():
    d = 3
    for sigma in enumerate_group(3):
        coeffs = expand_permutation(sigma)
        total = sum(c * unit_matrix(mu, i, j, d) for (mu, i, j), c in coeffs.items())
        np.testing.assert_allclose(total, perm_matrix(sigma, d), atol=1e-12)


def test_conjugation():
    d = 3
    for sigma in enumerate_group(3):
        vs, vinv = perm_matrix(sigma, d), perm_matrix(sigma.inverse(), d)
        for i in range(2):
            for j in range(2):
                label = UnitLabel.from_indices(C, i, j)
                coeffs = conjugate_unit(sigma, label)
                total = sum(c * unit_matrix(C, k, l, d) for (k, l), c in coeffs.items())
                np.testing.assert_allclose(vs @ unit_matrix(C, i, j, d) @ vinv, total, atol=1e-12)
    assert conjugate_unit(Permutation.identity(3), UnitLabel.from_indices(C, 0, 1)) == {(0, 1): 1.0}


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("orientation", ["LR", "RL"])
def test_trace_last_unit_constant(d, orientation):
    for p in (2, 3):
        for mu, i, j in all_labels(p, orientation):
            traced = trace_last_unit(UnitLabel.from_indices(mu, i, j, orientation), d)
            assert traced.residual < 1e-12
            if traced.alpha is not None:
                assert traced.scale == pytest.approx(trace_scale_closed_form(mu, traced.alpha, d), abs=1e-12)


def test_trace_last_unit_wrong_slot():
    with pytest.raises(ValueError, match="trace incompatible with construction order"):
        trace_last_unit(UnitLabel.from_indices(C, 0, 0), 3, slot=0)


def test_traced_unit_two_slot_case():
    traced = trace_last_unit(UnitLabel.from_indices(S, 0, 0), 2)
    assert traced.alpha == Partition((1,))
    assert traced.scale == pytest.approx(3 / 2)


@given(st.sampled_from(all_labels(3)), st.sampled_from(enumerate_group(3)))
def test_conjugation_preserves_trace(label, sigma):
    mu, i, j = label
    coeffs = conjugate_unit(sigma, UnitLabel.from_indices(mu, i, j))
    assert sum(c for (k, l), c in coeffs.items() if k == l) == pytest.approx(float(i == j), abs=1e-12)
