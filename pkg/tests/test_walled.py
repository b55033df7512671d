import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from walledbrauer.matrixunits import all_labels, unit_matrix
from walledbrauer.partitions import Partition
from walledbrauer.symgroup import enumerate_group, reversal
from walledbrauer.tensor import DenseOperator, partial_trace, partial_transpose, perm_matrix, perm_operator
from walledbrauer.walled import (
    WALL_FIRST,
    ArcConfig,
    appendix_sandwich_coeffs,
    appendix_trace,
    arc_operator,
    arc_slots,
    complement_arcs,
    contract,
    expand_contracted,
    pair_unit_matrix,
    q_matrix,
    q_projector,
    q_sandwich_check,
    q_sandwich_coeff,
    q_trace_closed_form,
    v_matrix,
)

S, A = Partition((2,)), Partition((1, 1))


def test_arc_config_validation():
    with pytest.raises(ValueError):
        ArcConfig(2, 3, 3)
    with pytest.raises(ValueError):
        ArcConfig(0, 3, 0)
    with pytest.raises(ValueError):
        arc_slots(2, 2)
    assert arc_slots(3, 0) == (2, 3) and arc_slots(3, 2) == (0, 5)


def test_no_arcs_is_identity():
    np.testing.assert_allclose(arc_operator(ArcConfig(2, 3, 0)).entries, np.eye(81))


def test_single_arc_is_scaled_max_entangled():
    v = arc_operator(ArcConfig(1, 2, 1)).entries.real
    phi = np.array([1, 0, 0, 1.0])
    np.testing.assert_allclose(v, np.outer(phi, phi))


@pytest.mark.parametrize("p,d", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_arc_idempotence_up_to_scale(p, d):
    for r in range(p + 1):
        v = v_matrix(p, d, r)
        np.testing.assert_allclose(v @ v, d**r * v, atol=1e-12)
        assert np.trace(v) == pytest.approx(d ** (2 * p - r))


def test_complement_arcs_compose():
    p, d = 3, 2
    full = v_matrix(p, d, 3)
    np.testing.assert_allclose(v_matrix(p, d, 1) @ complement_arcs(p, d, 1, 3).entries.real, full)
    with pytest.raises(ValueError):
        complement_arcs(p, d, 2, 1)


@pytest.mark.parametrize("p,d", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_q_family(p, d):
    qs = [q_matrix(k, p, d) for k in range(p + 1)]
    np.testing.assert_allclose(sum(qs), np.eye(d ** (2 * p)), atol=1e-12)
    for k, a in enumerate(qs):
        assert np.trace(a) == pytest.approx(q_trace_closed_form(k, p, d))
        for l, b in enumerate(qs):
            np.testing.assert_allclose(a @ b, a if k == l else 0 * a, atol=1e-12)


def test_q_examples():
    assert q_trace_closed_form(1, 2, 3) == 8
    assert q_trace_closed_form(2, 2, 3) == 1
    np.testing.assert_allclose(q_projector(0, 2, 3).entries.real, np.eye(81) - v_matrix(2, 3, 1) / 3)
    with pytest.raises(ValueError):
        q_projector(3, 2, 3)


def _random_walled(p, d, rng):
    """Random combination of walled diagrams (partial transposes of permutations)."""
    out = 0
    for sigma in enumerate_group(2 * p):
        if rng.random() < 0.3:
            out = out + rng.normal() * partial_transpose(perm_operator(sigma, d, 2 * p), range(p, 2 * p)).entries
    return DenseOperator(d, 2 * p, out)


@pytest.mark.parametrize("p,d,r", [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2)])
def test_contraction_factorizes(p, d, r):
    rng = np.random.default_rng(7 + r)
    x = _random_walled(p, d, rng)
    v = v_matrix(p, d, r)
    reduced = contract(x, r)
    assert reduced.arity == 2 * (p - r)
    np.testing.assert_allclose(v @ x.entries @ v, expand_contracted(reduced, r).entries, atol=1e-9)
    # the division rule: partial trace over the arc slots divided by d^r
    arc_slots_ = sorted(s for j in range(r) for s in arc_slots(p, j))
    traced = partial_trace(DenseOperator(d, 2 * p, v @ x.entries @ v), arc_slots_).entries / d**r
    np.testing.assert_allclose(traced, reduced.entries, atol=1e-9)


def test_contract_identity_and_zero_arcs():
    one = DenseOperator(2, 4, np.eye(16))
    assert contract(one, 0) is one
    np.testing.assert_allclose(contract(one, 1).entries, 2 * np.eye(4))
    with pytest.raises(ValueError):
        contract(one, 3)


def test_contract_symmetric_pair_lands_in_one_pair_algebra():
    d = 3
    x = DenseOperator(d, 4, pair_unit_matrix((S, 0, 0), (S, 0, 0), d))
    y = contract(x, 1).entries.real
    basis = np.stack([np.eye(9).ravel(), v_matrix(1, d, 1).ravel()], axis=1)
    coef, *_ = np.linalg.lstsq(basis, y.ravel(), rcond=None)
    np.testing.assert_allclose(basis @ coef, y.ravel(), atol=1e-12)


def test_appendix_examples():
    assert appendix_trace(S, 0, 0, S, 0, 0, 2, 3) == pytest.approx(12.0)
    a, b = appendix_sandwich_coeffs(S, 0, 0, S, 0, 0, 2, 3)
    assert (a, b) == pytest.approx((0.25, 1.25))
    c = Partition((2, 1))
    assert appendix_trace(c, 0, 0, c, 1, 1, 3, 3) == 0.0
    assert appendix_sandwich_coeffs(c, 0, 1, c, 1, 1, 3, 3) == (0.0, 0.0)
    with pytest.raises(ValueError):
        appendix_trace(S, 0, 0, S, 0, 0, 3, 3)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_appendix_trace_dense(p, d):
    vp1 = v_matrix(p, d, p - 1)
    for left in all_labels(p, WALL_FIRST[0]):
        for right in all_labels(p, WALL_FIRST[1]):
            x = pair_unit_matrix(left, right, d, WALL_FIRST)
            assert float(np.sum(x * vp1)) == pytest.approx(appendix_trace(*left, *right, p, d), abs=1e-10)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2)])
def test_appendix_sandwich_dense(p, d):
    vp1, vp = v_matrix(p, d, p - 1), v_matrix(p, d, p)
    for left in all_labels(p, WALL_FIRST[0]):
        for right in all_labels(p, WALL_FIRST[1]):
            x = pair_unit_matrix(left, right, d, WALL_FIRST)
            a, b = appendix_sandwich_coeffs(*left, *right, p, d)
            np.testing.assert_allclose(vp1 @ x @ vp1, a * vp + b * vp1, atol=1e-10)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2)])
def test_q_sandwich(p, d):
    report = q_sandwich_check(p, d)
    assert report.passed, report.to_json()


@given(st.integers(2, 3), st.integers(2, 5), st.data())
def test_q_coefficient_matches_arc_coefficient(p, d, data):
    # both coefficients share one numerator; only the normalization differs
    left = data.draw(st.sampled_from(all_labels(p, WALL_FIRST[0])))
    right = data.draw(st.sampled_from(all_labels(p, WALL_FIRST[1])))
    _, b = appendix_sandwich_coeffs(*left, *right, p, d)
    assert q_sandwich_coeff(*left, *right, p, d) == pytest.approx(b / d ** (p - 1), abs=1e-12)


def test_layout_conjugacy():
    # the second side in the mirror layout equals the reversed side
    d = 2
    rho = perm_matrix(reversal(2), d)
    e = unit_matrix(S, 0, 0, d, "RL")
    np.testing.assert_allclose(e, rho @ unit_matrix(S, 0, 0, d) @ rho)
