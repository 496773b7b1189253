import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bephase import criteria, linalg, states
from bephase.errors import DegenerateFilterError, DimensionMismatchError, FidelityOutOfRangeError, PTooSmallError

from conftest import random_hermitian


@pytest.mark.parametrize("m", range(3, 7))
def test_pt_of_max_entangled_is_swap_over_m(m):
    pt = criteria.partial_transpose(states.maximally_entangled(m).projector())
    w = np.linalg.eigvalsh(pt)
    assert w[0] == pytest.approx(-1 / m, abs=1e-12)
    # SWAP/m: symmetric subspace +1/m, antisymmetric -1/m
    assert np.sum(np.isclose(w, -1 / m)) == m * (m - 1) // 2


def test_pt_sides_are_transposes_of_each_other(rng):
    rho = states.random_density(2, 3, seed=4)
    np.testing.assert_allclose(criteria.partial_transpose(rho, side="A"), criteria.partial_transpose(rho, side="B").T, atol=1e-15)


def test_ppt_check(phi2):
    res = criteria.ppt_check(phi2)
    assert not res
    assert res.min_eigenvalue == pytest.approx(-0.5)
    assert criteria.ppt_check(states.cv_bes(states.CvBesParams(0.4, 0.6, 5)))


def test_lambda_p_examples(rng):
    x = np.diag([1.0, 0.0])
    np.testing.assert_allclose(criteria.lambda_p_apply(x, 2), np.diag([0.0, 1.0]))
    for m, p in [(3, 2), (4, 3), (5, 5)]:
        np.testing.assert_allclose(criteria.lambda_p_apply(np.eye(m), p), (m - 1 / (p - 1)) * np.eye(m), atol=1e-14)
    h = random_hermitian(rng, 4)
    got = np.trace(criteria.lambda_p_apply(h, 3))
    assert got == pytest.approx((4 - 0.5) * np.trace(h), abs=1e-12)
    with pytest.raises(PTooSmallError):
        criteria.lambda_p_apply(h, 1)


def test_id_lambda_p_matches_definition(rng):
    rho = states.random_density(3, 2, seed=8)
    p = 3
    # apply Lambda_p to every B-block of rho
    t = rho.mat.reshape(3, 2, 3, 2)
    out = np.zeros_like(t)
    for i in range(3):
        for k in range(3):
            out[i, :, k, :] = criteria.lambda_p_apply(t[i, :, k, :], p)
    np.testing.assert_allclose(criteria.id_lambda_p(rho, p), out.reshape(6, 6), atol=1e-14)


@pytest.mark.parametrize("m,p", [(4, 3), (2, 2), (3, 2), (5, 4)])
def test_p_reduction_value_max_entangled(m, p):
    v = states.maximally_entangled(m)
    wv = criteria.p_reduction_value(v.projector(), v, p)
    assert wv.value == pytest.approx(1 / m - 1 / (p - 1), abs=1e-12)
    assert wv.revalidate(v.projector())


def test_p_reduction_value_isotropic():
    wv = criteria.p_reduction_value(states.isotropic(3, 0.7), states.maximally_entangled(3), 3)
    assert wv.value == pytest.approx(1 / 3 - 0.35, abs=1e-12)
    assert wv.is_violation


def test_p_reduction_value_product_state_nonnegative():
    rho = states.product_density(states.random_density(3, 1, seed=1).mat, states.random_density(3, 1, seed=2).mat)
    for s in range(20):
        psi = states.random_vector(3, 3, seed=s)
        assert criteria.p_reduction_value(rho, psi, 2).value >= -1e-12


def test_p_reduction_value_dimension_mismatch(phi2):
    with pytest.raises(DimensionMismatchError):
        criteria.p_reduction_value(phi2, states.maximally_entangled(3), 2)


def test_witness_revalidate_detects_wrong_state(phi2):
    wv = criteria.p_reduction_value(phi2, states.maximally_entangled(2), 2)
    assert not wv.revalidate(states.isotropic(2, 0.6))


def test_realignment_values():
    prod = states.DensityOperator(np.diag([1.0, 0, 0, 0]), 2, 2)
    assert criteria.realignment_value(prod) == pytest.approx(1.0)
    for m in (2, 3, 4):
        assert criteria.realignment_value(states.maximally_entangled(m).projector()) == pytest.approx(m, abs=1e-12)
    white = states.DensityOperator(np.eye(6) / 6, 2, 3)
    assert criteria.realignment_value(white) <= 1 + 1e-12


def test_realignment_brute_force(rng):
    rho = states.random_density(2, 3, seed=3)
    r = np.zeros((4, 9), dtype=complex)
    for i in range(2):
        for j in range(3):
            for k in range(2):
                for l in range(3):
                    r[i * 2 + k, j * 3 + l] = rho.mat[i * 3 + j, k * 3 + l]
    assert criteria.realignment_value(rho) == pytest.approx(np.sum(np.linalg.svd(r, compute_uv=False)), abs=1e-12)


@pytest.mark.parametrize("m,f,want", [(3, 0.7, 3), (4, 1.0, 4), (5, 1.0, 5), (4, 0.25, 1), (3, 1 / 3, 1), (3, 0.34, 2)])
def test_isotropic_schmidt_bound(m, f, want):
    assert criteria.isotropic_schmidt_bound(m, f) == want


def test_isotropic_schmidt_bound_range():
    with pytest.raises(FidelityOutOfRangeError):
        criteria.isotropic_schmidt_bound(3, 1.2)


def test_filter_identity_is_noop():
    rho = states.random_density(3, 3, seed=2)
    np.testing.assert_allclose(criteria.local_filter(rho, np.eye(3)).mat, rho.mat, atol=1e-14)


def test_filter_preserves_ppt_on_cv_bes():
    rho = states.cv_bes(states.CvBesParams(0.4, 0.6, 5))
    r = np.random.default_rng(77)
    for _ in range(100):
        a = r.standard_normal((5, 5)) + 1j * r.standard_normal((5, 5))
        rep = criteria.local_filter_invariance_check(rho, a)
        assert rep.ppt_before and rep.ppt_after and rep.ppt_preserved


def test_filter_on_singlet_reported(phi2):
    rep = criteria.local_filter_invariance_check(phi2, np.diag([1.0, 0.5]))
    assert not rep.ppt_before
    assert not rep.ppt_after


def test_filter_degenerate(phi2):
    with pytest.raises(DegenerateFilterError):
        criteria.local_filter(states.DensityOperator(np.diag([1.0, 0, 0, 0]), 2, 2), np.diag([0.0, 1.0]))


def test_state_hash_stable():
    a = states.isotropic(3, 0.7)
    b = states.isotropic(3, 0.7)
    assert criteria.state_hash(a) == criteria.state_hash(b)
    assert criteria.state_hash(a) != criteria.state_hash(states.isotropic(3, 0.71))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_pt_preserves_trace_and_hermiticity(da, db, seed):
    rho = states.random_density(da, db, seed=seed)
    pt = criteria.partial_transpose(rho)
    assert abs(np.trace(pt) - 1) < 1e-12
    assert linalg.is_hermitian(pt)
    np.testing.assert_allclose(criteria.partial_transpose(pt, rho.dims), rho.mat, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_separable_mixtures_satisfy_reduction(d, seed):
    r = np.random.default_rng(seed)
    parts = [states.product_density(states.random_density(d, 1, seed=r).mat, states.random_density(d, 1, seed=r).mat) for _ in range(3)]
    rho = states.mixture(parts, r.random(3) + 0.1)
    assert np.linalg.eigvalsh(criteria.id_lambda_p(rho, 2))[0] >= -1e-10
    assert criteria.ppt_check(rho)
