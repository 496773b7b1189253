import numpy as np
import pytest

from bephase import criteria, states, witness
from bephase.errors import InfeasibleConstraintsError, NotPPTError, ZeroEpsilonError
from bephase.fixtures import ppt_entangled_family, ppt_entangled_fixture


def _random_subspace(r, n, k):
    q, _ = np.linalg.qr(r.standard_normal((n, k)) + 1j * r.standard_normal((n, k)))
    return q


def test_range_kernel_rank5():
    rho = states.random_density(3, 3, rank=5, seed=6)
    rng_basis, ker = witness.range_kernel(rho)
    assert rng_basis.shape[1] == 5 and ker.shape[1] == 4
    assert np.max(np.abs(rho.mat @ ker)) < 1e-10
    # range vectors are orthogonal to the kernel
    assert np.max(np.abs(ker.conj().T @ rng_basis)) < 1e-10


def test_product_vector_needs_dimension_five():
    # a generic k-dim subspace of 3 (x) 3 meets the product vectors only when
    # k - 1 + 4 >= 8, i.e. k >= 5
    r = np.random.default_rng(1)
    for k, expect in [(3, False), (4, False), (5, True), (6, True)]:
        for t in range(5):
            pv = witness.product_vector_in_subspace(_random_subspace(r, 9, k), (3, 3), seed=t)
            assert (pv is not None) == expect


def test_product_vector_planted():
    r = np.random.default_rng(2)
    e = r.standard_normal(3) + 1j * r.standard_normal(3)
    f = r.standard_normal(3) + 1j * r.standard_normal(3)
    planted = np.kron(e, f)
    basis, _ = np.linalg.qr(np.column_stack([planted, r.standard_normal((9, 2))]))
    pv = witness.product_vector_in_subspace(basis, (3, 3))
    assert pv is not None and pv.residual < 1e-9
    overlap = abs(np.vdot(pv.amps, planted)) / np.linalg.norm(planted)
    assert overlap == pytest.approx(1.0, abs=1e-6)


def test_product_vector_conjugate_constraint():
    r = np.random.default_rng(3)
    e = r.standard_normal(3) + 1j * r.standard_normal(3)
    f = r.standard_normal(3) + 1j * r.standard_normal(3)
    e, f = e / np.linalg.norm(e), f / np.linalg.norm(f)
    a, _ = np.linalg.qr(np.column_stack([np.kron(e, f), r.standard_normal((9, 1))]))
    b, _ = np.linalg.qr(np.column_stack([np.kron(e.conj(), f), r.standard_normal((9, 1))]))
    pv = witness.product_vector_in_subspace(a, (3, 3), conj_basis=b)
    assert pv is not None
    pb = b @ b.conj().T
    # the residual is a squared distance
    assert np.linalg.norm(np.kron(pv.e.conj(), pv.f) - pb @ np.kron(pv.e.conj(), pv.f)) < 1e-6


def test_fixture_edge_status():
    sigma = ppt_entangled_fixture()
    status = witness.is_edge_state(sigma)
    assert status.status in {"edge_inconclusive", "not_edge"}
    assert (status.range_dim, status.pt_range_dim) == (7, 6)
    assert status.status == "edge_inconclusive"
    # 7 + 6 = 2 * 3^2 - 2 * 3 + 1
    assert witness.has_maximal_ranks(sigma)


def test_separable_state_not_edge():
    rho = states.product_density(states.random_density(3, 1, seed=1).mat, states.random_density(3, 1, seed=2).mat)
    status = witness.is_edge_state(rho)
    assert status.status == "not_edge"
    assert status.product.residual < 1e-9


def test_edge_state_requires_ppt(phi2):
    with pytest.raises(NotPPTError):
        witness.is_edge_state(phi2)


def test_edge_witness_on_fixture():
    sigma = ppt_entangled_fixture()
    w = witness.build_edge_witness(sigma)
    assert w.epsilon > 0
    assert w.value_on(sigma) == pytest.approx(-w.epsilon, abs=1e-10)
    vals = witness.random_product_values(w.W_plus_eps, w.dims, 10_000, seed=99)
    assert vals.min() > 0
    assert witness.random_product_values(w.W, w.dims, 10_000, seed=99).min() >= -1e-9


def test_edge_witness_zero_epsilon():
    rho = states.DensityOperator(np.eye(9) / 9, 3, 3)
    with pytest.raises(ZeroEpsilonError):
        witness.build_edge_witness(rho)


def test_witness_epsilon_phi_projector():
    p = states.maximally_entangled(2).projector().mat
    # <Phi+|e,f> vanishes for f orthogonal to e*
    assert witness.witness_epsilon(p, np.zeros((4, 4)), (2, 2)) == pytest.approx(0.0, abs=1e-12)


def test_witness_epsilon_upper_bounds_grid():
    sigma = ppt_entangled_family(0.5)
    _, ker = witness.range_kernel(sigma)
    _, ker_pt = witness.range_kernel(criteria.partial_transpose(sigma, side="A"))
    P, Q = witness.projector_onto(ker), witness.projector_onto(ker_pt)
    eps = witness.witness_epsilon(P, Q, (3, 3))
    h = P + criteria.partial_transpose(Q, (3, 3), side="A")
    assert witness.random_product_values(h, (3, 3), 5000, seed=3).min() >= eps - 1e-12


def _toy_witness():
    """2 (x) 2: P onto the kernel of a rank-3 NPT state, Q onto its PT-negative vector."""
    r = np.random.default_rng(5)
    phi = states.maximally_entangled(2).amps
    g = r.standard_normal((4, 2)) + 1j * r.standard_normal((4, 2))
    delta = states.DensityOperator.from_unnormalized(0.7 * np.outer(phi, phi) + 0.3 * g @ g.conj().T / 4, 2, 2)
    assert np.linalg.matrix_rank(delta.mat, tol=1e-10) == 3
    _, ker = witness.range_kernel(delta)
    w, v = np.linalg.eigh(criteria.partial_transpose(delta, side="A"))
    assert w[0] < 0
    P = witness.projector_onto(ker)
    Q = np.outer(v[:, 0], v[:, 0].conj())
    return P + criteria.partial_transpose(Q, (2, 2), side="A")


def test_schmidt_probe_toy():
    h = _toy_witness()
    probe = witness.schmidt_probe_search(h, (2, 2), 2)
    assert probe is not None and probe.value < 0
    # s = 2 is the full space on 2 (x) 2, so the brute-force answer is the bottom eigenvalue
    assert probe.value == pytest.approx(np.linalg.eigvalsh(h)[0], abs=1e-9)
    psi = probe.vector((2, 2))
    assert np.vdot(psi.amps, h @ psi.amps).real == pytest.approx(probe.value, abs=1e-9)


def test_schmidt_probe_products_fail_on_toy():
    h = _toy_witness()
    # coarse product grid: no product vector reaches a negative value
    ang = np.linspace(0, np.pi, 13)
    ph = np.linspace(0, 2 * np.pi, 13)
    best = np.inf
    for a in ang:
        for b in ph:
            e = np.array([np.cos(a / 2), np.exp(1j * b) * np.sin(a / 2)])
            for c in ang:
                for d in ph:
                    f = np.array([np.cos(c / 2), np.exp(1j * d) * np.sin(c / 2)])
                    x = np.kron(e, f)
                    best = min(best, np.vdot(x, h @ x).real)
    assert best >= -1e-12
    # products can touch zero but never go below it
    probe = witness.schmidt_probe_search(h, (2, 2), 1)
    assert probe is None or probe.value >= -1e-9


def test_split_projector():
    sigma = ppt_entangled_fixture()
    w = witness.build_edge_witness(sigma)
    P1, Psi = witness.split_projector(w.P)
    np.testing.assert_allclose(P1 + np.outer(Psi, Psi.conj()), w.P, atol=1e-12)
    assert np.trace(P1).real == pytest.approx(np.trace(w.P).real - 1)


def test_schmidt_probe_constrained_products_obey_constraints():
    sigma = ppt_entangled_fixture()
    w = witness.build_edge_witness(sigma)
    P1, Psi = witness.split_projector(w.P)
    _, ker_p1 = witness.range_kernel(P1)
    _, ker_q = witness.range_kernel(w.Q)
    pv = witness.product_vector_in_subspace(ker_p1, w.dims, ker_q, restarts=30)
    assert pv is not None
    assert np.linalg.norm(P1 @ pv.amps) < 1e-6
    assert np.linalg.norm(w.Q @ np.kron(pv.e.conj(), pv.f)) < 1e-6
    # the heuristic may or may not assemble a probe on this small example;
    # whatever it returns has to be honest
    probe = witness.schmidt_probe_search(w.W_plus_eps, w.dims, 3, Q=w.Q, P1=P1, Psi=Psi, restarts=30)
    if probe is not None:
        psi = probe.vector(w.dims)
        assert np.vdot(psi.amps, w.W_plus_eps @ psi.amps).real <= 1e-10
        assert abs(np.vdot(Psi, psi.amps)) < 1e-9


def test_schmidt_probe_infeasible():
    with pytest.raises(InfeasibleConstraintsError):
        witness.schmidt_probe_search(np.eye(4), (2, 2), 2, P1=np.eye(4))


def test_sweep_csv_columns():
    text = witness.sweep_csv([{"state": "abc", "s": 2, "found": True, "value": -0.1}])
    assert text.splitlines() == ["state,s,found,value", "abc,2,True,-0.1"]
