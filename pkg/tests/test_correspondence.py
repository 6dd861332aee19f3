import numpy as np
import pytest

from adjunctions.correspondence import Correspondence, FinCStar, random_correspondence, verify_cstar_frobenius
from adjunctions.opspace import haagerup_norm_upper, level_norm

C = FinCStar((1,))


def column(d):
    return Correspondence(C, (d,))


def test_rank_one_examples(rng):
    E = column(2)
    e1, e2 = rng.standard_normal(2) + 1j * rng.standard_normal(2), rng.standard_normal(2) + 0j
    np.testing.assert_allclose(E.rank_one(e1, e2)[0], np.outer(e1, e2.conj()))
    assert E.op_norm(E.rank_one(e1, e1)) == pytest.approx(np.vdot(e1, e1).real)
    assert not np.any(E.rank_one(e1, np.zeros(2))[0])


def test_kappa_examples(rng):
    E = column(2)
    e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    np.testing.assert_allclose(E.kappa([(e, e)])[0], E.rank_one(e, e)[0])
    basis = E.basis()
    np.testing.assert_allclose(E.kappa([(b, b) for b in basis])[0], np.eye(2))
    assert not np.any(E.kappa([])[0])


def test_ip_pairing_examples():
    E = column(2)
    assert E.ip_pairing(np.array([1, 0]), np.array([1, 0]))[0][0, 0] == 1
    assert E.ip_pairing(np.array([1, 0]), np.array([0, 1]))[0][0, 0] == 0
    assert E.ip_pairing(np.array([1, 1]), np.array([1, -1]))[0][0, 0] == 0


def test_weighted_inner_product_against_frames(rng):
    V = [rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)), rng.standard_normal((2, 1))]
    E = Correspondence(FinCStar((2, 3)), (2, 1), frames=V)
    e, f = E.random_element(rng), E.random_element(rng)
    for s, (x, y) in enumerate(zip(E.split(e), E.split(f))):
        np.testing.assert_allclose(E.inner(e, f)[s], (V[s] @ x).conj().T @ (V[s] @ y), atol=1e-12)
    # concrete picture is isometric
    assert np.linalg.norm(E.concrete(e), 2) == pytest.approx(E.norm(e), rel=1e-12)


def test_degenerate_inner_product_rejected():
    with pytest.raises(ValueError):
        Correspondence(C, (2,), frames=[np.array([[1.0, 0.0], [0.0, 1e-6]])])


def test_inner_product_axioms(rng):
    for _ in range(10):
        E = random_correspondence(rng)
        for _ in range(50):
            e, f = E.random_element(rng), E.random_element(rng)
            b = E.B.random(rng)
            ip = E.inner(e, f)
            assert FinCStar.norm(ip) <= E.norm(e) * E.norm(f) * (1 + 1e-12)
            assert FinCStar.distance(FinCStar.star(ip), E.inner(f, e)) <= 1e-10
            assert FinCStar.distance(E.inner(e, E.right_act(f, b)), FinCStar.multiply(ip, b)) <= 1e-9
            assert min(np.linalg.eigvalsh(blk).min() for blk in E.inner(e, e)) >= -1e-10


def test_left_action_is_adjointable_star_homomorphism(rng):
    for _ in range(10):
        E = random_correspondence(rng)
        a1, a2 = E.A.random(rng), E.A.random(rng)
        prod = E.alpha(FinCStar.multiply(a1, a2))
        want = tuple(x @ y for x, y in zip(E.alpha(a1), E.alpha(a2)))
        assert max(np.abs(p - w).max() for p, w in zip(prod, want)) <= 1e-10
        adj = E.op_adjoint(E.alpha(a1))
        assert max(np.abs(p - w).max() for p, w in zip(adj, E.alpha(FinCStar.star(a1)))) <= 1e-10
        ident = E.alpha(E.A.identity())
        # generated layouts fill every sector, so alpha is unital
        assert max(np.abs(p - np.eye(p.shape[0])).max() for p in ident) <= 1e-10


def test_kappa_inverse_is_right_inverse(rng):
    for _ in range(10):
        E = random_correspondence(rng)
        op = E.alpha(E.A.random(rng))
        back = E.kappa(E.kappa_inverse(op))
        assert max(np.abs(p - w).max() for p, w in zip(back, op)) <= 1e-10


def test_kappa_inverse_rejects_outside_span():
    E = column(2)
    E2 = Correspondence(FinCStar((1, 1)), (1, 1))
    with pytest.raises(ValueError):
        E2.kappa_inverse((np.eye(1), np.eye(2)))
    assert E.kappa_inverse((np.zeros((2, 2)),)) == []


def test_chain_one_is_matrix_vector_product(rng):
    E = column(2)
    a = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),)
    e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    rep = verify_cstar_frobenius(E, [(a, e)])
    assert rep.ok
    np.testing.assert_allclose(E.left_act(a, e), a[0] @ e)
    assert verify_cstar_frobenius(E, [(E.A.identity(), e)]).ok
    np.testing.assert_allclose(E.left_act(E.A.identity(), e), e)


def test_four_dimensional_example(rng):
    B = FinCStar((1, 2))
    E = Correspondence(B, (2, 1), frames=[rng.standard_normal((2, 2)) + 2 * np.eye(2), np.eye(1) * 3])
    assert E.dim == 4
    samples = [(E.A.random(rng), E.random_element(rng)) for _ in range(200)]
    rep = verify_cstar_frobenius(E, samples)
    assert rep.ok and rep.max_residual <= 1e-10 and len(rep.records) == 400


def test_random_correspondences_pass_chains(rng):
    for _ in range(20):
        E = random_correspondence(rng)
        assert E.dim <= 6 and all(k <= 3 for k in E.B.blocks)
        samples = [(E.A.random(rng), E.random_element(rng)) for _ in range(30)]
        assert verify_cstar_frobenius(E, samples).ok


def test_broken_action_is_reported(rng):
    E = column(2)
    samples = [(E.A.random(rng), E.random_element(rng)) for _ in range(5)]
    assert not verify_cstar_frobenius(E, samples, tol=-1.0).ok


def test_matrix_norm_matches_concrete_picture(rng):
    for _ in range(5):
        E = random_correspondence(rng)
        n = 2
        X = np.array([[E.random_element(rng) for _ in range(n)] for _ in range(n)])
        big = np.block([[E.concrete(X[i, j]) for j in range(n)] for i in range(n)])
        assert E.matrix_norm(X) == pytest.approx(np.linalg.norm(big, 2), rel=1e-10)
        c = np.array([[X[i, j] for j in range(n)] for i in range(n)])
        assert level_norm(E.operator_space(), c) == pytest.approx(np.linalg.norm(big, 2), rel=1e-10)


def test_kappa_is_dominated_by_haagerup_bound(rng):
    for _ in range(5):
        E = random_correspondence(rng)
        X = E.operator_space()
        N = E.dim
        u = rng.standard_normal((1, 1, N, N)) + 1j * rng.standard_normal((1, 1, N, N))
        basis = E.basis()
        op = E.kappa([(u[0, 0, a, b] * basis[a], basis[b]) for a in range(N) for b in range(N)])
        kn = np.linalg.norm(E.concrete_operator(op), 2)
        assert kn <= haagerup_norm_upper(u, X, X.adjoint(), restarts=1) + 1e-8


def test_kappa_isometric_on_rank_one_over_scalars(rng):
    E = column(3)
    X = E.operator_space()
    for n in (1, 2, 3):
        x = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
        u = np.einsum("ia,jb->ijab", x, x.conj())
        # kappa(u) at level n is [x_i x_j*], the Gram-type block matrix
        big = np.block([[np.outer(x[i], x[j].conj()) for j in range(n)] for i in range(n)])
        up = haagerup_norm_upper(u, X, X.adjoint(), restarts=2)
        assert up == pytest.approx(np.linalg.norm(big, 2), abs=1e-6)
