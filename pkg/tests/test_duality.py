import numpy as np
import pytest

from obliqueframes import Frame, SubspacePair
from obliqueframes.duality import (
    canonical_v_spectrum, certify, check_feasible_spectrum, construct_parseval_dual,
    dual_from_perturbation, lift_classical_dual, optimal_dual, parseval_dual_exists,
    parseval_dual_exists_operator, random_dual,
)
from obliqueframes.errors import BadTrace, NotADual, NotFeasible, RankBudgetExceeded, ValidationError
from obliqueframes.frames import canonical_dual, canonical_v_dual, frame_operator, is_parseval_for
from obliqueframes.linalg import kernel_basis
from obliqueframes.majorization import PotentialSpec, potential, submajorizes
from obliqueframes.sampling import random_frame, random_instance, random_subspace_pair


def assert_dual(cert, F, sp, tol=1e-8):
    P = sp.P_oblique
    TG, TF = cert.G.vectors, F.vectors
    scale = max(1.0, np.linalg.norm(P))
    assert np.linalg.norm(TG @ TF.conj().T - P) <= tol * scale
    assert np.linalg.norm(TF @ TG.conj().T - P.conj().T) <= tol * scale
    assert np.linalg.norm(TG - sp.P_V @ TG) <= tol * max(1.0, np.linalg.norm(TG))
    B = frame_operator(cert.G) - frame_operator(canonical_v_dual(F, sp))
    assert np.linalg.eigvalsh(B).min() >= -tol * max(1.0, np.linalg.norm(B))


def test_certificate_of_canonical_dual(F1, example_pair):
    cert = certify(F1, canonical_v_dual(F1, example_pair), example_pair)
    assert cert.rank_B == 0 and cert.residual_duality < 1e-14
    assert cert.trace == pytest.approx(11 / 3, abs=1e-12)
    np.testing.assert_allclose(cert.spectrum, [8 / 3, 1, 0], atol=1e-12)


def test_certify_rejects(F1, example_pair):
    with pytest.raises(NotADual):
        certify(F1, Frame(np.eye(3)[:, :2]), example_pair)
    with pytest.raises(NotADual):
        certify(F1, canonical_dual(F1), example_pair)  # lies in W, not V


class TestLift:
    def test_canonical(self, F1, example_pair):
        lifted = lift_classical_dual(F1, canonical_dual(F1), example_pair)
        np.testing.assert_allclose(lifted.vectors, canonical_v_dual(F1, example_pair).vectors, atol=1e-14)

    def test_identity_when_v_equals_w(self, rng):
        F, sp = random_instance(rng)
        same = SubspacePair.same(sp.W_basis)
        K = canonical_dual(F)
        np.testing.assert_allclose(lift_classical_dual(F, K, same).vectors, K.vectors, atol=1e-10)

    def test_random_classical_dual(self, rng):
        F, sp = random_instance(rng, d=2, n=5)
        Ker = kernel_basis(F.vectors)
        X = sp.W_basis @ (rng.standard_normal((2, Ker.shape[1])) @ Ker.conj().T)
        K = Frame(canonical_dual(F).vectors + X)
        G = lift_classical_dual(F, K, sp)
        cert = certify(F, G, sp)
        PX = sp.P_oblique @ X
        np.testing.assert_allclose(cert.B, PX @ PX.conj().T, atol=1e-9)

    def test_rejects_non_duals(self, F1, example_pair):
        with pytest.raises(NotADual):
            lift_classical_dual(F1, F1, example_pair)


class TestFeasibility:
    def test_example(self, F1, example_pair):
        assert check_feasible_spectrum([8 / 3, 1, 0], F1, example_pair).feasible
        v = check_feasible_spectrum([3, 1, 0], F1, example_pair)
        assert not v.feasible and v.m == 2 and (0, "upper") in v.violated

    def test_own_spectrum_and_tail(self, rng):
        F, sp = random_instance(rng, p=6, d=3)
        mu = canonical_v_spectrum(F, sp)
        assert check_feasible_spectrum(mu, F, sp).feasible
        bad = mu.copy()
        bad[sp.d] = 0.5
        assert (sp.d, "tail-zero") in check_feasible_spectrum(bad, F, sp).violated

    def test_random_duals_are_feasible(self, rng):
        for k in range(100):
            F, sp = random_instance(rng)
            cert = random_dual(F, sp, seed=k, energy=float(rng.exponential()))
            assert_dual(cert, F, sp)
            assert check_feasible_spectrum(cert.spectrum, F, sp).feasible


class TestParseval:
    def test_parseval_frame_v_equals_w(self, rng):
        W = np.linalg.qr(rng.standard_normal((4, 2)))[0]
        F = Frame(np.hstack([W, W]) / np.sqrt(2))  # Parseval for W, n = 4 > d = 2
        sp = SubspacePair.same(W)
        assert parseval_dual_exists(F, sp).feasible
        cert = construct_parseval_dual(F, sp)
        assert cert.rank_B == 0
        np.testing.assert_allclose(cert.G.vectors, canonical_dual(F).vectors, atol=1e-12)

    def test_example_has_none(self, F1, example_pair):
        assert not parseval_dual_exists(F1, example_pair).feasible
        assert not parseval_dual_exists_operator(F1, example_pair)
        with pytest.raises(NotFeasible):
            construct_parseval_dual(F1, example_pair)

    def test_rank_obstruction(self):
        # S_F = 2 I on C^2 so the canonical spectrum is (1/2, 1/2); P_V - S# has rank 2 > n - d = 1
        F = Frame.from_rows([[1, 0], [1, 0], [0, np.sqrt(2)]])
        sp = SubspacePair.same(np.eye(2))
        np.testing.assert_allclose(canonical_v_spectrum(F, sp), [0.5, 0.5])
        assert not parseval_dual_exists(F, sp).feasible
        assert not parseval_dual_exists_operator(F, sp)

    def test_random_scaled_instances(self, rng):
        for _ in range(30):
            d = int(rng.integers(1, 5))
            sp = random_subspace_pair(rng, int(rng.integers(d, 10)), d)
            F = random_frame(rng, sp.W_basis, int(rng.integers(2 * d, 3 * d + 2)))
            F = Frame(F.vectors * np.sqrt(1.2 * canonical_v_spectrum(F, sp)[0]))
            assert parseval_dual_exists(F, sp).feasible
            cert = construct_parseval_dual(F, sp)
            assert_dual(cert, F, sp)
            assert is_parseval_for(cert.G, sp.V_basis)

    def test_two_tests_agree(self, rng):
        for _ in range(60):
            F, sp = random_instance(rng)
            F = Frame(F.vectors * np.sqrt(rng.uniform(0.3, 3.0) * canonical_v_spectrum(F, sp)[0]))
            assert parseval_dual_exists(F, sp).feasible == parseval_dual_exists_operator(F, sp)


class TestOptimal:
    def test_trace_equal_to_canonical(self, rng):
        F, sp = random_instance(rng, d=3, n=6)
        t = canonical_v_spectrum(F, sp).sum()
        cert, nu = optimal_dual(F, sp, t)
        np.testing.assert_allclose(cert.G.vectors, canonical_v_dual(F, sp).vectors, atol=1e-10)
        np.testing.assert_allclose(nu, canonical_v_spectrum(F, sp), atol=1e-10)

    def test_waterfill_example(self):
        # S_F = diag(1/2, 1): canonical spectrum (2, 1), n = 4 = 2d
        F = Frame.from_rows([[0.5, 0], [0.5, 0], [0, 2 ** -0.5], [0, 2 ** -0.5]])
        sp = SubspacePair.same(np.eye(2))
        cert, nu = optimal_dual(F, sp, 5.0)
        np.testing.assert_allclose(nu, [2.5, 2.5], atol=1e-12)
        np.testing.assert_allclose(cert.spectrum, [2.5, 2.5], atol=1e-12)
        assert cert.commutator <= 1e-8

    def test_below_canonical_trace(self, F1, example_pair):
        with pytest.raises(BadTrace):
            optimal_dual(F1, example_pair, 1.0)

    def test_minimality_by_sampling(self, rng):
        fp = PotentialSpec.frame_potential()
        for k in range(10):
            F, sp = random_instance(rng, min_n=2 * int(rng.integers(1, 4)))
            t0 = canonical_v_spectrum(F, sp).sum()
            t = float(rng.uniform(t0, 3 * t0))
            cert, nu = optimal_dual(F, sp, t)
            assert_dual(cert, F, sp)
            assert abs(cert.trace - t) <= 1e-8 * max(1, t)
            assert cert.commutator <= 1e-8 * max(1, t)
            np.testing.assert_allclose(cert.spectrum, nu, atol=1e-8 * max(1, t))
            for j in range(30):
                other = random_dual(F, sp, seed=1000 * k + j, energy=(t - t0) * rng.uniform(1, 2))
                assert submajorizes(other.spectrum, nu)
                assert potential(fp, nu) <= potential(fp, other.spectrum) + 1e-8


class TestRandomDual:
    def test_budget_zero_and_square_frames(self, F1, example_pair, rng):
        canon = canonical_v_dual(F1, example_pair).vectors
        np.testing.assert_allclose(random_dual(F1, example_pair, seed=3).G.vectors, canon)
        F, sp = random_instance(rng, d=3, n=5)
        np.testing.assert_allclose(random_dual(F, sp, 1, rank_budget=0).G.vectors, canonical_v_dual(F, sp).vectors)
        with pytest.raises(ValidationError):
            random_dual(F, sp, 1, rank_budget=3)

    def test_rank_one_structure(self, rng):
        F, sp = random_instance(rng, d=3, n=7)
        cert = random_dual(F, sp, seed=11, rank_budget=1, energy=2.0)
        assert cert.rank_B == 1
        vals, vecs = np.linalg.eigh(cert.B)
        v = vecs[:, -1]
        np.testing.assert_allclose(cert.B, vals[-1] * np.outer(v, v.conj()), atol=1e-10)
        assert np.linalg.norm(v - sp.P_V @ v) <= 1e-10
        assert vals[-1] == pytest.approx(2.0)

    def test_deterministic(self, rng):
        F, sp = random_instance(rng)
        a = random_dual(F, sp, seed=5).G.vectors
        b = random_dual(F, sp, seed=5).G.vectors
        np.testing.assert_array_equal(a, b)

    def test_perturbation_budget(self, F1, example_pair):
        with pytest.raises(RankBudgetExceeded):
            dual_from_perturbation(F1, example_pair, np.eye(2)[:, :1], [1.0])
