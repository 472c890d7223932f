import numpy as np
import pytest

from kreinshift.errors import PreconditionError
from kreinshift.generators import random_hermitian, random_unitary
from kreinshift.matkit import (
    apply_spectral_function,
    as_matrix,
    det,
    eig_hermitian,
    expm,
    frobenius,
    hermitian_part,
    inverse,
    positive_negative_parts,
    sign_factorization,
    solve_shifted,
    trace,
    trace_norm,
)


class TestEigHermitian:
    def test_two_by_two_coupling(self):
        e = eig_hermitian([[1.0, 0.4], [0.4, 1.0]])
        assert np.allclose(e.eigenvalues, [0.6, 1.4])

    def test_identity(self):
        e = eig_hermitian(np.eye(3))
        assert np.allclose(e.eigenvalues, 1.0)
        assert np.allclose(np.abs(e.vectors.conj().T @ e.vectors), np.eye(3))

    def test_residual_random(self):
        rng = np.random.default_rng(42)
        a = random_hermitian(rng, 8)
        e = eig_hermitian(a)
        for w, v in zip(e.eigenvalues, e.vectors.T):
            assert np.linalg.norm(a @ v - w * v) <= 1e-12 * frobenius(a)
        assert frobenius(e.vectors.conj().T @ e.vectors - np.eye(8)) <= 1e-12 * 8
        assert (
            frobenius(a @ e.vectors - e.vectors * e.eigenvalues) <= 1e-12 * frobenius(a)
        )

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            as_matrix(np.zeros((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(PreconditionError):
            eig_hermitian([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(PreconditionError):
            as_matrix([[np.inf, 0.0], [0.0, 1.0]])


class TestSpectralFunction:
    def test_identity_function(self):
        a = np.diag([2.0, 5.0])
        assert np.allclose(apply_spectral_function(a, lambda x: x), a)

    def test_constant_one(self):
        rng = np.random.default_rng(1)
        a = random_hermitian(rng, 4)
        assert np.allclose(apply_spectral_function(a, lambda x: 1.0), np.eye(4))

    def test_exp_matches_expm(self):
        rng = np.random.default_rng(2)
        a = random_hermitian(rng, 4)
        lhs = apply_spectral_function(a, np.exp)
        rhs = expm(a)
        assert frobenius(lhs - rhs) <= 1e-10 * frobenius(rhs)

    def test_identity_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            a = random_hermitian(rng, 5)
            assert frobenius(apply_spectral_function(a, lambda x: x) - a) <= 1e-12 * frobenius(a)

    def test_non_finite_value_rejected(self):
        with pytest.raises(PreconditionError):
            apply_spectral_function(np.diag([1.0, 0.0]), lambda x: 1.0 / x)


class TestSolveShifted:
    def test_scalar(self):
        x = solve_shifted(np.zeros((1, 1)), 1j, np.ones((1, 1)))
        assert np.allclose(x, 1j)

    def test_diagonal(self):
        x = solve_shifted(np.diag([1.0, 2.0]), 0.0, np.eye(2))
        assert np.allclose(x, np.diag([1.0, 0.5]))

    def test_residual(self):
        rng = np.random.default_rng(4)
        a = random_hermitian(rng, 6)
        b = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        z = 3.0 + 2.0j
        x = solve_shifted(a, z, b)
        assert frobenius((a - z * np.eye(6)) @ x - b) <= 1e-10 * frobenius(b)

    def test_singular_shift_rejected(self):
        with pytest.raises(PreconditionError):
            solve_shifted(np.diag([1.0, 2.0]), 1.0, np.eye(2))


class TestDet:
    def test_identity(self):
        assert det(np.eye(4)) == pytest.approx(1.0)

    def test_diagonal(self):
        assert det(np.diag([2.0, -3.0])) == pytest.approx(-6.0)

    def test_inverse_oracle(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert abs(det(a) * det(inverse(a)) - 1.0) <= 1e-10


class TestExpm:
    def test_zero(self):
        assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        assert np.allclose(expm(np.diag([np.log(2.0), 0.0])), np.diag([2.0, 1.0]))

    def test_nilpotent(self):
        n = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert np.allclose(expm(n), np.eye(2) + n)


class TestParts:
    def test_diagonal(self):
        plus, minus = positive_negative_parts(np.diag([2.0, -3.0]))
        assert np.allclose(plus, np.diag([2.0, 0.0]))
        assert np.allclose(minus, np.diag([0.0, 3.0]))

    def test_psd_passthrough(self):
        rng = np.random.default_rng(6)
        c = rng.standard_normal((4, 4))
        v = c @ c.T
        plus, minus = positive_negative_parts(v)
        assert frobenius(plus - v) <= 1e-12 * frobenius(v)
        assert frobenius(minus) <= 1e-12 * frobenius(v)

    def test_postconditions_random(self):
        rng = np.random.default_rng(7)
        v = random_hermitian(rng, 6)
        plus, minus = positive_negative_parts(v)
        nv = frobenius(v)
        assert np.linalg.eigvalsh(plus).min() >= -1e-12 * nv
        assert np.linalg.eigvalsh(minus).min() >= -1e-12 * nv
        assert frobenius(plus - minus - v) <= 1e-12 * nv
        assert frobenius(plus @ minus) <= 1e-12 * nv * nv


class TestSignFactorization:
    def test_diagonal(self):
        f = sign_factorization(np.diag([2.0, -3.0]))
        assert f.n_plus == 1 and f.n_minus == 1
        assert np.allclose(f.j_signs, [1.0, -1.0])
        assert np.allclose(np.abs(f.k), np.diag([np.sqrt(2.0), np.sqrt(3.0)]))

    def test_zero(self):
        f = sign_factorization(np.zeros((3, 3)))
        assert f.rank == 0
        assert f.k.shape == (3, 0)
        assert np.allclose(f.reconstruct(), 0.0)

    def test_rank_three_reconstruction(self):
        rng = np.random.default_rng(8)
        q = random_unitary(rng, 6)[:, :3]
        v = hermitian_part((q * np.array([1.3, -0.7, 0.5])) @ q.conj().T)
        f = sign_factorization(v)
        assert f.rank == 3
        assert frobenius(f.reconstruct() - v) <= 1e-11 * frobenius(v)

    def test_sign_counts(self):
        rng = np.random.default_rng(9)
        v = random_hermitian(rng, 5)
        f = sign_factorization(v, rank_tol=1e-12)
        w = np.linalg.eigvalsh(v)
        thresh = 1e-12 * np.max(np.abs(w))
        assert f.n_plus == np.count_nonzero(w > thresh)
        assert f.n_minus == np.count_nonzero(w < -thresh)
        assert frobenius(f.reconstruct() - v) <= 1e-11 * frobenius(v)


class TestTraceIdentities:
    def test_trace_commutator(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
            b = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
            t1, t2 = trace(a @ b), trace(b @ a)
            assert abs(t1 - t2) <= 1e-12 * max(abs(t1), 1.0)

    def test_det_sylvester(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            a = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
            b = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
            d1 = det(np.eye(3) + a @ b)
            d2 = det(np.eye(5) + b @ a)
            assert abs(d1 - d2) <= 1e-10 * max(abs(d1), 1.0)

    def test_trace_norm_hermitian(self):
        rng = np.random.default_rng(12)
        v = random_hermitian(rng, 5)
        assert trace_norm(v) == pytest.approx(np.sum(np.abs(np.linalg.eigvalsh(v))))
