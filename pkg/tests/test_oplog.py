import numpy as np
import pytest

from kreinshift.errors import PreconditionError
from kreinshift.generators import random_dissipative
from kreinshift.matkit import expm, frobenius, imaginary_part, trace
from kreinshift.oplog import (
    Branch,
    QuadratureConfig,
    logm_antidissipative,
    logm_dissipative,
    logm_oracle_diag,
    scalar_log,
    tr_log_det_bridge,
)


class TestScalarLog:
    def test_upper_half_plane(self):
        assert scalar_log(1j) == pytest.approx(1j * np.pi / 2)
        assert scalar_log(1j, Branch.LN) == pytest.approx(1j * np.pi / 2)

    def test_negative_real_on_log_branch(self):
        assert scalar_log(-1.0) == pytest.approx(1j * np.pi)

    def test_cut_rejected(self):
        with pytest.raises(PreconditionError):
            scalar_log(-1j)
        with pytest.raises(PreconditionError):
            scalar_log(0.0)
        with pytest.raises(PreconditionError):
            scalar_log(-2.0, Branch.LN)

    def test_branches_agree_upper_half_plane(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            z = complex(rng.uniform(-3, 3), rng.uniform(1e-3, 3))
            assert scalar_log(z) == pytest.approx(scalar_log(z, Branch.LN))

    def test_lower_half_plane_difference(self):
        # right lower quadrant: LOG keeps the small negative angle too
        z = 1.0 - 0.5j
        assert scalar_log(z) == pytest.approx(scalar_log(z, Branch.LN))
        # left lower quadrant: LOG wraps through pi, LN through -pi
        z = -1.0 - 0.5j
        assert scalar_log(z).imag > 0 > scalar_log(z, Branch.LN).imag


class TestLogmDissipative:
    def test_scalar_matrix(self):
        t = (2.0 + 1.0j) * np.eye(2)
        assert frobenius(logm_dissipative(t) - scalar_log(2.0 + 1.0j) * np.eye(2)) < 1e-10

    def test_real_positive_scalar_matrix(self):
        assert frobenius(logm_dissipative(2.0 * np.eye(3)) - np.log(2.0) * np.eye(3)) < 1e-10

    def test_non_normal_jordan_like(self):
        t = np.array([[1j, 1.0], [0.0, 1j]])
        l = logm_dissipative(t)
        assert frobenius(expm(l) - t) <= 1e-8 * frobenius(t)
        # nearby diagonalizable arguments have nearby logarithms
        errs = []
        for eta in (1e-2, 1e-3, 1e-4):
            t_eta = t + eta * np.diag([1.0, -1.0])
            errs.append(frobenius(logm_oracle_diag(t_eta) - l))
        assert errs[0] < 2e-1 and errs[1] < 2e-2 and errs[2] < 2e-3

    def test_roundtrip_and_imaginary_bounds(self):
        rng = np.random.default_rng(100)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            t = random_dissipative(rng, n)
            l = logm_dissipative(t)
            assert frobenius(expm(l) - t) <= 1e-8 * frobenius(t)
            w = np.linalg.eigvalsh(imaginary_part(l))
            assert w.min() >= -1e-8
            assert w.max() <= np.pi + 1e-8

    def test_eps_continuity(self):
        rng = np.random.default_rng(101)
        t = random_dissipative(rng, 4)
        base = logm_dissipative(t)
        eps = np.array([1e-3, 1e-4, 1e-5])
        devs = np.array(
            [frobenius(logm_dissipative(t + 1j * e * np.eye(4)) - base) for e in eps]
        )
        slope = np.polyfit(np.log(eps), np.log(devs), 1)[0]
        assert slope >= 0.9
        assert np.all(devs <= 10.0 * eps)  # fitted constant stays moderate

    def test_scalar_consistency_random(self):
        rng = np.random.default_rng(102)
        cfg = QuadratureConfig()
        for _ in range(20):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2.5))
            l = logm_dissipative(z * np.eye(2), cfg)
            assert frobenius(l - scalar_log(z) * np.eye(2)) <= cfg.rel_tol * 10

    def test_rejects_non_dissipative(self):
        with pytest.raises(PreconditionError, match="not dissipative"):
            logm_dissipative(np.array([[-1j]]))

    def test_rejects_singular(self):
        with pytest.raises(PreconditionError, match="singular"):
            logm_dissipative(np.zeros((2, 2)))


class TestLogmOracle:
    def test_diagonal(self):
        l = logm_oracle_diag(np.diag([1j, 2.0]))
        assert np.allclose(np.diag(l), [1j * np.pi / 2, np.log(2.0)])

    def test_roundtrip_upper_spectrum(self):
        rng = np.random.default_rng(103)
        s = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        t = s @ np.diag([1.0 + 1.0j, 3.0j]) @ np.linalg.inv(s)
        l = logm_oracle_diag(t)
        assert frobenius(expm(l) - t) <= 1e-9 * frobenius(t)

    def test_cross_oracle_agreement(self):
        rng = np.random.default_rng(104)
        for _ in range(20):
            t = random_dissipative(rng, 5, min_strict=0.2, allow_flat=False)
            assert frobenius(logm_dissipative(t) - logm_oracle_diag(t)) <= 1e-8

    def test_defective_rejected(self):
        with pytest.raises(PreconditionError):
            logm_oracle_diag(np.array([[1j, 1.0], [0.0, 1j]]))


class TestLogmAntidissipative:
    def test_scalar_conjugate(self):
        s = (2.0 - 1.0j) * np.eye(2)
        expected = np.conj(scalar_log(2.0 + 1.0j)) * np.eye(2)
        assert frobenius(logm_antidissipative(s) - expected) < 1e-10

    def test_positive_definite_real_log(self):
        rng = np.random.default_rng(105)
        c = rng.standard_normal((3, 3))
        s = c @ c.T + np.eye(3)
        l = logm_antidissipative(s)
        assert frobenius(imaginary_part(l)) <= 1e-10
        assert frobenius(expm(l) - s) <= 1e-8 * frobenius(s)

    def test_definitional_adjoint(self):
        rng = np.random.default_rng(106)
        t = random_dissipative(rng, 4)
        s = t.conj().T
        assert np.array_equal(logm_antidissipative(s), logm_dissipative(s.conj().T).conj().T)


class TestBridge:
    def test_zero(self):
        br = tr_log_det_bridge(np.zeros((3, 3)))
        assert br.residual < 1e-12 and br.winding == 0
        assert br.trace_log == pytest.approx(0.0)

    def test_diagonal(self):
        br = tr_log_det_bridge(np.diag([1.0, 1j]))
        expected = np.log(2.0) + scalar_log(1.0 + 1.0j)
        assert br.trace_log == pytest.approx(expected, abs=1e-10)
        assert br.residual < 1e-10 and br.winding == 0

    def test_random_dissipative(self):
        rng = np.random.default_rng(107)
        for _ in range(10):
            t = random_dissipative(rng, 4)
            br = tr_log_det_bridge(t - np.eye(4))
            assert br.residual < 1e-8

    def test_winding_counted(self):
        # three eigenvalues near the negative reals push the summed phase
        # beyond one branch period
        t = np.diag([-1.0 + 0.05j, -1.0 + 0.05j, -1.0 + 0.05j])
        br = tr_log_det_bridge(t - np.eye(3))
        assert br.residual < 1e-8
        assert br.winding == 1

    def test_trace_matches_sum_of_scalar_logs(self):
        rng = np.random.default_rng(108)
        t = random_dissipative(rng, 4, min_strict=0.3, allow_flat=False)
        w = np.linalg.eigvals(t)
        expected = sum(scalar_log(x) for x in w)
        assert trace(logm_dissipative(t)) == pytest.approx(expected, abs=1e-9)
