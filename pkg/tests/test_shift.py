import numpy as np
import pytest

from kreinshift.errors import PreconditionError
from kreinshift.generators import random_hermitian, random_indefinite, random_psd
from kreinshift.herglotz import HerglotzFamily, SignBlock
from kreinshift.matkit import frobenius
from kreinshift.shift import (
    auto_grid,
    chain_and_monotonicity,
    compute_profile,
    counting_steps,
    example_3_9,
    herglotz_reconstruction_residual,
    safe_grid,
    snap_grid,
    step_integral,
    trace_formula_residual,
    trace_identity_checks,
    xi_at,
    xi_counting_oracle,
    xi_operator,
    xi_operator_full,
    xi_via_det,
)


def rank_one_family(v: float) -> HerglotzFamily:
    return HerglotzFamily.from_potential(np.zeros((1, 1)), v * np.ones((1, 1)))


@pytest.fixture(scope="module")
def random_family():
    rng = np.random.default_rng(55)
    h0 = random_hermitian(rng, 6)
    v = random_indefinite(rng, 6, 4)
    return HerglotzFamily.from_potential(h0, v)


class TestXiOperator:
    def test_worked_projection(self):
        v = np.array([[1.0, 0.4], [0.4, 1.0]])
        fam = HerglotzFamily.from_positive_root(np.zeros((2, 2)), v)
        op = xi_operator(fam, SignBlock.PLUS, 1.2)
        assert frobenius(op - np.full((2, 2), 0.5)) <= 1e-8

    def test_zero_below_joint_spectrum(self):
        rng = np.random.default_rng(56)
        h0 = random_hermitian(rng, 4)
        v = random_psd(rng, 4)
        fam = HerglotzFamily.from_potential(h0, v)
        lam = float(np.min(fam.all_spectra())) - 1.0
        assert frobenius(xi_operator(fam, SignBlock.PLUS, lam)) <= 1e-8

    def test_trivial_perturbation(self):
        fam = HerglotzFamily.from_potential(np.diag([0.0, 1.0]), np.zeros((2, 2)))
        assert fam.rank == 0
        assert xi_operator(fam, SignBlock.PLUS, 0.5).shape == (0, 0)
        assert xi_at(fam, 0.5) == 0.0

    def test_operator_bounds(self, random_family):
        for lam in safe_grid(random_family, 20):
            for which in (SignBlock.PLUS, SignBlock.MINUS):
                w = np.linalg.eigvalsh(xi_operator(random_family, which, lam))
                assert w.min() >= -1e-8 and w.max() <= 1.0 + 1e-8

    def test_full_block_operator_hermitian(self, random_family):
        lam = float(safe_grid(random_family, 10)[3])
        op = xi_operator_full(random_family, lam)
        assert frobenius(op - op.conj().T) <= 1e-12
        assert op.shape == (random_family.rank, random_family.rank)


class TestXiAt:
    def test_rank_one_steps(self):
        fam = rank_one_family(1.0)
        assert xi_at(fam, 0.5) == pytest.approx(1.0, abs=1e-8)
        assert xi_at(fam, -0.5) == pytest.approx(0.0, abs=1e-8)
        assert xi_at(fam, 1.5) == pytest.approx(0.0, abs=1e-8)

    def test_rank_one_negative(self):
        fam = rank_one_family(-1.0)
        assert xi_at(fam, -0.5) == pytest.approx(-1.0, abs=1e-8)
        assert xi_at(fam, -1.5) == pytest.approx(0.0, abs=1e-8)
        assert xi_at(fam, 0.5) == pytest.approx(0.0, abs=1e-8)

    def test_matches_counting_oracle(self, random_family):
        for lam in safe_grid(random_family, 50):
            assert xi_at(random_family, lam) == pytest.approx(
                xi_counting_oracle(random_family, lam), abs=1e-6
            )


class TestCountingOracle:
    def test_shifted_diagonal(self):
        fam = HerglotzFamily.from_potential(
            np.diag([0.0, 1.0]), np.diag([0.5, 0.0])
        )
        assert xi_counting_oracle(fam, 0.25) == 1

    def test_above_everything(self, random_family):
        lam = float(np.max(random_family.all_spectra())) + 1.0
        assert xi_counting_oracle(random_family, lam) == 0

    def test_scalar(self):
        assert xi_counting_oracle(rank_one_family(1.0), 0.5) == 1

    def test_eigenvalue_rejected(self):
        with pytest.raises(PreconditionError):
            xi_counting_oracle(rank_one_family(1.0), 1.0)


class TestXiViaDet:
    def test_scalar(self):
        assert xi_via_det(rank_one_family(1.0), 0.5) == pytest.approx(1.0, abs=1e-9)

    def test_zero_perturbation(self):
        fam = HerglotzFamily.from_potential(np.diag([0.0, 1.0]), np.zeros((2, 2)))
        assert xi_via_det(fam, 0.5) == 0.0

    def test_matches_oracle(self, random_family):
        for lam in safe_grid(random_family, 30):
            assert xi_via_det(random_family, lam) == pytest.approx(
                xi_counting_oracle(random_family, lam), abs=1e-6
            )

    def test_determinant_split_identity(self, random_family):
        # the two block determinants multiply to the full perturbation
        # determinant, which seeds the phase tracking
        fam = random_family
        z = 0.37 + 0.81j
        lhs = np.linalg.det(fam.evaluate_phi_plus(z)) * np.linalg.det(
            fam.evaluate_phi_minus_tilde(z)
        )
        rhs = np.prod((fam.eig_h.eigenvalues - z) / (fam.eig0.eigenvalues - z))
        assert lhs == pytest.approx(rhs, rel=1e-10)


class TestTraceFormula:
    def test_zero_perturbation(self):
        fam = HerglotzFamily.from_potential(np.diag([0.0, 1.0]), np.zeros((2, 2)))
        assert trace_formula_residual(fam, 1j) == pytest.approx(0.0, abs=1e-14)

    def test_rank_one_closed_form(self):
        fam = rank_one_family(1.0)
        # both sides equal 1/(1-z) + 1/z at z = i
        assert trace_formula_residual(fam, 1j) < 1e-10

    def test_random_many_z(self, random_family):
        rng = np.random.default_rng(57)
        for _ in range(10):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.5, 2.5))
            lhs = complex(
                np.sum(1.0 / (random_family.eig_h.eigenvalues - z))
                - np.sum(1.0 / (random_family.eig0.eigenvalues - z))
            )
            assert trace_formula_residual(random_family, z) < 1e-8 * (1.0 + abs(lhs))

    def test_near_spectrum_rejected(self, random_family):
        lam0 = float(random_family.eig0.eigenvalues[0])
        with pytest.raises(PreconditionError):
            trace_formula_residual(random_family, lam0 + 1e-14j)


class TestTraceIdentities:
    def test_rank_one(self):
        rep = trace_identity_checks(rank_one_family(1.0), zs=())
        assert rep.trace_v_residual < 1e-12
        assert rep.l1_bound_holds

    def test_random(self, random_family):
        rep = trace_identity_checks(random_family, zs=(1.0 + 2.0j,))
        assert rep.trace_v_residual < 1e-8
        assert rep.l1_bound_holds
        assert rep.fd_plus_residual < 1e-6
        assert rep.fd_minus_residual < 1e-6

    def test_step_integral_polynomial(self):
        knots, values = counting_steps(np.array([0.0, 1.0]), np.array([0.5, 2.0]))
        # difference of counts is +1 on (0, 0.5), 0 on (0.5, 1), +1 on (1, 2),
        # and its integral is the trace of the perturbation
        val = step_integral(knots, values, lambda t: t)
        assert val == pytest.approx((0.5 + 2.0) - (0.0 + 1.0))


class TestChain:
    def test_trivial_second_step(self):
        rng = np.random.default_rng(58)
        h0 = random_hermitian(rng, 4)
        v1 = random_indefinite(rng, 4, 2)
        fam = HerglotzFamily.from_potential(h0, v1)
        grid = safe_grid(fam, 20)
        rep = chain_and_monotonicity(h0, v1, np.zeros((4, 4)), grid)
        assert rep.chain_residual < 1e-6
        assert rep.antisymmetry_residual < 1e-6

    def test_doubled_positive_rank_one(self):
        rng = np.random.default_rng(59)
        h0 = random_hermitian(rng, 4)
        u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = np.outer(u, u.conj())
        fam = HerglotzFamily.from_potential(h0, 2 * v)
        grid = safe_grid(fam, 25)
        rep = chain_and_monotonicity(h0, v, v, grid)
        assert rep.chain_residual < 1e-6
        # both monotonicity comparisons apply: V2 - V1 = 0 and V2 >= 0
        assert rep.monotonicity_violation_totals <= 1e-8
        assert rep.monotonicity_violation_added <= 1e-8

    def test_random_indefinite(self):
        rng = np.random.default_rng(60)
        h0 = random_hermitian(rng, 5)
        v1 = random_indefinite(rng, 5, 3)
        v2 = random_indefinite(rng, 5, 4)
        grid = safe_grid(HerglotzFamily.from_potential(h0, v1 + v2), 30)
        rep = chain_and_monotonicity(h0, v1, v2, grid)
        assert rep.points_used >= 20
        assert rep.chain_residual < 1e-6
        assert rep.oracle_residual < 1e-6


class TestExample39:
    def test_reference_parameters(self):
        rep = example_3_9(0.2, 0.4, 0.9, 1.3)
        assert rep.projection_residual_1 < 1e-8
        assert rep.projection_residual_2 < 1e-8
        assert rep.step_route_residual < 1e-8
        assert rep.difference_eigenvalues.min() == pytest.approx(-1.0 / np.sqrt(2), abs=1e-8)
        assert rep.difference_eigenvalues.max() == pytest.approx(+1.0 / np.sqrt(2), abs=1e-8)
        assert rep.trace_1 == pytest.approx(1.0, abs=1e-8)
        assert rep.trace_2 == pytest.approx(1.0, abs=1e-8)

    def test_parameter_validation(self):
        with pytest.raises(PreconditionError):
            example_3_9(0.4, 0.2, 0.9, 1.3)
        with pytest.raises(PreconditionError):
            example_3_9(0.2, 0.5, 0.6, 1.3)  # a*c < b^2
        with pytest.raises(PreconditionError):
            example_3_9(0.2, 0.4, 0.9, 1.5)  # lam outside the window

    def test_step_function_vanishes_below_zero(self):
        # for negative lam the matrix I - V/lam is positive definite, so the
        # boundary operator vanishes even though V - lam is positive
        v = np.array([[1.0, 0.4], [0.4, 1.0]])
        fam = HerglotzFamily.from_positive_root(np.zeros((2, 2)), v)
        assert frobenius(xi_operator(fam, SignBlock.PLUS, -0.7)) <= 1e-10


class TestReconstruction:
    def test_rank_one(self):
        fam = rank_one_family(1.0)
        assert herglotz_reconstruction_residual(fam, 1.0 + 2.0j) < 1e-6

    def test_random_psd(self):
        rng = np.random.default_rng(61)
        h0 = random_hermitian(rng, 4)
        v = random_psd(rng, 4, 2)
        fam = HerglotzFamily.from_potential(h0, v)
        assert herglotz_reconstruction_residual(fam, 1.0 + 2.0j) < 1e-4


class TestGrids:
    def test_snap_matches_worked_profile(self):
        fam = rank_one_family(1.0)
        snapped = snap_grid(fam, [-0.5, 0.0, 0.5, 1.0, 1.5])
        assert snapped[0] == -0.5 and snapped[2] == 0.5 and snapped[4] == 1.5
        assert 0.0 < snapped[1] < 1e-5       # nudged toward the hull center
        assert 1.0 - 1e-5 < snapped[3] < 1.0
        for x in snapped:
            fam.check_off_spectrum(float(x))

    def test_safe_grid_size_and_safety(self, random_family):
        grid = safe_grid(random_family, 50)
        assert grid.size >= 50
        for lam in grid:
            random_family.check_off_spectrum(float(lam))

    def test_auto_grid_safe(self, random_family):
        for lam in auto_grid(random_family):
            random_family.check_off_spectrum(float(lam))


class TestProfile:
    def test_invariants(self, random_family):
        prof = compute_profile(random_family, safe_grid(random_family, 50), include_det=True)
        assert np.all(np.abs(prof.xi - (prof.xi_plus - prof.xi_minus)) <= 1e-8)
        assert np.all(np.abs(prof.xi - prof.xi_oracle) <= 1e-6)
        assert np.all(np.abs(prof.xi_det - prof.xi_oracle) <= 1e-6)
        assert np.all(prof.converged)
        for i in range(prof.grid.size):
            for eigs in (prof.xi_op_plus_eigs[i], prof.xi_op_minus_eigs[i]):
                if eigs.size:
                    assert eigs.min() >= -1e-8 and eigs.max() <= 1.0 + 1e-8
                    assert np.all(np.diff(eigs) <= 1e-15)
            assert prof.xi_plus[i] == pytest.approx(np.sum(prof.xi_op_plus_eigs[i]), abs=1e-8)
            assert prof.xi_minus[i] == pytest.approx(np.sum(prof.xi_op_minus_eigs[i]), abs=1e-8)

    def test_vanishes_outside_hull(self, random_family):
        lo = float(np.min(random_family.all_spectra()))
        hi = float(np.max(random_family.all_spectra()))
        pad = 0.3 * random_family.spectral_diameter()
        prof = compute_profile(random_family, [lo - pad, hi + pad])
        assert np.all(np.abs(prof.xi) <= 1e-8)

    def test_thread_count_does_not_change_values(self, random_family, monkeypatch):
        grid = safe_grid(random_family, 20)
        monkeypatch.setenv("KREIN_SHIFT_THREADS", "1")
        p1 = compute_profile(random_family, grid, include_det=True)
        monkeypatch.setenv("KREIN_SHIFT_THREADS", "8")
        p8 = compute_profile(random_family, grid, include_det=True)
        assert np.array_equal(p1.xi, p8.xi)
        assert np.array_equal(p1.xi_det, p8.xi_det)
