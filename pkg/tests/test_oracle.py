import math

import numpy as np
import pytest

import trisol.density as dens
import trisol.solutions as sol
from trisol.errors import DomainError
from trisol.oracle import (
    IntegratorConfig,
    integrate_schrodinger,
    integrate_vonneumann,
    resolve_variant,
    verify_all,
)
from trisol.su3 import H0Params, h0_matrix

SHORT = tuple(np.linspace(0.0, 12.0, 61))


@pytest.fixture(scope="module")
def short_cfg():
    return IntegratorConfig(t_grid=SHORT, rel_tol=1e-9, abs_tol=1e-12)


@pytest.fixture(scope="module")
def short_report(short_cfg, drive, h0):
    return verify_all(drive, h0, short_cfg, density_mu=10.0, density_lam=5.0)


# conftest fixtures are session-scoped; redeclare at module scope for use in
# the module-scoped report fixture
@pytest.fixture(scope="module")
def drive():
    return sol.DriveParams(a=0.3, x=1.6, omega=1.0, k=0.25)


@pytest.fixture(scope="module")
def h0():
    return H0Params(mu=10.0, lam=5.0)


class TestConfig:
    def test_tolerance_domain(self):
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=SHORT, rel_tol=0.0)
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=SHORT, rel_tol=0.5)
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=SHORT, abs_tol=-1e-9)

    def test_grid_shape(self):
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=(1.0, 2.0))
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=(0.0, 2.0, 1.0))
        with pytest.raises(DomainError):
            IntegratorConfig(t_grid=(0.0,))


class TestSchrodinger:
    def test_static_diagonal_phase(self, h0, short_cfg):
        # constant diagonal generator: level 1 only picks up a phase
        hm = h0_matrix(h0)
        ys = integrate_schrodinger(lambda t: hm, np.array([1.0, 0, 0]), short_cfg)
        for t, y in zip(SHORT, ys):
            want = np.array([np.exp(2j * h0.mu * t / 3.0), 0.0, 0.0])
            assert np.linalg.norm(y - want) <= 1e-8
            np.testing.assert_allclose(np.abs(y) ** 2, [1, 0, 0], atol=1e-8)

    def test_zero_hamiltonian(self, short_cfg):
        z = np.zeros((3, 3), dtype=complex)
        psi0 = np.array([0.6, 0.8j, 0.0])
        ys = integrate_schrodinger(lambda t: z, psi0, short_cfg)
        for y in ys:
            np.testing.assert_allclose(y, psi0, atol=1e-12)

    def test_determinism(self, drive, h0, short_cfg):
        c = sol.validate(drive)
        psi0 = sol.basis_state(sol.BasisLabel.ZERO, drive, c, h0, 0.0)
        hfun = lambda t: sol.hamiltonian_at(drive, h0, t)
        a = integrate_schrodinger(hfun, psi0, short_cfg)
        b = integrate_schrodinger(hfun, psi0, short_cfg)
        assert np.array_equal(a, b)

    def test_preconditions(self, short_cfg):
        with pytest.raises(DomainError):
            integrate_schrodinger(
                lambda t: np.zeros((3, 3)), np.array([1.0, 1.0, 0.0]), short_cfg
            )
        skew = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(DomainError):
            integrate_schrodinger(lambda t: skew, np.array([1.0, 0.0]), short_cfg)

    def test_time_reversal(self, drive, h0, short_cfg):
        c = sol.validate(drive)
        psi0 = sol.basis_state(sol.BasisLabel.PLUS, drive, c, h0, 0.0)
        hfun = lambda t: sol.hamiltonian_at(drive, h0, t)
        fwd = integrate_schrodinger(hfun, psi0, short_cfg)
        t_end = SHORT[-1]
        # substitute s = t_end - t: i hbar dpsi/ds = -H(t_end - s) psi
        back_h = lambda s: -sol.hamiltonian_at(drive, h0, t_end - s)
        back = integrate_schrodinger(back_h, fwd[-1] / np.linalg.norm(fwd[-1]), short_cfg)
        assert np.linalg.norm(back[-1] - psi0) <= 100 * short_cfg.rel_tol


class TestVonNeumann:
    def test_maximally_mixed_fixed_point(self, h0, short_cfg):
        r0 = np.eye(3, dtype=complex) / 3
        for variant in dens.VARIANTS:
            rs = integrate_vonneumann(h0, r0, variant, short_cfg)
            assert np.linalg.norm(rs[-1] - r0) <= 1e-10

    def test_structure_preservation(self, h0, short_cfg):
        coeffs = dens.solve_coeffs(10.0, 5.0, 1.0, math.sqrt(0.5))
        r0 = dens.rho(coeffs, h0, 0.0)
        for variant in dens.VARIANTS:
            rs = integrate_vonneumann(h0, r0, variant, short_cfg)
            traces = np.trace(rs, axis1=1, axis2=2)
            assert np.max(np.abs(traces - 1.0)) <= 1e-8
            herm = max(
                np.linalg.norm(r - r.conj().T) for r in rs
            )
            assert herm <= 1e-8
            # both candidate flows are conjugations: spectrum stays put
            eig0 = np.linalg.eigvalsh(r0)
            drift = max(
                np.max(np.abs(np.linalg.eigvalsh(r) - eig0)) for r in rs
            )
            assert drift <= 1e-6

    def test_rejects_bad_initial(self, h0, short_cfg):
        with pytest.raises(DomainError):
            integrate_vonneumann(h0, np.eye(3, dtype=complex), "plain", short_cfg)
        skew = np.eye(3, dtype=complex) / 3
        skew[0, 1] = 0.2
        with pytest.raises(DomainError):
            integrate_vonneumann(h0, skew, "plain", short_cfg)


class TestVariantResolution:
    def test_closed_form_branch_matches_neither(self):
        coeffs = dens.solve_coeffs(10.0, 5.0, 1.0, math.sqrt(0.5))
        res = resolve_variant(coeffs)
        assert res["matched"] == "neither"
        # the two candidates differ by 3/2 only, so at most one could match;
        # here both residuals sit at O(1), not at the h^2 floor
        for variant in dens.VARIANTS:
            assert res["residuals"][variant][0] > 1e-3

    def test_mu_negated_diagnostic(self):
        coeffs = dens.solve_coeffs(10.0, 5.0, 1.0, math.sqrt(0.5))
        res = resolve_variant(coeffs)
        assert res["scaled_matches_with_mu_negated"] is True

    def test_integration_confirms_finite_difference_verdict(self, h0, short_cfg):
        # the nonlinear flows started from the analytic state leave the
        # analytic trajectory quickly for both variants
        coeffs = dens.solve_coeffs(10.0, 5.0, 1.0, math.sqrt(0.5))
        r0 = dens.rho(coeffs, h0, 0.0)
        for variant in dens.VARIANTS:
            rs = integrate_vonneumann(h0, r0, variant, short_cfg)
            dev = max(
                np.linalg.norm(rs[i] - dens.rho(coeffs, h0, t))
                for i, t in enumerate(SHORT)
            )
            assert dev > 1e-3


class TestVerifyAll:
    def test_reference_run(self, short_report):
        assert not short_report.failures
        assert short_report.max_state_deviation <= 1e-6
        assert short_report.max_gram_deviation <= 1e-10
        assert short_report.max_eigenvalue_drift <= 1e-10
        assert short_report.conjugation_residual <= 1e-10
        assert short_report.matched_vn_variant == "neither"
        assert max(short_report.extras["norm_drift"].values()) <= 10 * 1e-9

    def test_sample_table(self, short_report):
        assert len(short_report.samples) == len(SHORT)
        row = short_report.samples[0]
        assert row["t"] == 0.0
        for key in ("psi_zero", "psi_plus", "psi_minus", "ground", "gram"):
            assert key in row

    def test_determinism(self, drive, h0, short_cfg, short_report):
        again = verify_all(drive, h0, short_cfg, density_mu=10.0, density_lam=5.0)
        assert again.max_state_deviation == short_report.max_state_deviation
        assert again.samples == short_report.samples

    def test_validation_gate(self, h0, short_cfg):
        bad = sol.DriveParams(a=0.3, x=1.0, omega=1.0, k=0.25)
        report = verify_all(bad, h0, short_cfg)
        assert "validation" in report.failures
        assert math.isnan(report.max_state_deviation)
        assert report.samples == []

    def test_forced_zero_phase_blows_up(self, drive, h0):
        cfg = IntegratorConfig(t_grid=tuple(np.linspace(0, 6, 31)), rel_tol=1e-9)
        report = verify_all(drive, h0, cfg, force_zero_phase=True)
        assert report.max_state_deviation > 0.01

    def test_pulse_drive(self, h0):
        p = sol.DriveParams(a=1.2, x=1.6, omega=1.0, k=1.0)
        cfg = IntegratorConfig(t_grid=tuple(np.linspace(0, 12, 61)), rel_tol=1e-9)
        report = verify_all(p, h0, cfg)
        assert not report.failures
        assert report.max_state_deviation <= 1e-6

    def test_any_hermitian_h0(self, drive, rng=np.random.default_rng(7)):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = (m + m.conj().T) / 2
        cfg = IntegratorConfig(t_grid=tuple(np.linspace(0, 6, 31)), rel_tol=1e-9)
        report = verify_all(drive, m, cfg)
        assert not report.failures
        assert report.max_state_deviation <= 1e-6

    def test_density_domain_recorded(self, drive, h0):
        cfg = IntegratorConfig(t_grid=tuple(np.linspace(0, 3, 16)), rel_tol=1e-9)
        report = verify_all(drive, h0, cfg, density_mu=1.0, density_lam=2.0)
        assert "density" in report.failures
        assert report.max_state_deviation <= 1e-6  # state checks still ran


class TestConvergence:
    def test_tolerance_scaling(self, drive, h0):
        grid = tuple(np.linspace(0, 12, 25))
        devs = []
        for rel in (1e-7, 5e-8):
            cfg = IntegratorConfig(t_grid=grid, rel_tol=rel, abs_tol=rel * 1e-3)
            devs.append(verify_all(drive, h0, cfg).max_state_deviation)
        # adaptive control tracks the requested tolerance roughly linearly
        assert devs[1] < devs[0]
        assert devs[0] / devs[1] >= 1.4

    def test_step_halving_order(self, drive, h0):
        grid = tuple(np.linspace(0, 12, 25))
        devs = []
        for ms in (0.05, 0.025):
            cfg = IntegratorConfig(
                t_grid=grid, rel_tol=1e-2, abs_tol=1e-2, max_step=ms
            )
            devs.append(verify_all(drive, h0, cfg).max_state_deviation)
        assert devs[0] / devs[1] >= 4.0
