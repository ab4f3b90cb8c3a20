import math

import numpy as np
import pytest

from trisol.errors import DomainError
from trisol.su3 import (
    Configuration,
    H0Params,
    anticommutator,
    commutator,
    free_propagator,
    generator,
    generators,
    h0_matrix,
    hermitian_eigensystem,
    interaction_picture,
    propagator,
)


def random_hermitian(rng):
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return (m + m.conj().T) / 2


class TestGenerators:
    def test_explicit_entries(self):
        np.testing.assert_allclose(
            generator(4), 0.5 * np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
            atol=0,
        )
        np.testing.assert_allclose(
            generator(7),
            0.5 * np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]),
            atol=0,
        )

    def test_trace_orthogonality(self):
        for j in range(1, 9):
            for k in range(1, 9):
                tr = np.trace(generator(j) @ generator(k))
                want = 0.5 if j == k else 0.0
                assert abs(tr - want) <= 1e-15

    def test_hermitian_traceless(self):
        for s in generators():
            assert np.linalg.norm(s - s.conj().T) <= 1e-15
            assert abs(np.trace(s)) <= 1e-15

    def test_readonly(self):
        with pytest.raises(ValueError):
            generator(1)[0, 0] = 9.0

    @pytest.mark.parametrize("j", [0, 9, -3, 1.5])
    def test_index_range(self, j):
        with pytest.raises(DomainError):
            generator(j)


class TestH0:
    def test_matrix(self):
        np.testing.assert_allclose(
            h0_matrix(H0Params(mu=3.0, lam=0.0)), np.diag([-2.0, 2.0, 0.0]),
            atol=1e-15,
        )
        np.testing.assert_allclose(
            h0_matrix(H0Params(mu=10.0, lam=5.0)),
            (2.0 / 3.0) * np.diag([-10.0, 10.0, 5.0]),
            atol=1e-15,
        )

    def test_classification(self):
        assert H0Params(mu=10, lam=5).classify() is Configuration.LADDER
        assert H0Params(mu=2, lam=-3).classify() is Configuration.VEE
        assert H0Params(mu=2, lam=3).classify() is Configuration.LAMBDA
        for mu, lam in [(2.0, 2.0), (2.0, -2.0), (0.0, 1.0), (-1.0, 0.0)]:
            with pytest.raises(DomainError):
                H0Params(mu=mu, lam=lam).classify()

    def test_invalid_fields(self):
        with pytest.raises(DomainError):
            H0Params(mu=math.nan, lam=0.0)
        with pytest.raises(DomainError):
            H0Params(mu=1.0, lam=0.0, hbar=0.0)


class TestPropagator:
    def test_identity_at_zero(self):
        np.testing.assert_allclose(
            free_propagator(H0Params(mu=7, lam=-2), 0.0), np.eye(3), atol=0
        )

    def test_diagonal_phases(self):
        # (2/3)*3 = 2, so t = pi winds both phases through full turns
        u = free_propagator(H0Params(mu=3.0, lam=0.0), math.pi)
        np.testing.assert_allclose(u, np.eye(3), atol=1e-12)

    def test_unitarity(self, rng):
        p = H0Params(mu=4.2, lam=1.3)
        for t in rng.uniform(-30, 30, size=25):
            u = free_propagator(p, t)
            assert np.linalg.norm(u @ u.conj().T - np.eye(3)) <= 1e-14

    def test_matrix_h0_route(self, rng):
        h = random_hermitian(rng)
        u = propagator(h, 0.7, hbar=2.0)
        assert np.linalg.norm(u @ u.conj().T - np.eye(3)) <= 1e-12
        with pytest.raises(DomainError):
            propagator(h, 0.7)


class TestInteractionPicture:
    def test_t_zero_and_diagonal(self, rng):
        p = H0Params(mu=10, lam=5)
        s = random_hermitian(rng)
        np.testing.assert_allclose(interaction_picture(s, p, 0.0), s, atol=1e-15)
        d = np.diag([1.0, 2.0, -0.5]).astype(complex)
        for t in (0.3, 4.7):
            np.testing.assert_allclose(interaction_picture(d, p, t), d, atol=1e-14)

    def test_spectrum_preserved(self):
        p = H0Params(mu=10, lam=5)
        for t in (0.0, 0.9, 12.3):
            w = np.linalg.eigvalsh(interaction_picture(generator(4), p, t))
            np.testing.assert_allclose(w, [-0.5, 0.0, 0.5], atol=1e-12)

    def test_trace_and_norm_preserved(self, rng):
        p = H0Params(mu=3.3, lam=-1.2)
        for _ in range(20):
            s = random_hermitian(rng)
            t = float(rng.uniform(-20, 20))
            st = interaction_picture(s, p, t)
            assert abs(np.trace(st) - np.trace(s)) <= 1e-12
            assert abs(np.linalg.norm(st) - np.linalg.norm(s)) <= 1e-12


class TestEigensystem:
    def test_diagonal(self):
        w, q = hermitian_eigensystem(np.diag([1.0, 2.0, 3.0]).astype(complex))
        np.testing.assert_allclose(w, [1, 2, 3], atol=0)
        np.testing.assert_allclose(q, np.eye(3), atol=0)

    def test_generator_spectrum(self):
        w, _ = hermitian_eigensystem(generator(1))
        np.testing.assert_allclose(w, [-0.5, 0.0, 0.5], atol=1e-15)

    def test_reconstruction_and_phase(self, rng):
        for _ in range(30):
            m = random_hermitian(rng)
            w, q = hermitian_eigensystem(m)
            assert np.linalg.norm(m @ q - q @ np.diag(w)) <= 1e-10
            assert np.linalg.norm(q @ q.conj().T - np.eye(3)) <= 1e-12
            assert all(w[i] <= w[i + 1] for i in range(2))
            for i in range(3):
                pivot = q[np.argmax(np.abs(q[:, i])), i]
                assert pivot.real > 0 and abs(pivot.imag) <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))


def test_anticommutator_commutator_identity(rng):
    # [{H0, r}, r] = [H0, r^2] for Hermitian arguments
    for _ in range(25):
        h = random_hermitian(rng)
        r = random_hermitian(rng)
        lhs = commutator(anticommutator(h, r), r)
        rhs = commutator(h, r @ r)
        assert np.linalg.norm(lhs - rhs) <= 1e-12
