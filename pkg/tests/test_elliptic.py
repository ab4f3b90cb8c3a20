import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ellipj

from trisol.elliptic import jacobi, quarter_period
from trisol.errors import DivergenceError, DomainError


def k_integrand(theta, k):
    return 1.0 / math.sqrt(1.0 - (k * math.sin(theta)) ** 2)


class TestQuarterPeriod:
    def test_zero_modulus(self):
        assert quarter_period(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    @pytest.mark.parametrize("k", [0.1, 0.25, 0.5, 0.9, 0.999])
    def test_against_quadrature(self, k):
        # independent oracle: direct quadrature of the defining integral
        ref, err = quad(k_integrand, 0.0, math.pi / 2, args=(k,), epsabs=1e-13)
        assert quarter_period(k) == pytest.approx(ref, abs=1e-11)

    def test_reference_values(self):
        assert quarter_period(0.25) == pytest.approx(1.5962422221317835, abs=1e-13)
        assert quarter_period(0.9) == pytest.approx(2.2805491384227703, abs=1e-13)

    def test_strictly_increasing(self):
        ks = np.linspace(0.0, 0.999, 200)
        vals = [quarter_period(k) for k in ks]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_divergence_at_one(self):
        with pytest.raises(DivergenceError):
            quarter_period(1.0)

    @pytest.mark.parametrize("k", [-0.1, 1.5, math.nan])
    def test_domain(self, k):
        with pytest.raises(DomainError):
            quarter_period(k)


class TestJacobi:
    def test_zero_phase(self):
        for k in (0.0, 0.3, 0.9, 1.0):
            assert jacobi(0.0, k) == (0.0, 1.0, 1.0)

    def test_k1_closed_forms(self):
        sn, cn, dn = jacobi(1.0, 1.0)
        assert sn == pytest.approx(math.tanh(1.0), abs=1e-15)
        assert cn == pytest.approx(1.0 / math.cosh(1.0), abs=1e-15)
        assert dn == pytest.approx(1.0 / math.cosh(1.0), abs=1e-15)

    def test_quarter_period_identities(self):
        k = 0.25
        sn, cn, dn = jacobi(quarter_period(k), k)
        assert sn == pytest.approx(1.0, abs=1e-12)
        assert cn == pytest.approx(0.0, abs=1e-12)
        assert dn == pytest.approx(math.sqrt(1 - k * k), abs=1e-12)

    def test_identities_random(self, rng):
        # sn^2 + cn^2 = 1 and dn^2 + k^2 sn^2 = 1 over 10^4 draws
        for _ in range(10_000):
            k = float(rng.uniform(0.0, 1.0))
            u = float(rng.uniform(-50.0, 50.0))
            sn, cn, dn = jacobi(u, k)
            assert abs(sn * sn + cn * cn - 1.0) <= 1e-12
            assert abs(dn * dn + k * k * sn * sn - 1.0) <= 1e-12
            assert abs(sn) <= 1.0 + 1e-15 and abs(cn) <= 1.0 + 1e-15
            assert math.sqrt(1 - k * k) - 1e-15 <= dn <= 1.0 + 1e-15

    def test_periodicity(self, rng):
        for _ in range(200):
            k = float(rng.uniform(0.0, 0.999))
            u = float(rng.uniform(-20.0, 20.0))
            per = 4.0 * quarter_period(k)
            a = jacobi(u, k)
            b = jacobi(u + per, k)
            assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-10

    @pytest.mark.parametrize("k", [0.0, 1e-8])
    def test_trig_limit(self, k):
        for u in np.linspace(-5.0, 5.0, 81):
            sn, cn, dn = jacobi(u, k)
            assert abs(sn - math.sin(u)) <= 1e-7
            assert abs(cn - math.cos(u)) <= 1e-7
            assert abs(dn - 1.0) <= 1e-7

    @pytest.mark.parametrize("k", [1.0, 1.0 - 1e-8])
    def test_pulse_limit(self, k):
        for u in np.linspace(-5.0, 5.0, 81):
            sn, cn, dn = jacobi(u, k)
            assert abs(sn - math.tanh(u)) <= 1e-6
            assert abs(cn - 1.0 / math.cosh(u)) <= 1e-6
            assert abs(dn - 1.0 / math.cosh(u)) <= 1e-6

    def test_derivatives(self):
        # d sn = cn dn, d cn = -sn dn, d dn = -k^2 sn cn, error O(h^2)
        for k in (0.3, 0.7, 0.97):
            for u in (0.4, 1.7, -2.2):
                errs = {}
                for h in (1e-3, 1e-4):
                    p, q = jacobi(u + h, k), jacobi(u - h, k)
                    c = jacobi(u, k)
                    errs[h] = max(
                        abs((p.sn - q.sn) / (2 * h) - c.cn * c.dn),
                        abs((p.cn - q.cn) / (2 * h) + c.sn * c.dn),
                        abs((p.dn - q.dn) / (2 * h) + k * k * c.sn * c.cn),
                    )
                    assert errs[h] <= 2.0 * h * h
                assert errs[1e-3] / max(errs[1e-4], 1e-18) >= 25.0

    def test_against_scipy(self, rng):
        worst = 0.0
        for _ in range(2000):
            k = float(rng.uniform(0.0, 0.999))
            u = float(rng.uniform(-30.0, 30.0))
            sn, cn, dn = jacobi(u, k)
            s, c, d, _ = ellipj(u, k * k)
            worst = max(worst, abs(sn - s), abs(cn - c), abs(dn - d))
        assert worst <= 1e-11

    def test_near_one_band(self):
        # 25-digit reference arithmetic; covers both sides of the
        # AGM -> hyperbolic switchover at 1 - k^2 = 1e-12
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 25
        for k in (1 - 1e-5, 1 - 1e-9, 1 - 1e-12, 1 - 1e-13):
            for u in (-3.0, 0.7, 2.0, 8.0):
                got = jacobi(u, k)
                m = mp.mpf(k) ** 2
                want = (
                    float(mp.ellipfun("sn", u, m=m)),
                    float(mp.ellipfun("cn", u, m=m)),
                    float(mp.ellipfun("dn", u, m=m)),
                )
                assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-12

    @pytest.mark.parametrize("u,k", [(math.inf, 0.5), (math.nan, 0.5), (1.0, -0.2), (1.0, 1.2)])
    def test_domain(self, u, k):
        with pytest.raises(DomainError):
            jacobi(u, k)
