import math

import mpmath
import numpy as np
import pytest

from sleobs.params import SLEParams
from sleobs.special import (
    c_alpha,
    c_hat,
    c_hat_is_degenerate,
    c_star,
    c_tilde,
    constants,
    gauss_2f1,
    h_n,
    principal_pow,
    real_gamma,
)


class TestPrincipalPow:
    def test_principal_sqrt_of_minus_one(self):
        assert principal_pow(-1.0, 0.5) == pytest.approx(1j, abs=1e-15)

    def test_real_positive(self):
        assert principal_pow(4.0, 0.5) == pytest.approx(2.0, abs=1e-15)

    def test_polar_oracle(self):
        # (1+i)^{3/2} = 2^{3/4} e^{3 pi i/8}
        truth = 2 ** 0.75 * np.exp(3j * math.pi / 8)
        assert principal_pow(1 + 1j, 1.5) == pytest.approx(truth, abs=1e-14)

    def test_integer_exponent_matches_multiplication(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal())
            if z.real < 0 and abs(z.imag) < 1e-3:
                continue
            assert principal_pow(z, 3) == pytest.approx(z * z * z, rel=1e-12)

    def test_zero_base(self):
        assert principal_pow(0.0, 2.0) == 0.0
        with pytest.raises(ValueError):
            principal_pow(0.0, -1.0)

    def test_array_input(self):
        z = np.array([1.0, -1.0, 1j])
        out = principal_pow(z, 0.5)
        assert np.allclose(out, [1.0, 1j, np.exp(1j * math.pi / 4)])


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1(0.3, 1.7, 0.9, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_log_identity(self):
        # 2F1(1,1,2;w) = -ln(1-w)/w
        assert gauss_2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2 * math.log(2), rel=1e-13)

    def test_terminating_series(self):
        assert gauss_2f1(1.5, 0.0, 0.5, -4.0) == pytest.approx(1.0, abs=1e-15)

    def test_against_mpmath_complex(self):
        pts = [0.3 + 0.4j, -2.0 + 0.1j, 0.5 - 1.5j, -10.0 + 0.0j, 0.5 + 0.5j]
        for w in pts:
            mine = gauss_2f1(1.25, -0.5, 0.75, w)
            ref = complex(mpmath.hyp2f1(1.25, -0.5, 0.75, w))
            assert mine == pytest.approx(ref, rel=1e-11)

    def test_euler_transformation(self):
        # 2F1(a,b,c;w) = (1-w)^{c-a-b} 2F1(c-a, c-b, c; w)
        rng = np.random.default_rng(3)
        a, b, c = 0.8, 1.3, 2.1
        for _ in range(25):
            w = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
            if abs(w) > 0.9:
                continue
            lhs = gauss_2f1(a, b, c, w)
            rhs = principal_pow(1 - w, c - a - b) * gauss_2f1(c - a, c - b, c, w)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_branch_cut_rejected(self):
        with pytest.raises(ValueError):
            gauss_2f1(0.5, 0.5, 1.5, 2.0)
        with pytest.raises(ValueError):
            gauss_2f1(0.5, 0.5, 1.5, 1.0)

    def test_bad_c_rejected(self):
        with pytest.raises(ValueError):
            gauss_2f1(0.5, 0.5, -1.0, 0.3)


class TestGamma:
    def test_against_mpmath(self):
        for x in np.linspace(-9.5, 29.5, 79):
            if x <= 0 and abs(x - round(x)) < 1e-9:
                continue
            assert real_gamma(float(x)) == pytest.approx(
                float(mpmath.gamma(x)), rel=1e-13
            )

    def test_pole_raises(self):
        with pytest.raises(ValueError):
            real_gamma(0.0)
        with pytest.raises(ValueError):
            real_gamma(-3.0)


class TestConstants:
    def test_c_alpha_at_2(self):
        assert c_alpha(2.0) == pytest.approx(-2 * math.pi**2, rel=1e-13)

    def test_c_alpha_generic_against_mpmath(self):
        for alpha in [2.3, 2.5, 3.7, 4.8]:
            ref = float(
                -2
                * mpmath.pi**1.5
                * mpmath.gamma((alpha - 1) / 2)
                * mpmath.gamma(3 * alpha / 2 - 1)
                / (mpmath.gamma(alpha / 2) ** 2 * mpmath.gamma(alpha))
            )
            assert c_alpha(alpha) == pytest.approx(ref, rel=1e-12)

    def test_c_star_at_half(self):
        assert c_star(0.5) == pytest.approx(4 / math.pi, rel=1e-13)

    def test_c_star_is_reciprocal_sine_mass(self):
        # 2 / int_0^pi sin^{4a} = c_star
        for a in [0.5, 0.75, 1.0]:
            mass = float(mpmath.quad(lambda x: mpmath.sin(x) ** (4 * a), [0, mpmath.pi]))
            assert c_star(a) == pytest.approx(2.0 / mass, rel=1e-10)

    def test_c_tilde_kappa4_rho2(self):
        assert c_tilde(0.5, 2.0) == pytest.approx(3.0, rel=1e-13)

    def test_c_tilde_domain(self):
        with pytest.raises(ValueError):
            c_tilde(0.5, -2.0)

    def test_h_n_values(self):
        assert h_n(2) == pytest.approx(1.0 / (2 * math.pi**3), rel=1e-13)
        assert h_n(3) == pytest.approx(-2.0 / (15 * math.pi**2), rel=1e-13)
        with pytest.raises(ValueError):
            h_n(1)

    def test_c_hat_degenerate_at_integers(self):
        assert c_hat(2.0) == 0.0
        assert c_hat(3.0) == 0.0
        assert c_hat_is_degenerate(4.0)
        assert not c_hat_is_degenerate(2.5)

    def test_c_hat_generic_value(self):
        alpha = 2.5
        ref = float(
            4
            * mpmath.sin(mpmath.pi * alpha / 2) ** 2
            * mpmath.sin(mpmath.pi * alpha)
            * mpmath.gamma(1 - alpha / 2)
            * mpmath.gamma(3 * alpha / 2 - 1)
            / mpmath.gamma(alpha)
        )
        assert c_hat(alpha) == pytest.approx(ref, rel=1e-12)

    def test_c_hat_vanishes_continuously(self):
        # approach alpha = 3 from both sides: c_hat -> 0
        assert abs(c_hat(3.0 + 1e-5)) < 1e-3
        assert abs(c_hat(3.0 - 1e-5)) < 1e-3

    def test_constants_aggregate(self):
        out = constants(SLEParams(4.0, rho=2.0))
        assert out["c_alpha"] == pytest.approx(-2 * math.pi**2, rel=1e-12)
        assert out["c_hat"] == 0.0
        assert out["c_hat_degenerate"] is True
        assert out["c_star"] == pytest.approx(4 / math.pi, rel=1e-12)
        assert out["c_tilde"] == pytest.approx(3.0, rel=1e-12)
        assert out["h_n"] == pytest.approx(1.0 / (2 * math.pi**3), rel=1e-12)
        out2 = constants(SLEParams(3.2))
        assert "h_n" not in out2 and "c_tilde" not in out2
        assert out2["c_hat_degenerate"] is False
