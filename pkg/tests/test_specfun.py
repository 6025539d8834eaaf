from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from qreg import specfun
from qreg.errors import DomainError
from qreg.specfun import BesselKind, GeneralizedLaguerre, Hermite

SQRT2 = math.sqrt(2.0)
KINDS = {
    BesselKind.FIRST: mp.besselj,
    BesselKind.SECOND: mp.bessely,
    BesselKind.MODIFIED_FIRST: mp.besseli,
    BesselKind.MODIFIED_SECOND: mp.besselk,
}


class TestBessel:
    def test_j0_near_origin(self):
        assert specfun.bessel(BesselKind.FIRST, 0.0, 1e-8) == pytest.approx(1.0, abs=1e-10)

    def test_half_integer_closed_forms(self):
        assert specfun.bessel(BesselKind.FIRST, 0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-12)
        assert specfun.bessel(BesselKind.SECOND, 0.5, math.pi) == pytest.approx(SQRT2 / math.pi, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            specfun.bessel(BesselKind.FIRST, 1.0, x)

    def test_second_kind_diverges_but_is_returned(self):
        assert specfun.bessel(BesselKind.SECOND, 1.0, 1e-8) < -1e7
        assert specfun.bessel(BesselKind.MODIFIED_SECOND, 1.0, 1e-8) > 1e7

    def test_array_input(self):
        x = np.array([0.5, 1.0, 2.0])
        out = specfun.bessel(BesselKind.FIRST, 1.0, x)
        assert isinstance(out, np.ndarray) and out.shape == (3,)

    @pytest.mark.parametrize("kind", list(BesselKind))
    @pytest.mark.parametrize("nu", [0.0, 1 / SQRT2, 2.5, 10.0, 50.0])
    @pytest.mark.parametrize("x", [1e-6, 0.3, 7.0, 85.0, 1000.0])
    def test_against_mpmath(self, kind, nu, x):
        exact = KINDS[kind](nu, x)
        if abs(exact) < 1e-290 or abs(exact) > 1e290:
            pytest.skip("outside double range")
        got = specfun.bessel(kind, nu, x)
        # Oscillatory kinds are compared against the local envelope.
        if kind in (BesselKind.FIRST, BesselKind.SECOND):
            scale = float(mp.sqrt(mp.besselj(nu, x) ** 2 + mp.bessely(nu, x) ** 2))
        else:
            scale = abs(float(exact))
        assert abs(got - float(exact)) <= 1e-10 * scale

    @pytest.mark.parametrize("nu", [0.0, 1 / SQRT2, 1.5, 5.0])
    def test_wronskian(self, nu):
        x = np.linspace(0.1, 100.0, 1500)
        j = specfun.bessel(BesselKind.FIRST, nu, x)
        y = specfun.bessel(BesselKind.SECOND, nu, x)
        w = j * specfun.bessel_derivative(BesselKind.SECOND, nu, x) - specfun.bessel_derivative(BesselKind.FIRST, nu, x) * y
        target = 2.0 / (math.pi * x)
        assert np.max(np.abs(w - target) / target) < 1e-9

    @pytest.mark.parametrize("nu", [0.0, 1 / SQRT2, 1.5, 5.0])
    def test_recurrence(self, nu):
        x = np.linspace(0.1, 100.0, 1500)
        lhs = specfun.bessel(BesselKind.FIRST, nu - 1, x) + specfun.bessel(BesselKind.FIRST, nu + 1, x)
        rhs = 2 * nu / x * specfun.bessel(BesselKind.FIRST, nu, x)
        scale = np.maximum(np.abs(lhs), np.abs(specfun.bessel(BesselKind.FIRST, nu + 1, x)))
        assert np.max(np.abs(lhs - rhs) / scale) < 1e-9

    @given(nu=st.floats(0.0, 20.0), x=st.floats(0.05, 200.0))
    def test_derivative_matches_mpmath(self, nu, x):
        for kind, fn in [(BesselKind.FIRST, mp.besselj), (BesselKind.MODIFIED_FIRST, mp.besseli)]:
            exact = float(mp.diff(lambda t: fn(nu, t), x))
            scale = max(abs(exact), abs(float(fn(nu, x))), 1e-300)
            if kind is BesselKind.FIRST:
                scale = max(scale, float(mp.sqrt(mp.besselj(nu, x) ** 2 + mp.bessely(nu, x) ** 2)))
            assert abs(specfun.bessel_derivative(kind, nu, x) - exact) <= 1e-9 * scale


class TestBesselZero:
    def test_half_order(self):
        assert specfun.bessel_zero(0.5, 1) == pytest.approx(math.pi, abs=1e-12)
        assert specfun.bessel_zero(0.5, 2) == pytest.approx(2 * math.pi, abs=1e-12)

    def test_bracketed_between_integer_orders(self):
        r = specfun.bessel_zero(1 / SQRT2, 1)
        assert 2.404826 < r < 3.831706

    @pytest.mark.parametrize("nu", [0.0, 1 / SQRT2, 0.5, 1.5, 2.5, 7.3])
    def test_against_mpmath(self, nu):
        for k in range(1, 6):
            assert specfun.bessel_zero(nu, k) == pytest.approx(float(mp.besseljzero(nu, k)), abs=1e-10)

    @given(nu=st.floats(0.0, 30.0), k=st.integers(1, 8))
    def test_root_and_ordering(self, nu, k):
        r = specfun.bessel_zero(nu, k)
        assert abs(specfun.bessel(BesselKind.FIRST, nu, r)) < 1e-9
        assert specfun.bessel_zero(nu, k + 1) > r

    @pytest.mark.parametrize("args", [(-0.5, 1), (1.0, 0), (1.0, 1.5), (math.nan, 1)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            specfun.bessel_zero(*args)


class TestPolynomials:
    def test_examples(self):
        assert specfun.orthopoly(Hermite(), 0, 3.7) == 1.0
        assert specfun.orthopoly(Hermite(), 2, 1.0) == 2.0
        assert specfun.orthopoly(GeneralizedLaguerre(SQRT2), 1, 1.0) == pytest.approx(SQRT2, rel=1e-14)

    def test_laguerre_parameter_domain(self):
        with pytest.raises(DomainError):
            GeneralizedLaguerre(-1.0)
        with pytest.raises(DomainError):
            specfun.laguerre(2, -1.5, 0.3)

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            specfun.hermite(-1, 0.0)

    def test_hermite_recurrence(self):
        x = np.linspace(-4, 4, 81)
        for n in range(1, 30):
            lhs = specfun.hermite(n + 1, x)
            rhs = 2 * x * specfun.hermite(n, x) - 2 * n * specfun.hermite(n - 1, x)
            assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)) < 1e-13

    @given(n=st.integers(0, 25), x=st.floats(-5, 5))
    def test_hermite_against_mpmath(self, n, x):
        exact = float(mp.hermite(n, x))
        assert specfun.hermite(n, x) == pytest.approx(exact, rel=1e-11, abs=1e-11 * 2.0**n * math.factorial(n) ** 0.5)

    @given(n=st.integers(0, 15), a=st.floats(-0.9, 8.0), x=st.floats(0.0, 30.0))
    @example(n=1, a=2.0, x=3.0)  # exact zero: mpmath needs zeroprec
    def test_laguerre_against_mpmath(self, n, a, x):
        with mp.workdps(40):
            exact = float(mp.laguerre(n, a, x, zeroprec=200))
            scale = float(mp.laguerre(n, a, -x, zeroprec=200)) if x > 0 else abs(exact)  # sum of |terms|
        assert abs(specfun.laguerre(n, a, x) - exact) <= 1e-12 * max(scale, 1.0)


class TestKummer:
    def test_examples(self):
        assert specfun.kummer_m(2.3, 4.5, 0.0) == 1.0
        assert specfun.kummer_m(-1, 2, 1.0) == 0.5
        assert specfun.kummer_m(1.5, 1.5, 1.0) == pytest.approx(math.e, rel=1e-14)

    @pytest.mark.parametrize("a", [0.0, 1.0, SQRT2, 3.0, 5.0])
    def test_kummer_laguerre(self, a):
        z = np.linspace(0.0, 10.0, 101)
        for n in range(11):
            lhs = specfun.kummer_m(-n, a + 1, z)
            rhs = math.factorial(n) / specfun.pochhammer(a + 1, n) * specfun.laguerre(n, a, z)
            assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)) < 1e-10

    @given(a=st.floats(-5.5, 6.0), b=st.floats(0.3, 8.0), z=st.floats(-200.0, 200.0))
    @example(a=1.1754943508222875e-38, b=1.0, z=69.0)
    @example(a=1.5182292619311466e-64, b=1.0, z=129.0)
    def test_against_mpmath(self, a, b, z):
        if float(a).is_integer() and a <= 0:
            return  # terminating series are covered by the Laguerre identity
        # tiny a: the correction is a * O(e^z / z) and mpmath needs ~log10(1/|a|) extra digits
        dps = 40 + (int(-math.log10(abs(a))) if 0 < abs(a) < 1 else 0)
        with mp.workdps(dps):
            exact = float(mp.hyp1f1(a, b, z, zeroprec=200))
            # error is relative to the summed |terms| of the series actually used
            if z >= 0:
                terms = float(mp.hyp1f1(abs(a), b, z))
            else:
                terms = float(mp.exp(z) * mp.hyp1f1(abs(b - a), b, -z))
        if not 1e-290 < abs(exact) < 1e290:
            return
        assert abs(specfun.kummer_m(a, b, z) - exact) <= 1e-10 * max(abs(exact), terms)

    def test_singular_b(self):
        with pytest.raises(DomainError):
            specfun.kummer_m(1.0, -2.0, 0.5)
        # terminates before the singular denominator
        assert specfun.kummer_m(-1.0, -2.0, 0.5) == pytest.approx(1.0 + 0.5 / 2.0)

    def test_overflow_is_reported(self):
        with pytest.raises(OverflowError):
            specfun.kummer_m(1.0, 1.0, 800.0)

    def test_pochhammer(self):
        assert specfun.pochhammer(3.0, 0) == 1.0
        assert specfun.pochhammer(1.0, 5) == 120.0
        assert specfun.pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
        with pytest.raises(DomainError):
            specfun.pochhammer(1.0, -1)


class TestWhittaker:
    def test_sinh_identity(self):
        assert specfun.whittaker_m(0.0, 0.5, 1.0) == pytest.approx(2 * math.sinh(0.5), rel=1e-13)
        # frozen from mpmath.whitm(0, 0.5, 1)
        assert specfun.whittaker_m(0.0, 0.5, 1.0) == pytest.approx(1.0421906109874947, rel=1e-13)

    def test_small_argument(self):
        assert abs(specfun.whittaker_m(3.2, 1 / SQRT2, 1e-8)) < 1e-6

    @pytest.mark.parametrize("n", [0, 1, 2, 4])
    def test_laguerre_form(self, n):
        mu_w = 1 / SQRT2
        z = np.linspace(0.1, 30.0, 50)
        lhs = specfun.whittaker_m(n + mu_w + 0.5, mu_w, z)
        rhs = (
            np.exp(-z / 2)
            * z ** (mu_w + 0.5)
            * math.factorial(n)
            / specfun.pochhammer(2 * mu_w + 1, n)
            * specfun.laguerre(n, 2 * mu_w, z)
        )
        assert np.allclose(lhs, rhs, rtol=1e-11, atol=1e-13 * np.max(np.abs(lhs)))

    def test_ground_state_value(self):
        mu_w = 1 / SQRT2
        # frozen from mpmath.whitm(mu_w + 1/2, mu_w, 2)
        assert specfun.whittaker_m(mu_w + 0.5, mu_w, 2.0) == pytest.approx(0.8493386102343175, rel=1e-13)
        assert specfun.whittaker_m(mu_w + 0.5, mu_w, 2.0) == pytest.approx(math.exp(-1) * 2 ** (mu_w + 0.5), rel=1e-13)

    @given(k=st.floats(-3, 3), m=st.floats(0.0, 3.0), z=st.floats(0.01, 40.0))
    def test_against_mpmath(self, k, m, z):
        a = abs(m - k + 0.5)
        with mp.workdps(40 + (int(-math.log10(a)) if 0 < a < 1 else 0)):
            exact = float(mp.whitm(k, m, z, zeroprec=200))
            terms = float(mp.exp(-z / 2) * mp.power(z, m + 0.5) * mp.hyp1f1(abs(m - k + 0.5), 1 + 2 * m, z))
        assert abs(specfun.whittaker_m(k, m, z) - exact) <= 1e-9 * max(abs(exact), terms) + 1e-300

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.whittaker_m(0.0, 0.5, 0.0)
        with pytest.raises(DomainError):
            specfun.whittaker_m(0.0, -1.0, 1.0)
