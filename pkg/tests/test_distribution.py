import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sint
from scipy import optimize, special

from usptrace import distribution as d
from usptrace import weyl
from usptrace.errors import DomainError

inside = st.floats(-3.99, 3.99)
METHODS = [m for m in d.TAU_G2_METHODS if m != "auto"]


def marginal_trace_g2(x):
    """Oracle: integrate lambda_2 along the line t1 + t2 = x."""
    lo, hi = max(-2.0, x - 2.0), min(2.0, x + 2.0)
    val, _ = sint.quad(lambda t: weyl.density_t(np.array([t, x - t])), lo, hi, epsabs=1e-13, limit=200)
    return val


def marginal_product_g2(x):
    """Oracle: density of t1 t2 under lambda_2 by the change of variables t2 = x / t1."""
    lo = abs(x) / 2.0
    f = lambda t: sum(weyl.density_t(np.array([s, x / s])) / abs(s) for s in (t, -t))
    val, _ = sint.quad(f, lo, 2.0, epsabs=1e-13, limit=400)
    return val


class TestTraceG2:
    @given(inside)
    def test_methods_agree(self, x):
        vals = [d.f_tau_g2(x, m) for m in METHODS]
        assert max(vals) - min(vals) < 1e-10

    @pytest.mark.parametrize("x", [0.0, 0.7, 1.9, 3.0, 3.8])
    def test_against_weyl_marginal(self, x):
        assert d.f_tau_g2(x) == pytest.approx(marginal_trace_g2(x), abs=1e-10)

    @pytest.mark.parametrize("x", [0.2, 1.0, 2.5, 3.9])
    def test_meijer_value_against_mpmath(self, x):
        z = x * x / 16
        want = float(mp.meijerg([[], [2.5, 3.5]], [[0, 1], []], z))
        assert d._meijer_g(z) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("x", [-3.7, -1.0, 0.3, 2.5, 3.95])
    def test_cdf_against_meijer_repartition(self, x):
        z = x * x / 16
        g = mp.meijerg([[0.5], [2.5, 3.5]], [[0, 1], [-0.5]], z)
        want = float(3 * x / mp.pi * g + 0.5)
        assert d.cdf_tau_g2(x) == pytest.approx(want, abs=1e-13)
        assert d.cdf_tau_g2(np.array([x]))[0] == pytest.approx(want, abs=1e-13)

    def test_shape_facts(self):
        assert d.f_tau_g2(0.0) == pytest.approx(64 / (15 * math.pi**2), abs=1e-15)
        assert d.f_tau_g2(4.0) == 0.0 and d.f_tau_g2(-4.0) == 0.0
        xs = np.linspace(-3.9, 3.9, 41)
        assert np.allclose(d.f_tau_g2(xs), d.f_tau_g2(-xs), rtol=0, atol=1e-16)
        mass, _ = sint.quad(d.f_tau_g2, -4, 4, points=[0.0])
        assert mass == pytest.approx(1.0, abs=1e-10)

    def test_array_matches_scalar(self):
        xs = np.linspace(-4.5, 4.5, 91)
        assert np.allclose(d.f_tau_g2(xs), [d.f_tau_g2(x) for x in xs], atol=1e-15)

    def test_bad_method(self):
        with pytest.raises(DomainError):
            d.f_tau_g2(1.0, "nope")
        with pytest.raises(DomainError):
            d.f_tau_g2(np.zeros(3), "elliptic")

    def test_cdf_basic(self):
        assert d.cdf_tau_g2(0.0) == 0.5
        assert d.cdf_tau_g2(-5.0) == 0.0 and d.cdf_tau_g2(5.0) == 1.0
        ys = d.cdf_tau_g2(np.linspace(-4, 4, 201))
        assert np.all(np.diff(ys) >= 0)

    def test_log_slope_at_edge(self):
        # near x = 4 the density behaves like (4 - x)^4 / (... ) up to logarithms; the
        # ratio against the leading hypergeometric term tends to a constant
        for x in (3.999, 3.9999):
            m = 1 - x * x / 16
            assert d.f_tau_g2(x) / (m**4 / (4 * math.pi)) == pytest.approx(1.0, abs=5e-3)


class TestOtherLaws:
    @pytest.mark.parametrize("x", [0.0, 0.5, 2.2, 3.7])
    def test_rho_is_semicircle_convolution(self, x):
        lo, hi = max(-2.0, x - 2.0), min(2.0, x + 2.0)
        want, _ = sint.quad(lambda t: d.f_semicircle(t) * d.f_semicircle(x - t), lo, hi, epsabs=1e-13)
        assert d.f_rho(x) == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("x", [-3.5, -1.0, -0.2, 0.03, 0.4, 1.5, 3.2])
    def test_tau2_against_product_oracle(self, x):
        assert d.f_tau2(x) == pytest.approx(marginal_product_g2(x), abs=1e-8)

    def test_tau2_forms_overlap(self):
        for x in (-0.3, -0.06, 0.06, 0.3, 2.0):
            assert d.f_tau2(x, "slice") == pytest.approx(d.f_tau2(x, "elliptic"), abs=1e-12)
        with pytest.raises(DomainError):
            d.f_tau2(0.0, "elliptic")

    def test_tau2_value_at_zero_and_mode(self):
        assert d.f_tau2(0.0) == pytest.approx(8 / (3 * math.pi**2), abs=1e-10)
        r = optimize.minimize_scalar(lambda x: -d.f_tau2(x), bounds=(-1.5, -0.1), method="bounded",
                                     options={"xatol": 1e-9})
        assert r.x == pytest.approx(-0.605, abs=5e-3)

    def test_chi2_is_shift(self):
        assert d.f_chi2(1.0) == d.f_tau2(0.0)
        assert d.f_chi2(-3.5) == 0.0

    @pytest.mark.parametrize("which,density,pts", [("rho", d.f_rho, [0.0]), ("tau2", d.f_tau2, [-2.0, 0.0]),
                                                   ("chi2", d.f_chi2, [-1.0, 1.0])])
    def test_moments_by_quadrature(self, which, density, pts):
        lo, hi = d.SUPPORT[which]
        want = d.moments(which, 8).values
        for n, w in enumerate(want):
            got, _ = sint.quad(lambda x: x**n * density(x), lo, hi, points=pts, epsabs=1e-11, limit=200)
            assert got == pytest.approx(w, rel=1e-7, abs=1e-9)

    def test_nu_density_point(self):
        assert d.nu_density((0, Fraction(-4, 3))) == pytest.approx(8 / (3 * math.sqrt(3) * math.pi**2), abs=1e-15)
        assert d.nu_density((0, 1)) == 0.0

    def test_curve_mass(self):
        for which in ("tau_g1", "tau_g2", "rho", "chi2"):
            lo, hi = d.SUPPORT[which]
            c = d.density_curve(which, np.linspace(lo, hi, 2001))
            assert c.trapezoid_mass() == pytest.approx(1.0, abs=2e-3)

    def test_generic_cdf(self):
        assert d.cdf("rho", 0.0) == pytest.approx(0.5, abs=1e-10)
        assert d.cdf("tau_g1", 1.0) == pytest.approx(0.5 + math.sqrt(3) / (4 * math.pi) + 1 / 6, abs=1e-10)


class TestMoments:
    def test_closed_sequences(self):
        assert d.moments("tau_g2", 12).even() == [1, 1, 3, 14, 84, 594, 4719]
        assert d.moments("rho", 8).even() == [1, 2, 10, 70, 588]
        assert d.moments("tau2", 8).values == [1, -1, 2, -4, 10, -25, 70, -196, 588]
        assert d.moments("chi2", 6).values == [1, 0, 1, 0, 3, 1, 15]
        assert d.moments("tau_g1", 6).even() == [1, 1, 2, 5]

    def test_g3_three_routes(self):
        exact = d.moments("tau_g3", 12, "exact").values
        assert exact[::2] == [1, 1, 3, 15, 104, 909, 9449]
        assert d.moments("tau_g3", 12, "series").values == exact
        assert d.moments("tau_g3", 10, "quadrature").values == exact[:11]

    @pytest.mark.parametrize("g", [1, 2])
    def test_exact_weyl_moments_match_closed_forms(self, g):
        which = f"tau_g{g}"
        closed = d.moments(which, 10).values
        assert [d.weyl_trace_moment_exact(g, k) for k in range(11)] == closed

    def test_mihailovs_against_quadrature(self):
        for n in range(7):
            got, _ = sint.quad(lambda x: x ** (2 * n) * d.f_tau_g2(x), -4, 4, points=[0.0], epsabs=1e-12)
            assert got == pytest.approx(d.mihailovs(n), rel=1e-9)

    def test_range(self):
        with pytest.raises(DomainError):
            d.moments("tau_g2", 61)
        with pytest.raises(DomainError):
            d.moments("nope", 2)
        with pytest.raises(DomainError):
            d.moments("tau_g3", 20, "quadrature")


class TestCharacteristicFunctions:
    @given(st.one_of(st.just(0.0), st.floats(1e-6, 30.0)))
    def test_semicircle_and_rho(self, t):
        base = 1.0 if t == 0 else special.j1(2 * t) / t
        assert d.charfn("tau_g1", t) == pytest.approx(base, abs=1e-13)
        assert d.charfn("rho", t) == pytest.approx(base**2, abs=1e-13)

    @given(st.floats(0.0, 12.0))
    def test_tau_g2_hypergeometric(self, t):
        assert d.charfn("tau_g2", t) == pytest.approx(d.hyp1f2_tau_g2(t), abs=1e-12)

    @pytest.mark.parametrize("which", ["tau_g1", "tau_g2", "tau_g3", "rho"])
    def test_series_coefficients_are_moments(self, which):
        coeffs = d.charfn_series_coeffs(which, 6)
        mom = d.moments(which, 10).values
        for n, c in enumerate(coeffs):
            assert c == Fraction((-1) ** n * mom[2 * n], math.factorial(2 * n))

    @pytest.mark.parametrize("which", ["tau_g1", "tau_g2", "tau_g3", "rho"])
    def test_series_and_bessel_overlap(self, which):
        for t in (0.4, 0.8, 1.2):
            assert d.charfn(which, t, "series") == pytest.approx(d.charfn(which, t, "bessel"), abs=1e-10)

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.5])
    def test_g3_against_quadrature(self, t):
        assert d.charfn("tau_g3", t) == pytest.approx(d.charfn("tau_g3", t, "quadrature"), abs=1e-8)

    def test_g3_transform_needs_the_corrected_coefficient(self):
        # the printed coefficient -2(3 + y^2) on J1 J2^2 / y^7 does not even give phi(0+) = 1
        y = 1.0
        a, b = special.jv(1, 2 * y), special.jv(2, 2 * y)
        printed = 24 * (-4 * a**3 / y**5 + 11 * a * a * b / y**6 - 2 * (3 + y * y) * a * b * b / y**7 + 5 * b**3 / y**6)
        quad = d.charfn("tau_g3", y, "quadrature")
        assert abs(printed - quad) > 1.0
        assert d.charfn("tau_g3", y) == pytest.approx(quad, abs=1e-10)

    @pytest.mark.parametrize("t", [0.5, 3.0, 7.5])
    def test_forward_fourier_transform(self, t):
        val, _ = sint.quad(d.f_tau_g2, 0, 4, weight="cos", wvar=t, epsabs=1e-13, limit=200)
        assert d.charfn("tau_g2", t) == pytest.approx(2 * val, abs=1e-9)

    def test_inverse_transform_with_tail(self):
        # (1/pi) int_0^T phi(t) cos(t x) dt; the neglected tail at x = 0 is 2 / (pi^2 T^2)
        big_t = 200.0
        val, _ = sint.quad(lambda t: d.charfn("tau_g2", t), 0, big_t, limit=2000, epsabs=1e-12)
        approx = val / math.pi + 2 / (math.pi**2 * big_t**2)
        assert approx == pytest.approx(d.f_tau_g2(0.0), abs=5e-7)

    def test_unknown(self):
        with pytest.raises(DomainError):
            d.charfn("tau2", 1.0)
        with pytest.raises(DomainError):
            d.charfn("tau_g2", 1.0, "nope")


class TestGenus3:
    def test_slice_and_reconstruction(self):
        for x in (0.0, 1.3, -2.7, 4.4):
            assert d.f_tau_slice(3, x) == pytest.approx(d.f_tau_g3_reconstruct(x), abs=2e-5)
        assert d.f_tau_slice(3, 0.0) == pytest.approx(0.396467, abs=5e-5)

    def test_slice_g2_reproduces_closed_form(self):
        for x in (0.0, 1.1, 3.3):
            assert d.f_tau_slice(2, x) == pytest.approx(d.f_tau_g2(x), abs=1e-10)

    def test_slice_against_sampled_histogram(self):
        s = weyl.sample(3, 200000, seed=9)
        h, edges = np.histogram(s.trace, bins=12, range=(-6, 6))
        mids = 0.5 * (edges[1:] + edges[:-1])
        est = h / (len(s) * (edges[1] - edges[0]))
        exact = np.array([sint.quad(lambda x: d.f_tau_slice(3, x, 1e-7), a, b, epsabs=1e-7)[0]
                          for a, b in zip(edges[:-1], edges[1:])]) / (edges[1] - edges[0])
        assert np.max(np.abs(est - exact)) < 0.01
        assert len(mids) == 12

    def test_slice_mass(self):
        mass, _ = sint.quad(lambda x: d.f_tau_slice(3, x, 1e-8), -6, 6, epsabs=1e-6, limit=100)
        assert mass == pytest.approx(1.0, abs=1e-5)

    def test_domain(self):
        assert d.f_tau_slice(3, 6.0) == 0.0
        with pytest.raises(DomainError):
            d.f_tau_slice(4, 0.0)
        with pytest.raises(DomainError):
            d.f_tau_g3_reconstruct(0.0, order=61)
