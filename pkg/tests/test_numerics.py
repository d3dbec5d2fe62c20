import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta as beta_fn

from leaffun.numerics import (
    BracketError,
    QuadratureError,
    SecondOrderIVP,
    StepSizeError,
    invert_monotone,
    quad_singular,
    rk_integrate,
)

# Reference values, frozen from the Beta-function closed forms
# pi_n = B(1/2n, 1/2)/n, eta_n = B((n-1)/2n, 1/2)/2n, zeta_n = B(1/2n, 1/2 - 1/2n)/2n
PI2 = 2.6220575542921198
ETA2 = 1.3110287771460599
ZETA2 = 1.8540746773013719

# independently computed (high-precision quadrature inversion)
SLEAF2_AT_QUARTER = 0.64359425290558262   # argument PI2/4
CLEAFH2_AT_HALF = 1.2867372812145681      # argument 0.5


class TestQuadSingular:
    def test_arcsin_endpoint(self):
        # the plain one-argument integrand loses digits right next to the
        # singular endpoint; the error estimate must cover what remains
        val, err = quad_singular(lambda u: 1.0 / math.sqrt(1.0 - u * u), 0.0, 1.0)
        assert val == pytest.approx(math.pi / 2, abs=1e-7)
        assert abs(val - math.pi / 2) <= max(1e-12, err)

    def test_quartic_half_period(self):
        # plain integrand: limited by rounding next to the endpoint but the
        # reported estimate must still bound the realized error
        val, err = quad_singular(lambda u: 1.0 / math.sqrt(1.0 - u ** 4), 0.0, 1.0)
        assert abs(val - PI2 / 2) <= max(1e-12, err)
        assert val == pytest.approx(PI2 / 2, abs=1e-7)

        # distance-aware integrand: full precision
        def f(u, da, db):
            return 1.0 / math.sqrt(db * (1.0 + u) * (1.0 + u * u))

        val, _ = quad_singular(f, 0.0, 1.0)
        assert val == pytest.approx(PI2 / 2, abs=1e-13)
        assert val == pytest.approx(beta_fn(0.25, 0.5) / 4.0, abs=1e-13)

    def test_infinite_interval(self):
        val, _ = quad_singular(lambda u: (1.0 + u ** 4) ** -0.5, 0.0, math.inf)
        assert val == pytest.approx(ZETA2, abs=1e-11)
        assert val == pytest.approx(beta_fn(0.25, 0.25) / 4.0, abs=1e-11)

    def test_distance_aware_integrand(self):
        # (1-u)^(-1/2) integrates to 2; the three-argument form stays exact
        # arbitrarily close to the singular endpoint
        def f(u, da, db):
            return db ** -0.5

        val, _ = quad_singular(f, 0.0, 1.0)
        assert val == pytest.approx(2.0, abs=1e-13)

    def test_tol_halving_does_not_worsen(self):
        def f(u, da, db):
            return 1.0 / math.sqrt(db * (1.0 + u) * (1.0 + u * u))

        truth = PI2 / 2
        errs = []
        for tol in (1e-6, 1e-8, 1e-10, 1e-12):
            val, _ = quad_singular(f, 0.0, 1.0, tol=tol)
            errs.append(abs(val - truth))
        for coarse, fine in zip(errs, errs[1:]):
            assert fine <= max(coarse, 1e-14)

    def test_nonconvergence_reports_best_estimate(self):
        with pytest.raises(QuadratureError) as exc:
            quad_singular(lambda u: math.cos(100.0 / (u + 1e-3)), 0.0, 1.0,
                          tol=1e-15, max_level=5)
        assert math.isfinite(exc.value.err_est) or exc.value.err_est == math.inf
        assert exc.value.best_value == exc.value.best_value  # not NaN

    def test_rejects_bad_limits(self):
        with pytest.raises(ValueError):
            quad_singular(lambda u: u, 1.0, 0.0)
        with pytest.raises(ValueError):
            quad_singular(lambda u: u, 0.0, 1.0, tol=0.0)


class TestInvertMonotone:
    def test_identity(self):
        assert invert_monotone(lambda x: x, 0.5, 0.0, 1.0) == pytest.approx(0.5)

    def test_arcsleaf_target(self):
        def arcsl(x):
            if x == 0.0:
                return 0.0
            return quad_singular(lambda u: (1 - u ** 4) ** -0.5, 0.0, x, tol=1e-13)[0]

        root = invert_monotone(arcsl, PI2 / 4, 0.0, 0.9,
                               tol=1e-12, fprime=lambda x: (1 - x ** 4) ** -0.5)
        assert root == pytest.approx(SLEAF2_AT_QUARTER, abs=1e-10)

    def test_arccleafh_target(self):
        def arcclh(x):
            if x == 1.0:
                return 0.0
            return quad_singular(
                lambda u, da, db: math.expm1(4 * math.log1p(da)) ** -0.5,
                1.0, x, tol=1e-13)[0]

        root = invert_monotone(arcclh, 0.5, 1.0, 10.0,
                               tol=1e-12, fprime=lambda x: (x ** 4 - 1) ** -0.5)
        assert root == pytest.approx(CLEAFH2_AT_HALF, abs=1e-10)

    def test_bracket_violation(self):
        with pytest.raises(BracketError):
            invert_monotone(lambda x: x, 5.0, 0.0, 1.0)
        with pytest.raises(BracketError):
            invert_monotone(lambda x: x, 0.5, 1.0, 0.0)

    def test_vanishing_derivative_falls_back(self):
        # f'(0) = 0; Newton from the flat region must not diverge
        root = invert_monotone(lambda x: x ** 3, 0.0, -1.0, 2.0,
                               tol=1e-14, fprime=lambda x: 3 * x * x)
        assert abs(root) < 1e-4

    @given(st.floats(min_value=-0.99, max_value=0.99))
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, y):
        f = lambda x: x + 0.3 * math.sin(x)
        x = invert_monotone(f, y, -2.0, 2.0, tol=1e-12, fprime=lambda x: 1 + 0.3 * math.cos(x))
        assert f(x) == pytest.approx(y, abs=1e-12)

    def test_secant_mode_without_derivative(self):
        root = invert_monotone(lambda x: math.tan(x), 1.0, 0.0, 1.5, tol=1e-12)
        assert root == pytest.approx(math.atan(1.0), abs=1e-10)


class TestRkIntegrate:
    def test_harmonic_oscillator(self):
        ivp = SecondOrderIVP(lambda t, x, v: -x, x0=0.0, v0=1.0)
        wf = rk_integrate(ivp, math.pi, tol=1e-10)
        assert float(wf.at(math.pi)) == pytest.approx(0.0, abs=1e-8)
        ts = np.linspace(0, math.pi, 200)
        assert np.max(np.abs(wf.at(ts) - np.sin(ts))) < 1e-8

    def test_ten_periods_sin(self):
        ivp = SecondOrderIVP(lambda t, x, v: -x, x0=0.0, v0=1.0)
        t_end = 20 * math.pi
        wf = rk_integrate(ivp, t_end, tol=1e-10)
        assert np.max(np.abs(wf.x - np.sin(wf.t))) < 1e-8
        assert np.max(np.abs(wf.v - np.cos(wf.t))) < 1e-8

    def test_quartic_oscillator_quarter_period(self):
        # x'' = -2x^3 from (0, 1) crests at exactly 1 after a quarter period
        ivp = SecondOrderIVP(lambda t, x, v: -2.0 * x ** 3, x0=0.0, v0=1.0)
        wf = rk_integrate(ivp, PI2 / 2, tol=1e-10)
        assert float(wf.at(PI2 / 2)) == pytest.approx(1.0, abs=1e-8)

    def test_energy_conservation(self):
        ivp = SecondOrderIVP(lambda t, x, v: -2.0 * x ** 3, x0=0.0, v0=1.0)
        wf = rk_integrate(ivp, 10 * 2 * PI2, tol=1e-10)
        energy = 0.5 * wf.v ** 2 + 0.5 * wf.x ** 4
        assert np.max(np.abs(energy - 0.5)) < 1e-8

    def test_blowup_flag_and_location(self):
        # x'' = +2x^3 from (1, 0) reaches a pole at ETA2
        ivp = SecondOrderIVP(lambda t, x, v: 2.0 * x ** 3, x0=1.0, v0=0.0)
        wf = rk_integrate(ivp, 2.0, tol=1e-10, blowup_cap=1e6)
        assert wf.meta.blown_up
        assert wf.meta.blowup_time == pytest.approx(ETA2, abs=1e-5)
        assert np.all(np.isfinite(wf.x))
        assert np.all(np.diff(wf.t) > 0)

    def test_pole_without_cap_underflows_step(self):
        ivp = SecondOrderIVP(lambda t, x, v: 2.0 * x ** 3, x0=1.0, v0=0.0)
        with pytest.raises(StepSizeError) as exc:
            rk_integrate(ivp, 2.0, tol=1e-10, blowup_cap=1e306)
        assert exc.value.location == pytest.approx(ETA2, abs=1e-6)

    def test_dense_output_between_knots(self):
        ivp = SecondOrderIVP(lambda t, x, v: -x, x0=1.0, v0=0.0)
        wf = rk_integrate(ivp, 5.0, tol=1e-10)
        mid = 0.5 * (wf.t[:-1] + wf.t[1:])
        assert np.max(np.abs(wf.at(mid) - np.cos(mid))) < 1e-7
        with pytest.raises(ValueError):
            wf.at(5.0 + 1e-6)

    def test_meta_counters(self):
        ivp = SecondOrderIVP(lambda t, x, v: -x, x0=0.0, v0=1.0)
        wf = rk_integrate(ivp, 1.0, tol=1e-8)
        assert wf.meta.steps == len(wf.t) - 1
        assert wf.meta.rejected >= 0
        assert wf.meta.reason == "reached t_end"
        assert wf.samples[0] == (0.0, 0.0, 1.0)

    def test_rejects_bad_arguments(self):
        ivp = SecondOrderIVP(lambda t, x, v: -x, x0=0.0, v0=1.0)
        with pytest.raises(ValueError):
            rk_integrate(ivp, -1.0)
        with pytest.raises(ValueError):
            rk_integrate(ivp, 1.0, tol=-1e-9)
        with pytest.raises(ValueError):
            rk_integrate(ivp, 1.0, blowup_cap=0.0)
