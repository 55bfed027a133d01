import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_genlaguerre

from ionquench.numerics import (
    coupling_f,
    coupling_logabs_sequence,
    laguerre_assoc,
    laguerre_logabs_sequence,
    lncosh,
    lnsinh,
    log_sum_exp,
    sqrt_shift,
)


def laguerre_sum_exact(n: int, m: int, x: Fraction) -> Fraction:
    """Independent oracle: the explicit finite sum in exact rational arithmetic."""
    total = Fraction(0)
    for k in range(n + 1):
        coeff = Fraction(
            (-1) ** k * math.factorial(n + m),
            math.factorial(m + k) * math.factorial(n - k) * math.factorial(k),
        )
        total += coeff * x**k
    return total


class TestLaguerre:
    def test_order_zero_is_one(self):
        for m in (0, 1, 5):
            for x in (0.0, 0.3, 7.0):
                assert laguerre_assoc(0, m, x) == 1.0

    def test_value_at_zero_is_binomial(self):
        for n in range(0, 15):
            for m in range(0, 6):
                assert laguerre_assoc(n, m, 0.0) == pytest.approx(math.comb(n + m, m), rel=1e-13)

    def test_frozen_point(self):
        # Exact-rational oracle gives 3 - 6 + 2 = -1.
        assert laguerre_sum_exact(2, 1, Fraction(2)) == -1
        assert laguerre_assoc(2, 1, 2.0) == pytest.approx(-1.0, rel=1e-14)

    def test_recurrence_matches_explicit_sum(self):
        for n in range(13):
            for m in range(7):
                for x in (0.0, 0.25, 1.0, 2.25, 9.0):
                    ref = float(laguerre_sum_exact(n, m, Fraction(x)))
                    got = laguerre_assoc(n, m, x)
                    assert got == pytest.approx(ref, rel=1e-10, abs=1e-10 * max(1.0, abs(ref)))

    def test_matches_scipy(self):
        for n in (3, 17, 40):
            for m in (0, 2, 5):
                for x in (0.04, 1.7, 12.25):
                    assert laguerre_assoc(n, m, x) == pytest.approx(
                        float(eval_genlaguerre(n, m, x)), rel=1e-9, abs=1e-9
                    )

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            laguerre_assoc(3000, 0, 2500.0)

    def test_log_sequence_tracks_overflowing_values(self):
        signs, logabs = laguerre_logabs_sequence(3000, 0, 2500.0)
        assert np.isfinite(logabs[3000])
        # Moderate entries agree with the linear recurrence.
        for n in (1, 10, 60):
            ref = laguerre_assoc(n, 0, 2500.0)
            assert signs[n] == (1 if ref > 0 else -1)
            assert logabs[n] == pytest.approx(math.log(abs(ref)), rel=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            laguerre_assoc(-1, 0, 1.0)
        with pytest.raises(ValueError):
            laguerre_assoc(2, 0, -1.0)


class TestCoupling:
    def test_carrier_at_zero_eta_is_unity(self):
        for n in (0, 4, 33):
            val = coupling_f(n, 0, 0.0)
            assert val.log_mag == 0.0 and val.sign == 1 and val.as_complex() == 1.0

    def test_ground_level_magnitude(self):
        # |f_0^m| = eta^m e^(-eta^2/2)/sqrt(m!) since the polynomial factor is 1.
        for m in (0, 1, 3):
            for eta in (0.3, 1.2):
                expected = eta**m * math.exp(-eta * eta / 2) / math.sqrt(math.factorial(m))
                assert coupling_f(0, m, eta).magnitude == pytest.approx(expected, rel=1e-13)

    def test_large_eta_exponentially_small(self):
        for n in (0, 2, 7):
            for m in (0, 1, 2):
                assert coupling_f(n, m, 50.0).log_mag < -1000.0

    def test_zero_eta_sideband_is_exact_zero(self):
        val = coupling_f(3, 2, 0.0)
        assert val.log_mag == -math.inf and val.sign == 0 and val.magnitude == 0.0

    def test_reconstruction_against_direct_evaluation(self):
        worst = 0.0
        for m in range(5):
            for eta in (0.1, 0.5, 1.0, 2.0, 3.5):
                for n in range(31):
                    direct = (
                        eta**m
                        * math.sqrt(math.factorial(n) / math.factorial(n + m))
                        * math.exp(-eta * eta / 2)
                        * laguerre_assoc(n, m, eta * eta)
                    )
                    got = coupling_f(n, m, eta)
                    recon = got.sign * got.magnitude
                    if direct != 0.0:
                        worst = max(worst, abs(recon - direct) / abs(direct))
        assert worst <= 1e-12

    def test_phase_is_power_of_i(self):
        assert coupling_f(1, 1, 0.4).as_complex().real == pytest.approx(0.0, abs=1e-30)
        assert coupling_f(1, 2, 0.4).as_complex().imag == pytest.approx(0.0, abs=1e-30)

    def test_magnitude_decays_with_eta_for_fixed_indices(self):
        mags = [coupling_f(2, 1, eta).magnitude for eta in (2.0, 4.0, 8.0, 16.0)]
        assert all(a > b for a, b in zip(mags, mags[1:]))

    def test_carrier_tends_to_one_at_small_eta(self):
        assert coupling_f(12, 0, 1e-7).magnitude == pytest.approx(1.0, abs=1e-12)

    def test_sequence_matches_pointwise(self):
        signs, logs = coupling_logabs_sequence(25, 2, 1.3)
        for n in (0, 9, 25):
            single = coupling_f(n, 2, 1.3)
            assert signs[n] == single.sign
            assert logs[n] == pytest.approx(single.log_mag, rel=1e-14, abs=1e-14)


class TestLncosh:
    def test_zero(self):
        assert lncosh(0.0) == 0.0

    def test_asymptotic(self):
        assert lncosh(1e3) == pytest.approx(1e3 - math.log(2.0), rel=1e-15)
        assert lncosh(1e308) == pytest.approx(1e308 - math.log(2.0), rel=1e-15)

    def test_reference_point(self):
        assert lncosh(1.0) == pytest.approx(0.4337808304830272, rel=1e-14)
        assert lncosh(1.0) == pytest.approx(math.log(math.cosh(1.0)), rel=1e-15)

    def test_even(self):
        assert lncosh(-2.7) == lncosh(2.7)

    def test_lnsinh_small_and_large(self):
        assert lnsinh(0.0) == -math.inf
        assert lnsinh(1e-200) == pytest.approx(math.log(1e-200), rel=1e-14)
        assert lnsinh(900.0) == pytest.approx(900.0 - math.log(2.0), rel=1e-15)
        assert lnsinh(1.3) == pytest.approx(math.log(math.sinh(1.3)), rel=1e-14)


class TestLogSumExp:
    def test_pair_identity(self):
        assert log_sum_exp([math.log(2.0), math.log(3.0)]) == pytest.approx(math.log(5.0), rel=1e-15)

    def test_neg_inf_passthrough(self):
        assert log_sum_exp([-math.inf, 1.25]) == 1.25
        assert log_sum_exp([-math.inf, -math.inf]) == -math.inf
        assert log_sum_exp([]) == -math.inf

    def test_three_zeros(self):
        assert log_sum_exp([0.0, 0.0, 0.0]) == pytest.approx(math.log(3.0), rel=1e-15)

    def test_pos_inf_rejected(self):
        with pytest.raises(ValueError):
            log_sum_exp([0.0, math.inf])

    def test_deterministic_repeat(self):
        terms = list(np.random.default_rng(3).normal(scale=30.0, size=200))
        assert log_sum_exp(terms) == log_sum_exp(terms)

    @given(st.lists(st.floats(min_value=-500.0, max_value=500.0), min_size=1, max_size=40), st.randoms())
    def test_permutation_invariance(self, terms, rnd):
        a = log_sum_exp(terms)
        shuffled = list(terms)
        rnd.shuffle(shuffled)
        b = log_sum_exp(shuffled)
        assert b == pytest.approx(a, rel=1e-13, abs=1e-13)


class TestSqrtShift:
    def test_zero_coupling(self):
        assert sqrt_shift(5.0, 0.0, 3.0) == 2.0

    def test_first_order_form(self):
        w = 1e9
        u = 1.0
        assert sqrt_shift(w, u, w) == pytest.approx(u * u / (2 * w), rel=1e-9)

    def test_cancellation_regression(self):
        # Naive evaluation loses the entire signal at the shared-drive scale.
        w = 822.0 * math.pi * 1e12
        u = math.pi * 1e6
        naive = math.sqrt(w * w + u * u) - w
        safe = sqrt_shift(w, u, w)
        assert naive == 0.0
        assert safe == pytest.approx(1.9109444364901419e-3, rel=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            sqrt_shift(-1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            sqrt_shift(1.0, -1.0, 0.0)

    @settings(deadline=None, max_examples=60)
    @given(
        st.floats(min_value=1e-3, max_value=1e15),
        st.floats(min_value=0.0, max_value=1e12),
        st.floats(min_value=1e-3, max_value=1e15),
    )
    def test_matches_extended_precision(self, w, u, w0):
        got = sqrt_shift(w, u, w0)
        with mp.workdps(50):
            ref = float(mp.sqrt(mp.mpf(w) ** 2 + mp.mpf(u) ** 2) - mp.mpf(w0))
        # Near-exact cancellation of sqrt(w^2+u^2) against w0 leaves only an
        # absolute-accuracy guarantee at the scale of the inputs.
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-12 * (w + u + abs(w0)))
