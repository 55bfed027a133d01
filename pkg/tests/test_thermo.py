import math

import numpy as np
import pytest

from ionquench.numerics import coupling_f, log_sum_exp, sqrt_shift
from ionquench.params import Branch, QuenchSpec, ThermalSpec, TrapIonConfig, reduce, reduced_from_ratios
from ionquench.spectra import dense_hamiltonians
from ionquench.thermo import (
    TruncationError,
    TruncationPolicy,
    divergence_predicate,
    divergence_predicate_reduced,
    ln_partition_final,
    ln_partition_initial,
    low_temperature_limit,
    nonequilibrium_lag,
    nu_to_zero_limit,
    phi,
    phi_reduced,
    small_eta_coupling_sq,
    small_eta_coupling_sq_leading,
)
from conftest import FIG1, branch_for, desk_reduced, fig1_reduced

FIG4_LEFT = dict(mass=7e-26, nu=1.2e8, omega0=1.0e8, omega_rabi=0.5e9)
FIG4_RIGHT = dict(mass=7e-26, nu=1.2e8, omega0=1.0e8, omega_rabi=1.0e9)


class TestPartitionInitial:
    def test_degenerate_levels_high_occupation(self):
        # b_w0 = 0 with nbar = 1: Z = 4 and the shift vanishes.
        rp = reduced_from_ratios(0.0, 0.0, 0.0, 0, Branch.CARRIER, nbar=1.0)
        part = ln_partition_initial(rp)
        assert part.shift_reference == 0.0
        assert part.shifted_log == pytest.approx(math.log(4.0), rel=1e-14)

    def test_fig1_shifted_value(self):
        # The electronic excited weight underflows; only log(nbar + 1) remains.
        rp = fig1_reduced(0, Branch.CARRIER, 0.0)
        assert ln_partition_initial(rp).shifted_log == pytest.approx(math.log(1.38), rel=1e-13)

    def test_high_temperature_form(self):
        rp = reduced_from_ratios(2.0, 0.0, 0.0, 0, Branch.CARRIER, nbar=1e9)
        got = ln_partition_initial(rp).shifted_log
        expected = math.log(2.0 * (rp.nbar + 1.0) * math.cosh(rp.b_w0 / 2)) - rp.b_w0 / 2
        assert got == pytest.approx(expected, rel=1e-12)


class TestPartitionFinal:
    def test_carrier_zero_eta_closed_form(self):
        rp = fig1_reduced(0, Branch.CARRIER, 0.0)
        got = ln_partition_final(rp).shifted_log
        # All couplings equal 1, the motional sum is geometric; the shifted
        # log-cosh needs the cancellation-safe root difference.
        x = 0.5 * math.hypot(rp.b_w0, rp.b_om)
        expected = rp.ln_nbar_plus_1 + 0.5 * sqrt_shift(rp.b_w0, rp.b_om, rp.b_w0) + math.log1p(math.exp(-2 * x))
        assert got == pytest.approx(expected, rel=1e-13)

    def test_no_quench_equals_initial(self):
        for m, preferred in ((0, Branch.CARRIER), (1, Branch.JC), (3, Branch.AJC)):
            branch = branch_for(m, preferred)
            rp = desk_reduced(m, branch, 0.9, r_om=0.0)
            zi = ln_partition_initial(rp).shifted_log
            zf = ln_partition_final(rp).shifted_log
            assert zf == pytest.approx(zi, abs=1e-12)

    def test_large_eta_collapses_to_initial(self):
        for m, preferred in ((0, Branch.CARRIER), (1, Branch.JC), (2, Branch.AJC)):
            branch = branch_for(m, preferred)
            rp = fig1_reduced(m, branch, 50.0)
            zi = ln_partition_initial(rp).shifted_log
            zf = ln_partition_final(rp).shifted_log
            assert zf == pytest.approx(zi, rel=1e-12)

    def test_dense_oracle_desk_scale(self):
        for m in (0, 1, 2):
            for preferred in (Branch.JC, Branch.AJC):
                branch = branch_for(m, preferred)
                rp = desk_reduced(m, branch, 0.8)
                dense = dense_hamiltonians(rp, QuenchSpec(m, branch), 70)
                evals = np.linalg.eigvalsh(dense.h_final_sideband)
                ref = log_sum_exp(-rp.b_nu * evals) - 0.5 * rp.b_w0
                got = ln_partition_final(rp).shifted_log
                assert got == pytest.approx(ref, rel=1e-8, abs=1e-8)

    def test_direct_assembly_agrees(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            m = int(rng.integers(0, 3))
            branch = branch_for(m, Branch.JC if rng.integers(0, 2) else Branch.AJC)
            rp = desk_reduced(m, branch, float(rng.uniform(0, 2.5)), nbar=float(rng.uniform(0.05, 3.0)))
            a = ln_partition_final(rp, assembly="excess").shifted_log
            b = ln_partition_final(rp, assembly="direct").shifted_log
            assert a == pytest.approx(b, rel=1e-12)

    def test_pinned_term_count_respected(self):
        rp = fig1_reduced(1, Branch.AJC, 0.5)
        part = ln_partition_final(rp, policy=TruncationPolicy(n_pinned=40))
        assert part.truncation.n_used == 40
        assert part.truncation.converged

    def test_converged_flag_implies_tail_bound(self):
        # Whenever the report claims convergence, the recorded tail bound is
        # actually below the policy tolerance.
        for rp in (
            fig1_reduced(1, Branch.AJC, 0.5),
            fig1_reduced(2, Branch.JC, 2.0, nbar=1e6),
            desk_reduced(0, Branch.CARRIER, 0.8),
        ):
            part = ln_partition_final(rp)
            assert part.truncation.converged
            assert part.truncation.tail_bound_log <= math.log(1e-12)

    def test_nonconvergent_adaptive_raises(self):
        rp = reduced_from_ratios(10.0, 1e4, 0.5, 0, Branch.CARRIER, nbar=1e8)
        with pytest.raises(TruncationError) as err:
            ln_partition_final(rp, policy=TruncationPolicy(n_cap=1000))
        assert not err.value.report.converged
        # The policy can downgrade the error to a flagged report.
        part = ln_partition_final(rp, policy=TruncationPolicy(n_cap=1000, error_on_nonconverged=False))
        assert not part.truncation.converged


class TestLag:
    def test_zero_rabi_is_exactly_zero(self):
        rp = desk_reduced(1, Branch.JC, 0.7, r_om=0.0)
        assert nonequilibrium_lag(rp).value == 0.0

    def test_carrier_closed_form_fig1(self):
        rp = fig1_reduced(0, Branch.CARRIER, 0.0)
        got = nonequilibrium_lag(rp).value
        closed = 0.5 * sqrt_shift(rp.b_w0, rp.b_om, rp.b_w0)
        assert got == pytest.approx(closed, rel=1e-10)
        # 60-digit reference value; same order as the displayed 1.5e-7 plane.
        assert got == pytest.approx(2.4644829826440320e-07, rel=1e-12)

    def test_high_temperature_reversible(self):
        for m, preferred in ((0, Branch.CARRIER), (1, Branch.JC), (2, Branch.AJC)):
            branch = branch_for(m, preferred)
            rp = fig1_reduced(m, branch, 0.5, nbar=1e6)
            assert nonequilibrium_lag(rp).value <= 1e-6

    def test_jc_small_eta_reversible(self):
        for m in (1, 2):
            rp = fig1_reduced(m, Branch.JC, 1e-6)
            assert nonequilibrium_lag(rp).value <= 1e-8

    def test_nonnegative_on_random_grid(self):
        rng = np.random.default_rng(7)
        policy = TruncationPolicy(n_pinned=48)
        for _ in range(60):
            m = int(rng.integers(0, 4))
            branch = branch_for(m, Branch.JC if rng.integers(0, 2) else Branch.AJC)
            rp = fig1_reduced(m, branch, float(rng.uniform(0, 3.5)), nbar=float(rng.uniform(0.01, 4.0)))
            assert nonequilibrium_lag(rp, policy=policy).value >= -1e-12

    def test_monotone_in_rabi(self):
        base = fig1_reduced(0, Branch.CARRIER, 0.5)
        for m, preferred in ((0, Branch.CARRIER), (1, Branch.JC), (1, Branch.AJC), (2, Branch.AJC)):
            branch = branch_for(m, preferred)
            prev = -1.0
            for r_om in np.linspace(0.0, 2500.0, 11):
                rp = reduced_from_ratios(base.r_w0, float(r_om), 0.5, m, branch, b_nu=base.b_nu)
                val = nonequilibrium_lag(rp, policy=TruncationPolicy(n_pinned=40)).value
                assert val >= prev - 1e-18
                prev = val

    def test_ajc_exceeds_jc_in_preset_regime(self):
        for m in (1, 2):
            for eta in (0.3, 0.8, 1.5, 2.8):
                jc = nonequilibrium_lag(fig1_reduced(m, Branch.JC, eta), policy=TruncationPolicy(n_pinned=40))
                ajc = nonequilibrium_lag(fig1_reduced(m, Branch.AJC, eta), policy=TruncationPolicy(n_pinned=40))
                assert ajc.value > jc.value

    def test_ajc_cold_growth_rate(self):
        # On a beta-doubling ladder the lag grows without saturating and the
        # slope per unit b_nu approaches |Phi_min| / (2 nu).
        m, eta = 1, 0.5
        base = fig1_reduced(m, Branch.AJC, eta)
        phi_min = min(
            phi_reduced(n, m, Branch.AJC, base.r_w0, base.r_om, eta) for n in range(40)
        )
        assert phi_min < 0
        b_nus = [base.b_nu * 2**k for k in range(6, 10)]
        lags = []
        for b in b_nus:
            rp = reduced_from_ratios(base.r_w0, base.r_om, eta, m, Branch.AJC, b_nu=b)
            lags.append(nonequilibrium_lag(rp).value)
        assert all(b > a for a, b in zip(lags, lags[1:]))
        slope = (lags[-1] - lags[-2]) / (b_nus[-1] - b_nus[-2])
        assert slope == pytest.approx(abs(phi_min) / 2.0, rel=0.05)

    def test_divergence_flag_attached(self):
        res = nonequilibrium_lag(fig1_reduced(1, Branch.AJC, 0.5), policy=TruncationPolicy(n_pinned=40))
        assert res.regime_flags["divergence_predicted"] is True
        res = nonequilibrium_lag(fig1_reduced(1, Branch.JC, 0.5), policy=TruncationPolicy(n_pinned=40))
        assert res.regime_flags["divergence_predicted"] is False


class TestPhi:
    def test_zero_rabi_values(self):
        assert phi(2, 1, Branch.JC, 10.0, 1e4, 0.0, 0.5).phi == pytest.approx(2 * 10.0 * 3, rel=1e-14)
        assert phi(2, 1, Branch.AJC, 10.0, 1e4, 0.0, 0.5).phi == pytest.approx(2 * 10.0 * 2, rel=1e-14)
        assert phi(0, 1, Branch.AJC, 10.0, 1e4, 0.0, 0.5).phi == pytest.approx(0.0, abs=1e-14)

    def test_fig4_left_sign_pattern(self):
        # Recomputed: the first coupled block of m = 1 is pushed negative,
        # every m = 2 block stays nonnegative.
        assert phi(0, 1, Branch.JC, FIG4_LEFT["nu"], FIG4_LEFT["omega0"], FIG4_LEFT["omega_rabi"], 1.5).phi < 0
        for n in range(60):
            assert phi(n, 2, Branch.JC, FIG4_LEFT["nu"], FIG4_LEFT["omega0"], FIG4_LEFT["omega_rabi"], 1.5).phi >= 0

    def test_fig4_right_sign_pattern(self):
        for m in (1, 2):
            assert phi(0, m, Branch.JC, FIG4_RIGHT["nu"], FIG4_RIGHT["omega0"], FIG4_RIGHT["omega_rabi"], 1.0).phi < 0

    def test_sign_reliable_at_experimental_scale(self):
        # The value is ~1e-12 of omega0 yet must come out with a stable sign.
        cfg = dict(FIG1)
        value = phi(0, 1, Branch.AJC, cfg["nu"], cfg["omega0"], cfg["omega_rabi"], 0.5)
        assert value.phi < 0
        naive = cfg["nu"] * (2 * 0 + 1) + cfg["omega0"] - math.hypot(
            cfg["omega0"] + cfg["nu"], cfg["omega_rabi"] * coupling_f(0, 1, 0.5).magnitude
        )
        # The naive expression cannot even resolve the magnitude.
        assert abs(value.phi) < 1e-2 * cfg["omega0"] * 1e-9


class TestDivergencePredicate:
    def test_ajc_always_diverges_with_live_coupling(self):
        for m in (1, 2, 5):
            for cfg in (FIG1, FIG4_RIGHT):
                c = TrapIonConfig(**cfg)
                assert divergence_predicate(m, Branch.AJC, c, 0.5).diverges

    def test_carrier_always_diverges(self):
        assert divergence_predicate(0, Branch.CARRIER, TrapIonConfig(**FIG1), 0.0).diverges

    def test_dead_coupling_does_not_diverge(self):
        silent = TrapIonConfig(**{**FIG1, "omega_rabi": 0.0})
        assert not divergence_predicate(1, Branch.AJC, silent, 0.5).diverges
        # AJC sideband with eta = 0 has no coupling at all.
        assert not divergence_predicate(2, Branch.AJC, TrapIonConfig(**FIG1), 0.0).diverges

    def test_fig1_jc_finite(self):
        c = TrapIonConfig(**FIG1)
        for m in (1, 2):
            report = divergence_predicate(m, Branch.JC, c, 0.5)
            assert not report.diverges
            assert report.witnesses == []

    def test_fig4_witnesses(self):
        left = TrapIonConfig(**FIG4_LEFT)
        right = TrapIonConfig(**FIG4_RIGHT)
        assert divergence_predicate(1, Branch.JC, left, 1.5).witnesses == [0]
        assert divergence_predicate(2, Branch.JC, left, 1.5).witnesses == []
        assert divergence_predicate(1, Branch.JC, right, 1.0).witnesses == [0]
        assert divergence_predicate(2, Branch.JC, right, 1.0).witnesses == [0]

    def test_reduced_variant_consistent(self):
        c = TrapIonConfig(**FIG4_RIGHT)
        rp = reduce(c, QuenchSpec(2, Branch.JC), ThermalSpec(nbar=0.5), eta_override=1.0)
        assert divergence_predicate_reduced(rp).diverges == divergence_predicate(2, Branch.JC, c, 1.0).diverges


class TestLowTemperatureLimit:
    def test_all_positive_gives_zero(self):
        limit = low_temperature_limit(1, Branch.JC, TrapIonConfig(**FIG1), 0.5)
        assert limit.finite and limit.limit_value == 0.0 and limit.zero_count == 0

    def test_constructed_zero_crossing_gives_ln2(self):
        # Tune the Rabi frequency so Phi_1^1 sits exactly on its zero.
        nu, omega0, eta, n, m = 10.0, 100.0, 0.8, 1, 2
        f = coupling_f(n, m, eta).magnitude
        target = nu * (2 * n + m) + omega0
        omega_l = omega0 - m * nu
        omega_rabi = math.sqrt(target**2 - omega_l**2) / f
        cfg = TrapIonConfig(mass=1e-25, nu=nu, omega0=omega0, omega_rabi=omega_rabi)
        limit = low_temperature_limit(m, Branch.JC, cfg, eta)
        assert limit.finite
        assert limit.zero_count == 1
        assert limit.limit_value == pytest.approx(math.log(2.0), rel=1e-12)

    def test_ajc_never_finite(self):
        assert not low_temperature_limit(1, Branch.AJC, TrapIonConfig(**FIG1), 0.5).finite
        assert not low_temperature_limit(0, Branch.CARRIER, TrapIonConfig(**FIG1), 0.5).finite

    def test_jc_negative_phi_not_finite(self):
        assert not low_temperature_limit(1, Branch.JC, TrapIonConfig(**FIG4_RIGHT), 1.0).finite

    def test_dead_coupling_is_trivially_finite(self):
        silent = TrapIonConfig(**{**FIG1, "omega_rabi": 0.0})
        limit = low_temperature_limit(1, Branch.AJC, silent, 0.5)
        assert limit.finite and limit.limit_value == 0.0


class TestSmallEtaExpansion:
    def test_carrier_form(self):
        for n in (0, 2, 5):
            eta = 0.01
            assert small_eta_coupling_sq_leading(n, 0, eta) == pytest.approx(1 - (2 * n + 1) * eta**2, rel=1e-14)

    def test_first_sideband_form(self):
        for n in (0, 3):
            eta = 0.02
            assert small_eta_coupling_sq_leading(n, 1, eta) == pytest.approx((n + 1) * eta**2, rel=1e-14)
        assert small_eta_coupling_sq_leading(4, 2, 0.02) == 0.0

    def test_expansion_matches_exact_coupling(self):
        n, m, eta = 2, 1, 1e-3
        exact = coupling_f(n, m, eta).magnitude ** 2
        approx = small_eta_coupling_sq(n, m, eta)
        assert approx == pytest.approx(exact, rel=1e-5)

    def test_second_order_beats_leading_order(self):
        n, m, eta = 3, 1, 0.05
        exact = coupling_f(n, m, eta).magnitude ** 2
        err2 = abs(small_eta_coupling_sq(n, m, eta) - exact)
        err1 = abs(small_eta_coupling_sq_leading(n, m, eta) - exact)
        assert err2 < err1


class TestNuToZeroLimit:
    def test_rejects_dead_coupling(self):
        rp = desk_reduced(1, Branch.JC, 0.5, r_om=0.0)
        with pytest.raises(ValueError):
            nu_to_zero_limit(rp)
        with pytest.raises(ValueError):
            nu_to_zero_limit(desk_reduced(2, Branch.AJC, 0.0))

    def test_carrier_zero_eta_exact(self):
        # With eta = 0 every mode is identical: the per-mode ratio equals the
        # carrier closed form at any term count, which is also the lag value
        # the generic path returns at every trap frequency.
        rp = fig1_reduced(0, Branch.CARRIER, 0.0)
        limit = nu_to_zero_limit(rp)
        closed = 0.5 * sqrt_shift(rp.b_w0, rp.b_om, rp.b_w0)
        assert limit.value == pytest.approx(closed, rel=1e-12)
        assert limit.truncation.converged

    def test_generic_lag_approaches_limit_as_nu_shrinks(self):
        # Shrink nu tenfold twice at fixed beta and eta = 0; the generic lag
        # stays within 1% of the limit operation's value (here: exactly on it).
        beta = math.log1p(1 / 0.38) / (1.054571817e-34 * FIG1["nu"])
        limit_val = nu_to_zero_limit(fig1_reduced(0, Branch.CARRIER, 0.0)).value
        for factor in (1.0, 0.1, 0.01):
            cfg = TrapIonConfig(**{**FIG1, "nu": FIG1["nu"] * factor})
            rp = reduce(cfg, QuenchSpec(0, Branch.CARRIER), ThermalSpec(beta=beta), eta_override=0.0)
            lag = nonequilibrium_lag(rp).value
            assert lag == pytest.approx(limit_val, rel=1e-2)

    def test_finite_at_moderate_eta(self):
        rp = fig1_reduced(0, Branch.CARRIER, 1.0)
        limit = nu_to_zero_limit(rp, policy=TruncationPolicy(n_pinned=256))
        assert math.isfinite(limit.value)
        assert limit.value > 0.0
        assert limit.truncation.converged
