import math

import numpy as np
import pytest

from catparity import measurement, zeno
from catparity.errors import DispersiveRegimeError
from catparity.rwa import ModeFrequencies, angular

EJ = angular(300e6)
FREQS = ModeFrequencies(angular(9.10e9), angular(7.5e9))
READOUT = measurement.ReadoutParams(phi_c=0.1, n_c=1.0)


class TestDispersiveSingle:
    def test_reference_point(self):
        # n_c phi_c^2 e^{-phi_c^2/2} / sqrt(8 pi) at phi_a = 2 alpha
        rates = measurement.dispersive_rates_single(EJ, 4.0, 2.0, READOUT)
        expected = 0.01 * math.exp(-0.005) * EJ / math.sqrt(8 * math.pi)
        assert rates.gamma_m == pytest.approx(expected, rel=1e-12)
        assert rates.gamma_m / EJ == pytest.approx(1.985e-3, rel=1e-3)

    def test_megahertz_scale(self):
        rates = measurement.dispersive_rates_single(EJ, 4.0, 2.0, READOUT)
        assert 0.1e6 <= rates.gamma_m / (2 * math.pi) <= 1.5e6

    def test_quadratic_in_phi_c(self):
        small = measurement.dispersive_rates_single(
            EJ, 4.0, 2.0, measurement.ReadoutParams(1e-3, 1.0)
        )
        tiny = measurement.dispersive_rates_single(
            EJ, 4.0, 2.0, measurement.ReadoutParams(5e-4, 1.0)
        )
        assert small.gamma_m / tiny.gamma_m == pytest.approx(4.0, rel=1e-5)

    def test_guard(self):
        with pytest.raises(DispersiveRegimeError):
            measurement.dispersive_rates_single(
                EJ, 4.0, 2.0, measurement.ReadoutParams(1.0, 1.0)
            )

    def test_optimal_linewidth_is_chi(self):
        rates = measurement.dispersive_rates_single(EJ, 4.0, 2.0, READOUT)
        assert rates.kappa_c_optimal == rates.chi

    def test_argmax_near_stationary_point(self):
        grid = np.arange(3.0, 5.01, 0.02)
        gm = [
            measurement.dispersive_rates_single(EJ, float(p), 2.0, READOUT).gamma_m
            for p in grid
        ]
        # stationary point of exp(-(p - 4)^2/2)/sqrt(p): p + 1/(2p) = 4
        stationary = 2.0 + math.sqrt(4.0 - 0.5) / 1.0  # root of p^2 - 4p + 1/2
        assert abs(grid[int(np.argmax(gm))] - stationary) <= 0.2


class TestDispersiveJoint:
    def test_peak_reduction(self):
        rates = measurement.dispersive_rates_joint(EJ, 4.0, 4.0, 2.0, 2.0, READOUT)
        expected = 0.01 * math.exp(-0.005) * EJ / (2 * math.pi * math.sqrt(4 * 16))
        assert rates.gamma_m == pytest.approx(expected, rel=1e-12)

    def test_swap_symmetry(self):
        r1 = measurement.dispersive_rates_joint(EJ, 3.5, 4.5, 1.5, 2.5, READOUT)
        r2 = measurement.dispersive_rates_joint(EJ, 4.5, 3.5, 2.5, 1.5, READOUT)
        assert r1.gamma_m == pytest.approx(r2.gamma_m, rel=1e-12)

    def test_omega_ab_relation(self):
        # Omega_ab = Omega_a Omega_b / (2 E_J), exactly
        direct = measurement.omega_joint(EJ, 4.0, 4.4, 2.0, 2.2)
        via_singles = (
            zeno.omega_a(EJ, 4.0, 2.0) * zeno.omega_a(EJ, 4.4, 2.2) / (2.0 * EJ)
        )
        assert direct == pytest.approx(via_singles, rel=1e-12)
        rates = measurement.dispersive_rates_joint(EJ, 4.0, 4.4, 2.0, 2.2, READOUT)
        assert rates.omega_tilde == pytest.approx(
            math.exp(-0.005) * direct, rel=1e-12
        )


@pytest.fixture(scope="module")
def ratios():
    return measurement.dephasing_ratios_two_mode(
        EJ, 4.0, 4.0, 2.0, 2.0, FREQS, dim_a=30, dim_b=30
    )


class TestDephasingRatios:

    def test_even_subspace_ratio_order(self, ratios):
        assert 3e-4 <= ratios.plus_over_m <= 3e-3

    def test_odd_subspace_ratio_order(self, ratios):
        assert 1.5e-3 <= ratios.minus_over_m <= 1.5e-2

    def test_gamma_m_close_to_closed_form(self, ratios):
        # the matrix-element rate and 2 Omega_ab differ only by the
        # second-order shift and cat normalization corrections
        assert ratios.gamma_m == pytest.approx(ratios.two_omega_ab, rel=0.05)

    def test_first_order_only(self):
        r = measurement.dephasing_ratios_two_mode(
            EJ, 4.0, 4.0, 2.0, 2.0, FREQS, dim_a=30, dim_b=30,
            include_second_order=False,
        )
        # odd-subspace dephasing vanishes by the alpha = beta symmetry;
        # the even one keeps the exp(-phi^2/2)-small identity component
        assert r.gamma_phi_minus <= 1e-12 * EJ
        assert r.gamma_phi_plus <= 1e-4 * EJ

    def test_ratios_double_with_e_j(self):
        r1 = measurement.dephasing_ratios_two_mode(
            EJ, 4.0, 4.0, 2.0, 2.0, FREQS, dim_a=24, dim_b=24
        )
        r2 = measurement.dephasing_ratios_two_mode(
            2 * EJ, 4.0, 4.0, 2.0, 2.0, FREQS, dim_a=24, dim_b=24
        )
        assert r2.minus_over_m / r1.minus_over_m == pytest.approx(2.0, rel=0.02)

    def test_truncation_stable(self, ratios):
        wider = measurement.dephasing_ratios_two_mode(
            EJ, 4.0, 4.0, 2.0, 2.0, FREQS, dim_a=36, dim_b=36
        )
        assert wider.minus_over_m == pytest.approx(ratios.minus_over_m, rel=1e-6)
        assert wider.plus_over_m == pytest.approx(ratios.plus_over_m, rel=1e-4)
