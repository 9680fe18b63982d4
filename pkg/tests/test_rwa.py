import math

import numpy as np
import pytest

from catparity import rwa, specfun
from catparity.errors import NearResonanceError
from catparity.fock import FockSpace, displacement

EJ_DEFAULT = rwa.angular(300e6)
FREQS_DEFAULT = rwa.ModeFrequencies(rwa.angular(9.10e9), rwa.angular(7.5e9))


@pytest.fixture
def space():
    return FockSpace((40,))


class TestSingleMode:
    def test_entry_zero(self, space):
        params = rwa.JunctionParams(e_j=2.0, phi_a=1.3)
        h = rwa.h_rwa_single(params, space)
        assert h.diag[0].real == pytest.approx(-2.0 * math.exp(-0.5 * 1.3 ** 2), rel=1e-14)

    def test_matches_laguerre_kernel(self, space):
        params = rwa.JunctionParams(e_j=1.0, phi_a=3.0)
        h = rwa.h_rwa_single(params, space)
        lag = specfun.laguerre_all(39, 9.0)
        np.testing.assert_allclose(
            h.diag.real, -math.exp(-4.5) * lag, rtol=0, atol=0
        )

    def test_sign_alternation_around_mean_photon_number(self, space):
        # at phi_a = 4 the levels around n = 4 alternate in sign
        h = rwa.h_rwa_single(rwa.JunctionParams(e_j=1.0, phi_a=4.0), space)
        d = h.diag.real
        for n in range(2, 6):
            assert d[n] * d[n + 1] < 0

    def test_diagonal_by_construction(self, space):
        h = rwa.h_rwa_single(rwa.JunctionParams(e_j=1.0, phi_a=4.0), space)
        assert h.is_diagonal
        off = h.matrix - np.diag(np.diag(h.matrix))
        assert np.max(np.abs(off)) == 0.0

    def test_windowed_envelope_decays(self):
        # windows must span the Laguerre oscillation period to see the envelope
        phi = 2.0
        space = FockSpace((208,))
        h = rwa.h_rwa_single(rwa.JunctionParams(e_j=1.0, phi_a=phi), space)
        start = int(4 * phi * phi)
        tail = np.abs(h.diag.real[start:])
        window = 48
        maxima = [tail[i : i + window].max() for i in range(0, len(tail) - window + 1, window)]
        assert len(maxima) >= 3
        assert all(a > b for a, b in zip(maxima, maxima[1:]))


class TestTwoMode:
    def test_ground_entry(self):
        sa, sb = FockSpace((12,)), FockSpace((10,))
        params = rwa.JunctionParams(e_j=1.5, phi_a=2.0, phi_b=1.0)
        h = rwa.h_rwa_two_mode(params, sa, sb)
        assert h.diag[0].real == pytest.approx(-1.5 * math.exp(-0.5 * 5.0), rel=1e-14)

    def test_separability(self):
        sa, sb = FockSpace((12,)), FockSpace((10,))
        params = rwa.JunctionParams(e_j=1.0, phi_a=2.0, phi_b=1.0)
        h = rwa.h_rwa_two_mode(params, sa, sb).diag.real.reshape(12, 10)
        la = specfun.laguerre_all(11, 4.0)
        lb = specfun.laguerre_all(9, 1.0)
        pref = -math.exp(-2.5)
        np.testing.assert_allclose(h, pref * np.outer(la, lb), rtol=1e-13)

    def test_phi_b_zero_reduces_to_single(self):
        sa, sb = FockSpace((12,)), FockSpace((10,))
        params = rwa.JunctionParams(e_j=1.0, phi_a=2.0, phi_b=0.0)
        h2 = rwa.h_rwa_two_mode(params, sa, sb).diag.real.reshape(12, 10)
        h1 = rwa.h_rwa_single(params, sa).diag.real
        for nb in range(10):
            np.testing.assert_allclose(h2[:, nb], h1, rtol=1e-13)


class TestDressingOperator:
    def test_l0_matches_first_order_kernel(self, space):
        a0 = rwa.a_dressing_operator(0, 3.0, space)
        h = rwa.h_rwa_single(rwa.JunctionParams(e_j=1.0, phi_a=3.0), space)
        np.testing.assert_allclose(a0.diag.real, -h.diag.real, rtol=1e-13)

    def test_hand_value_n0_l2(self, space):
        phi = 1.7
        a2 = rwa.a_dressing_operator(2, phi, space)
        assert a2.diag[0].real == pytest.approx(
            phi ** 2 * math.exp(-0.5 * phi ** 2) / 2.0, rel=1e-13
        )

    def test_hermitian(self, space):
        a3 = rwa.a_dressing_operator(3, 2.2, space)
        assert a3.is_hermitian(1e-14)

    def test_overlaps_bounded_and_match_displacement(self):
        # |<n| D(i phi) |n+l>| computed through the matrix exponential
        phi, l = 1.9, 3
        big = FockSpace((60,))
        disp = displacement(big, 1j * phi).matrix
        d = rwa.scaled_ladder_overlaps(l, phi, 20)
        assert np.max(np.abs(d)) <= 1.0 + 1e-12
        for n in range(20):
            assert abs(disp[n, n + l]) == pytest.approx(abs(d[n]), abs=1e-10)


def hand_mode_vectors_l1(phi: float):
    """Independent 3-level evaluation of the two diagonal product shapes at l = 1."""
    x = phi * phi
    pref = phi * math.exp(-0.5 * x)
    lag1 = [1.0, 2.0 - x, 3.0 - 3.0 * x + 0.5 * x * x]  # L_n^{(1)}, n = 0..2
    a = [pref * lag1[n] / (n + 1) for n in range(3)]
    lowered = np.array([0.0, a[0] ** 2, 2.0 * a[1] ** 2])
    raised = np.array([(n + 1) * a[n] ** 2 for n in range(3)])
    return lowered, raised


class TestSecondOrder:
    def test_product_shapes_against_hand_computation(self):
        phi = 0.7
        lowered, raised = rwa._mode_term_vectors(1, phi, 3)
        hand_low, hand_high = hand_mode_vectors_l1(phi)
        np.testing.assert_allclose(lowered, hand_low, rtol=1e-13)
        np.testing.assert_allclose(raised, hand_high, rtol=1e-13)

    def test_single_pair_against_hand_formula(self):
        # l_max = 1 keeps exactly the (1, 1) pair of both sums
        phi_a, phi_b, e_j = 0.7, 0.4, 1.3
        freqs = rwa.ModeFrequencies(1.0, 0.37)
        sa = sb = FockSpace((3,))
        params = rwa.JunctionParams(e_j=e_j, phi_a=phi_a, phi_b=phi_b)
        corr = rwa.h_rwa2_correction(params, freqs, sa, sb, l_max=1,
                                     resonance_floor=1e-12, escalate=False)
        low_a, high_a = hand_mode_vectors_l1(phi_a)
        low_b, high_b = hand_mode_vectors_l1(phi_b)
        c1 = 1.0 / (freqs.omega_a + freqs.omega_b)
        c2 = -1.0 / (freqs.omega_a - freqs.omega_b)
        hand = e_j ** 2 * (
            c1 * (np.outer(low_a, low_b) - np.outer(high_a, high_b))
            + c2 * (np.outer(low_a, high_b) - np.outer(high_a, low_b))
        )
        np.testing.assert_allclose(corr.diag.real.reshape(3, 3), hand, rtol=1e-12)

    def test_quadratic_in_e_j(self):
        sa = sb = FockSpace((16,))
        freqs = FREQS_DEFAULT
        full = rwa.JunctionParams(e_j=EJ_DEFAULT, phi_a=3.0, phi_b=3.0)
        half = rwa.JunctionParams(e_j=EJ_DEFAULT / 2, phi_a=3.0, phi_b=3.0)
        c_full = rwa.h_rwa2_correction(full, freqs, sa, sb, l_max=20, escalate=False)
        c_half = rwa.h_rwa2_correction(half, freqs, sa, sb, l_max=20, escalate=False)
        np.testing.assert_allclose(c_half.diag.real, 0.25 * c_full.diag.real, rtol=1e-12)

    def test_frequency_scaling(self):
        sa = sb = FockSpace((12,))
        params = rwa.JunctionParams(e_j=1.0, phi_a=2.0, phi_b=2.0)
        base = rwa.ModeFrequencies(1.1, 0.4)
        scaled = rwa.ModeFrequencies(3.3, 1.2)
        c_base = rwa.h_rwa2_correction(params, base, sa, sb, l_max=14,
                                       resonance_floor=1e-12, escalate=False)
        c_scaled = rwa.h_rwa2_correction(params, scaled, sa, sb, l_max=14,
                                         resonance_floor=1e-12, escalate=False)
        np.testing.assert_allclose(c_scaled.diag.real, c_base.diag.real / 3.0, rtol=1e-12)

    def test_converged_in_order(self):
        sa = sb = FockSpace((24,))
        params = rwa.JunctionParams(e_j=EJ_DEFAULT, phi_a=4.0, phi_b=4.0)
        h82 = rwa.h_rwa2_two_mode(params, FREQS_DEFAULT, sa, sb, l_max=82, escalate=False)
        h84 = rwa.h_rwa2_two_mode(params, FREQS_DEFAULT, sa, sb, l_max=84, escalate=False)
        scale = np.max(np.abs(h82.diag.real))
        assert np.max(np.abs(h84.diag.real - h82.diag.real)) <= 1e-10 * scale

    def test_escalation_matches_large_fixed_order(self):
        sa = sb = FockSpace((20,))
        params = rwa.JunctionParams(e_j=EJ_DEFAULT, phi_a=4.0, phi_b=4.0)
        auto = rwa.h_rwa2_correction(params, FREQS_DEFAULT, sa, sb)
        fixed = rwa.h_rwa2_correction(
            params, FREQS_DEFAULT, sa, sb, l_max=88, escalate=False
        )
        scale = np.max(np.abs(fixed.diag.real))
        assert np.max(np.abs(auto.diag.real - fixed.diag.real)) <= 1e-9 * scale

    def test_near_resonance_raises_inside_requested_order(self):
        freqs = rwa.ModeFrequencies(3.0 + 1e-9, 1.0)
        sa = sb = FockSpace((6,))
        params = rwa.JunctionParams(e_j=1.0, phi_a=1.0, phi_b=1.0)
        with pytest.raises(NearResonanceError) as err:
            rwa.h_rwa2_correction(params, freqs, sa, sb, l_max=4,
                                  resonance_floor=1e-3, escalate=False)
        assert (err.value.l_a, err.value.l_b) == (1, 3)

    def test_resonance_scan_reports_same_parity_only(self):
        hits = rwa.resonance_scan(rwa.ModeFrequencies(2.0 + 1e-9, 1.0), l_max=4, floor=1e-3)
        # (1, 2) is opposite parity and must not appear; (2, 4) must
        pairs = {(la, lb) for la, lb, _ in hits}
        assert (1, 2) not in pairs
        assert (2, 4) in pairs

    def test_exact_resonance_of_default_frequencies(self):
        # 75 * 9.1 GHz equals 91 * 7.5 GHz; the scan must find it
        hits = rwa.resonance_scan(FREQS_DEFAULT, l_max=91)
        assert any((la, lb) == (75, 91) for la, lb, _ in hits)


class TestMultiJunction:
    def test_single_junction_equality(self, space):
        h1 = rwa.h_rwa_single(rwa.JunctionParams(e_j=2.0, phi_a=3.0), space)
        hm = rwa.h_rwa_multi_junction([(2.0, 3.0)], space)
        np.testing.assert_allclose(hm.diag.real, h1.diag.real, rtol=1e-14)

    def test_linear_in_energies(self, space):
        junctions = [(1.0, 2.0), (0.5, 3.0), (2.0, 1.0)]
        doubled = [(2 * e, p) for e, p in junctions]
        h = rwa.h_rwa_multi_junction(junctions, space)
        h2 = rwa.h_rwa_multi_junction(doubled, space)
        np.testing.assert_allclose(h2.diag.real, 2.0 * h.diag.real, rtol=1e-14)

    def test_rejects_empty_and_nonpositive(self, space):
        with pytest.raises(ValueError):
            rwa.h_rwa_multi_junction([], space)
        with pytest.raises(ValueError):
            rwa.h_rwa_multi_junction([(0.0, 1.0)], space)
