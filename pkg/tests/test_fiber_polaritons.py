import math
from dataclasses import replace

import numpy as np
import pytest

from fiberpol import (
    COULOMB,
    HBAR_C,
    PolaritonPoint,
    coupling_strength,
    exciton_energy,
    load_config,
    photon_energy,
    polariton_branches,
    polariton_damping,
)


class TestPhotonEnergy:
    def test_resonance_at_zero(self, params):
        assert photon_energy(0.0, params.fiber) == pytest.approx(1.0, rel=1e-12)

    def test_value_at_k(self, params):
        # Inline arithmetic oracle.
        k = 1e-3
        oracle = HBAR_C / math.sqrt(3.0) * math.sqrt(params.fiber.k0**2 + k * k)
        got = photon_energy(k, params.fiber)
        assert got == pytest.approx(oracle, rel=1e-14)
        assert got == pytest.approx(1.515892883593917, rel=1e-12)
        # coarser check against the rounded reference figure
        assert got == pytest.approx(1.51585, rel=1e-4)

    def test_light_line_asymptote(self, params):
        k = 1.0
        assert photon_energy(k, params.fiber) / (HBAR_C * k / math.sqrt(3.0)) == \
            pytest.approx(1.0, rel=1e-6)

    def test_even_in_k(self, params):
        assert photon_energy(-3e-4, params.fiber) == photon_energy(3e-4, params.fiber)


class TestCouplingStrength:
    def test_reference_value(self, params):
        # u_b sqrt(C mu^2 hbar w / a^3) for S = 4 pi a^2 at resonance.
        oracle = 0.1 * math.sqrt(COULOMB / params.geometry.a**3)
        got = coupling_strength(0.0, params)
        assert got == pytest.approx(oracle, rel=1e-12)
        assert got == pytest.approx(1.19998e-5, rel=1e-5)

    def test_linear_in_mode_amplitude(self, params):
        weak = load_config({"u_b": 0.01})
        assert coupling_strength(0.0, weak) == pytest.approx(
            0.1 * coupling_strength(0.0, params), rel=1e-12)

    def test_scales_with_sqrt_photon_energy(self, params):
        ratio = coupling_strength(1e-3, params) / coupling_strength(0.0, params)
        assert ratio == pytest.approx(math.sqrt(photon_energy(1e-3, params.fiber)), rel=1e-12)


class TestPolaritonBranches:
    def test_weights_normalized_each_branch(self, params):
        pt = polariton_branches(1e-6, math.pi / 2, params)
        assert pt.X2_plus + pt.Y2_plus == pytest.approx(1.0, abs=1e-12)
        assert pt.X2_minus + pt.Y2_minus == pytest.approx(1.0, abs=1e-12)
        assert pt.X2_plus + pt.X2_minus == pytest.approx(1.0, abs=1e-12)
        assert pt.Y2_plus + pt.Y2_minus == pytest.approx(1.0, abs=1e-12)

    def test_trace_preserved(self, params):
        k, theta = 2e-4, math.pi / 2
        pt = polariton_branches(k, theta, params)
        total = photon_energy(k, params.fiber) + exciton_energy(
            k, theta, "symmetric", params).energy
        assert pt.omega_plus + pt.omega_minus == pytest.approx(total, rel=1e-12)

    def test_gap_bounded_below_by_coupling(self, params):
        for k in np.linspace(0.0, 1e-3, 60):
            pt = polariton_branches(float(k), math.pi / 2, params)
            assert pt.omega_plus - pt.omega_minus >= 2.0 * pt.f * (1.0 - 1e-12)

    def test_gap_reaches_rabi_floor_at_resonance(self, params):
        # The photon-exciton crossing sits near k0 sqrt(2 J / E_A).
        pts = [polariton_branches(float(k), math.pi / 2, params)
               for k in np.linspace(1.5e-7, 3.5e-7, 41)]
        gaps = [pt.omega_plus - pt.omega_minus for pt in pts]
        assert min(gaps) == pytest.approx(2.0 * pts[0].f, rel=1e-4)
        at_min = pts[int(np.argmin(gaps))]
        assert at_min.X2_plus == pytest.approx(0.5, abs=1e-2)
        assert at_min.Y2_minus == pytest.approx(0.5, abs=1e-2)

    def test_level_repulsion(self, params):
        for k in (0.0, 1e-6, 1e-5, 2e-4):
            pt = polariton_branches(k, math.pi / 2, params)
            w_ph = photon_energy(k, params.fiber)
            w_ex = exciton_energy(k, math.pi / 2, "symmetric", params).energy
            assert pt.omega_plus > max(w_ph, w_ex)
            assert pt.omega_minus < min(w_ph, w_ex)

    def test_branch_character_at_large_k(self, params):
        pt = polariton_branches(5e-5, math.pi / 2, params)
        assert pt.Y2_plus > 0.999   # upper branch photonic
        assert pt.X2_minus > 0.999  # lower branch excitonic

    def test_upper_branch_monotone_photon_dominated(self, params):
        ks = np.linspace(0.0, 1e-3, 120)
        wp = [polariton_branches(float(k), math.pi / 2, params).omega_plus for k in ks]
        assert all(b >= a - 1e-18 for a, b in zip(wp, wp[1:]))


class TestPolaritonDamping:
    def _point(self, x2p, y2p):
        return PolaritonPoint(k=0.0, theta=0.0, omega_plus=1.0, omega_minus=1.0,
                              X2_plus=x2p, Y2_plus=y2p, X2_minus=y2p, Y2_minus=x2p,
                              gamma_plus=0.0, gamma_minus=0.0, delta=0.0, f=0.0)

    def test_equal_mixing_at_zero_detuning(self):
        gp, gm = polariton_damping(self._point(0.5, 0.5), 2.0e-8, 1.0e-10)
        assert gp == gm == pytest.approx(0.5 * (2.0e-8 + 1.0e-10), rel=1e-15)

    def test_pure_exciton_limit(self):
        gp, gm = polariton_damping(self._point(0.0, 1.0), 3.0e-8, 0.0)
        assert gm == 3.0e-8  # X2_minus = 1
        assert gp == 0.0

    def test_sum_rule_on_grid(self, params):
        total = params.fiber.gamma_ph
        for k in np.linspace(0.0, 1e-3, 50):
            pt = polariton_branches(float(k), math.pi / 2, params)
            g_ex = exciton_energy(float(k), math.pi / 2, "symmetric", params).damping
            assert pt.gamma_plus + pt.gamma_minus == pytest.approx(
                g_ex + total, rel=1e-12)

    def test_reference_sum_at_small_k(self, params):
        pt = polariton_branches(1e-6, math.pi / 2, params)
        assert pt.gamma_plus + pt.gamma_minus == pytest.approx(2.32e-8 + 1e-10, rel=0.01)


class TestDegenerateEdgeCase:
    def test_zero_gap_point_keeps_weights_finite(self, params):
        pt = polariton_branches(1e-6, math.pi / 2, params)
        degenerate = replace(pt, f=0.0)
        # construction path with gap == 0 is only reachable with u_b -> 0 and
        # delta == 0; emulate by calling the damping mixer directly
        gp, gm = polariton_damping(degenerate, 1.0e-8, 1.0e-10)
        assert gp >= 0.0 and gm >= 0.0
