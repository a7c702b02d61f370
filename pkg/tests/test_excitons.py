import math

import pytest

from fiberpol import (
    COULOMB,
    HBAR_C,
    RootNotFoundError,
    SumMethod,
    critical_wavenumber,
    exciton_damping,
    exciton_damping_unclamped,
    exciton_energy,
    inter_dynamical_matrix,
    intra_dynamical_matrix,
    load_config,
    sa_splitting,
    single_atom_damping,
)
from fiberpol.specialfn import ZETA3

MAGIC_THETA = math.acos(1.0 / math.sqrt(3.0))


def bisection_oracle(f, lo, hi, iterations=200):
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


class TestExcitonEnergy:
    def test_energy_assembles_j_and_jprime(self, params):
        k, theta = 3e-4, 1.1
        j = intra_dynamical_matrix(k, params, theta=theta).value
        jp = inter_dynamical_matrix(k, params, SumMethod.BESSEL_SERIES, theta=theta).value
        e_s = exciton_energy(k, theta, "symmetric", params).energy
        e_a = exciton_energy(k, theta, "antisymmetric", params).energy
        assert e_s == params.atom_energy + j + jp
        assert e_a == params.atom_energy + j - jp

    def test_forty_five_degrees_closed_form_mode(self, params):
        # In the closed-form (asymptotic) mode the interlattice factor
        # 2 cos^2 - 1 vanishes at 45 deg and both branches sit at
        # E_A - zeta(3) mu^2 / (4 pi eps0 a^3).
        theta = math.radians(45.0)
        e_s = exciton_energy(2e-4, theta, "symmetric", params, SumMethod.ASYMPTOTIC)
        e_a = exciton_energy(2e-4, theta, "antisymmetric", params, SumMethod.ASYMPTOTIC)
        assert abs(e_s.energy - e_a.energy) <= 1e-24
        expected = params.atom_energy - ZETA3 * COULOMB / params.geometry.a**3
        assert e_s.energy == pytest.approx(expected, rel=1e-12)

    def test_magic_angle_closed_form_mode(self, params):
        # On-lattice term vanishes; the branches split symmetrically about E_A.
        k = 1e-3
        e_s = exciton_energy(k, MAGIC_THETA, "symmetric", params, SumMethod.ASYMPTOTIC)
        e_a = exciton_energy(k, MAGIC_THETA, "antisymmetric", params, SumMethod.ASYMPTOTIC)
        jp = inter_dynamical_matrix(k, params, SumMethod.ASYMPTOTIC, theta=MAGIC_THETA)
        assert jp.value < 0  # 2 cos^2 - 1 = -1/3 at the magic angle
        assert e_s.energy - params.atom_energy == pytest.approx(jp.value, rel=1e-10)
        assert e_a.energy - params.atom_energy == pytest.approx(-jp.value, rel=1e-10)
        geo = params.geometry
        amp = (math.sqrt(2.0 * math.pi) / (3.0 * geo.a * geo.d**2)
               * (k * geo.d) ** 1.5 * math.exp(-k * geo.d) * COULOMB)
        assert e_s.energy == pytest.approx(params.atom_energy - amp, rel=1e-9)

    def test_default_small_k_shift(self, params):
        e_s = exciton_energy(1e-6, math.pi / 2, "symmetric", params)
        assert e_s.energy - params.atom_energy == pytest.approx(3.46e-8, rel=0.02)

    def test_branch_labels_validated(self, params):
        with pytest.raises(ValueError, match="label"):
            exciton_energy(1e-6, 0.0, "bright", params)


class TestExcitonDamping:
    def test_symmetric_width_golden_number(self, params):
        got = exciton_damping(1e-6, math.pi / 2, params, "symmetric")
        assert got == pytest.approx(2.32e-8, rel=0.01)

    def test_antisymmetric_exactly_dark(self, params):
        for k in (0.0, 1e-6, 1e-4, 1e-3):
            assert exciton_damping(k, math.pi / 2, params, "antisymmetric") == 0.0
            assert exciton_energy(k, 0.3, "antisymmetric", params).damping == 0.0

    @pytest.mark.parametrize("theta", [0.0, 0.5, MAGIC_THETA, math.pi / 2])
    def test_metastable_beyond_light_line(self, theta, params):
        # hbar c k > E_ex: no radiative decay for any orientation.
        assert exciton_damping(6e-4, theta, params, "symmetric") == 0.0

    def test_parallel_dipole_bracket_zero_at_light_line(self, params):
        # theta = 0: the bracket 2 (1 - (hbar c k / E)^2) hits zero exactly at
        # the crossing, so the clamped rate is continuous there.
        k_star = critical_wavenumber(0.0, params)
        just_below = exciton_damping(k_star * (1.0 - 1e-6), 0.0, params)
        assert 0.0 < just_below < 1e-12
        assert exciton_damping(k_star * (1.0 + 1e-6), 0.0, params) == 0.0

    def test_unclamped_formula_goes_negative(self, params):
        assert exciton_damping_unclamped(6e-4, 0.0, params) < 0.0

    def test_superradiant_at_small_k(self, params):
        gamma_a = single_atom_damping(params)
        for k in (1e-8, 1e-6, 1e-5):  # ka <= 0.01
            assert exciton_damping(k, math.pi / 2, params) / gamma_a > 1.0


class TestSingleAtomDamping:
    def test_reference_value(self, params):
        # Independent grouping of mu^2 E^3 / (3 pi eps0 (hbar c)^3).
        oracle = params.dipole.mu**2 * params.atom_energy**3 / (
            0.75 / COULOMB) / HBAR_C**3
        got = single_atom_damping(params)
        assert got == pytest.approx(oracle, rel=1e-12)
        assert got == pytest.approx(2.4987e-9, rel=1e-4)
        assert round(got * 1e9, 1) == 2.5

    def test_quadratic_dipole_scaling(self, params):
        doubled = load_config({"mu_eA": 2.0})
        assert single_atom_damping(doubled) == 4.0 * single_atom_damping(params)

    def test_superradiance_ratio(self, params):
        ratio = exciton_damping(0.0, math.pi / 2, params) / (2.0 * single_atom_damping(params))
        assert ratio == pytest.approx(0.75 * math.pi * HBAR_C
                                      / (params.geometry.a * params.atom_energy), rel=1e-3)
        assert ratio == pytest.approx(4.65, rel=1e-3)


class TestSplitting:
    def test_delta_is_twice_jprime(self, params):
        k, theta = 4e-4, 0.9
        rep = sa_splitting(k, theta, params)
        jp = inter_dynamical_matrix(k, params, SumMethod.BESSEL_SERIES, theta=theta).value
        assert rep.delta_sa == pytest.approx(2.0 * jp, rel=1e-14)
        e_s = exciton_energy(k, theta, "symmetric", params).energy
        e_a = exciton_energy(k, theta, "antisymmetric", params).energy
        # Direct energy subtraction only resolves the splitting to float eps.
        assert e_s - e_a == pytest.approx(rep.delta_sa, abs=1e-15)

    def test_vanishes_at_forty_five_degrees_closed_form(self, params):
        rep = sa_splitting(3e-4, math.radians(45.0), params, SumMethod.ASYMPTOTIC)
        assert abs(rep.delta_sa) <= 1e-24

    def test_angle_factor_symmetry_closed_form(self, params):
        # 2 cos^2 - 1 = +1 at 0 and -1 at 90 deg.
        d0 = sa_splitting(5e-4, 0.0, params, SumMethod.ASYMPTOTIC).delta_sa
        d90 = sa_splitting(5e-4, math.pi / 2, params, SumMethod.ASYMPTOTIC).delta_sa
        assert d0 == pytest.approx(-d90, rel=1e-12)

    def test_default_magnitude(self, params):
        rep = sa_splitting(1e-3, math.pi / 2, params, SumMethod.ASYMPTOTIC)
        assert abs(rep.delta_sa) == pytest.approx(1.04e-12, rel=5e-3)
        exact = sa_splitting(1e-3, math.pi / 2, params)
        assert abs(exact.delta_sa) == pytest.approx(1.04e-12, rel=0.15)

    def test_oscillation_flag_follows_damping(self, params):
        # Below the light-line crossing the radiative width (2.3e-8 eV)
        # dwarfs the splitting; beyond it the exciton is metastable, the
        # width clamps to zero, and even a tiny splitting wins.
        below = sa_splitting(4e-4, math.pi / 2, params)
        assert abs(below.delta_sa) < exciton_damping(4e-4, math.pi / 2, params)
        assert not below.oscillation_possible
        beyond = sa_splitting(1e-3, math.pi / 2, params)
        assert exciton_damping(1e-3, math.pi / 2, params) == 0.0
        assert beyond.oscillation_possible

    def test_mean_energy_independent_of_separation(self, params):
        # (E_s + E_a)/2 = E_A + J(k) regardless of d.
        k, theta = 2e-4, 1.2
        means = []
        for d_over_a in (5, 10, 20):
            p = load_config({"d_over_a": d_over_a, "theta_deg": math.degrees(theta)})
            e_s = exciton_energy(k, theta, "symmetric", p).energy
            e_a = exciton_energy(k, theta, "antisymmetric", p).energy
            means.append(0.5 * (e_s + e_a))
        ref = params.atom_energy + intra_dynamical_matrix(k, params, theta=theta).value
        for mean in means:
            assert mean == pytest.approx(ref, rel=1e-14)


class TestCriticalWavenumber:
    def test_against_bisection_oracle(self, params):
        theta = math.pi / 2

        def mismatch(k):
            return exciton_energy(k, theta, "symmetric", params).energy - HBAR_C * k

        k_scale = params.atom_energy / HBAR_C
        oracle = bisection_oracle(mismatch, 0.5 * k_scale, 2.0 * k_scale, iterations=60)
        k_c = critical_wavenumber(theta, params)
        assert k_c == pytest.approx(oracle, rel=1e-9)

    def test_close_to_light_line_crossing(self, params):
        k_c = critical_wavenumber(math.pi / 2, params)
        assert k_c == pytest.approx(params.atom_energy / HBAR_C, rel=1e-6)

    def test_scales_with_atom_energy(self, params):
        k1 = critical_wavenumber(math.pi / 2, params)
        k2 = critical_wavenumber(math.pi / 2, load_config({"E_A_eV": 2.0}))
        assert k2 == pytest.approx(2.0 * k1, rel=1e-6)

    def test_damping_dead_above_crossing(self, params):
        k_c = critical_wavenumber(math.pi / 2, params)
        for theta in (0.0, 0.7, math.pi / 2):
            assert exciton_damping(k_c * 1.01, theta, params) == 0.0

    def test_missing_bracket_raises(self, params, monkeypatch):
        import fiberpol.excitons as mod

        def flat_energy(k, theta, label, p, method=SumMethod.BESSEL_SERIES):
            return mod.ExcitonBranch(k=k, theta=theta, label=label, energy=-1.0, damping=0.0)

        monkeypatch.setattr(mod, "exciton_energy", flat_energy)
        with pytest.raises(RootNotFoundError, match="sign change"):
            critical_wavenumber(0.0, params)
