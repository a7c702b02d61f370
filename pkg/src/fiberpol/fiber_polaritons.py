"""Fiber photon dispersion, exciton-photon coupling, and polariton branches.

Only the symmetric exciton couples to the guided mode, so each wave number k
reduces to a 2x2 eigenproblem whose branches carry Hopfield weights X^2
(exciton fraction) and Y^2 (photon fraction).  All energies are hbar*omega in
eV; the coupling phase is dropped because only |f_k|^2 enters dispersions,
weights, and spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import COULOMB, HBAR_C, FiberParams, ModelParams
from .excitons import exciton_energy
from .lattice_sums import SumMethod


@dataclass(frozen=True)
class PolaritonPoint:
    """Two polariton branches at one (k, theta) with weights and dampings."""

    k: float
    theta: float
    omega_plus: float   # eV
    omega_minus: float  # eV
    X2_plus: float
    Y2_plus: float
    X2_minus: float
    Y2_minus: float
    gamma_plus: float   # eV
    gamma_minus: float  # eV
    delta: float        # detuning (omega_ph - omega_ex^s)/2, eV
    f: float            # coupling hbar*|f_k|, eV


def photon_energy(k: float, fiber: FiberParams) -> float:
    """Guided photon energy (hbar c / sqrt(eps)) sqrt(k0^2 + k^2), eV.  Even in k."""
    return HBAR_C / math.sqrt(fiber.epsilon) * math.hypot(fiber.k0, k)


def coupling_strength(k: float, params: ModelParams) -> float:
    """Exciton-photon coupling magnitude hbar*|f_k| in eV.

    hbar |f_k| = u(b) sqrt( hbar omega_ph(k) mu^2 / (eps0 S a) ), evaluated as
    u_b * sqrt( 4 pi (e^2/4 pi eps0) mu^2 hbar omega_ph / (S a) ) in eV and
    Angstrom units.  Theta independent.
    """
    omega = photon_energy(k, params.fiber)
    mu = params.dipole.mu
    return params.fiber.u_b * math.sqrt(
        4.0 * math.pi * COULOMB * mu * mu * omega
        / (params.fiber.mode_area * params.geometry.a))


def polariton_damping(point: PolaritonPoint, gamma_ex_s: float,
                      gamma_ph: float) -> tuple[float, float]:
    """(hbar*Gamma_+, hbar*Gamma_-): branch dampings mixed by the Hopfield weights."""
    return (gamma_ex_s * point.X2_plus + gamma_ph * point.Y2_plus,
            gamma_ex_s * point.X2_minus + gamma_ph * point.Y2_minus)


def polariton_branches(k: float, theta: float, params: ModelParams,
                       method: SumMethod = SumMethod.BESSEL_SERIES) -> PolaritonPoint:
    """Diagonalize the symmetric-exciton plus photon block at one (k, theta).

    omega_+- = (omega_ph + omega_ex)/2 +- sqrt(delta^2 + f^2) with
    delta = (omega_ph - omega_ex)/2; the weights follow from the same 2x2
    rotation and satisfy X2 + Y2 = 1 per branch and completeness across
    branches.
    """
    exc = exciton_energy(k, theta, "symmetric", params, method)
    omega_ph = photon_energy(k, params.fiber)
    f = coupling_strength(k, params)
    delta = 0.5 * (omega_ph - exc.energy)
    gap = math.hypot(delta, f)
    mean = 0.5 * (omega_ph + exc.energy)
    if gap > 0.0:
        x2_plus = (gap - delta) / (2.0 * gap)
        y2_plus = (gap + delta) / (2.0 * gap)
    else:
        x2_plus = y2_plus = 0.5  # fully degenerate, uncoupled point
    point = PolaritonPoint(
        k=k, theta=theta,
        omega_plus=mean + gap, omega_minus=mean - gap,
        X2_plus=x2_plus, Y2_plus=y2_plus,
        X2_minus=y2_plus, Y2_minus=x2_plus,
        gamma_plus=0.0, gamma_minus=0.0,
        delta=delta, f=f)
    g_plus, g_minus = polariton_damping(point, exc.damping, params.fiber.gamma_ph)
    return PolaritonPoint(
        k=k, theta=theta,
        omega_plus=point.omega_plus, omega_minus=point.omega_minus,
        X2_plus=x2_plus, Y2_plus=y2_plus,
        X2_minus=y2_plus, Y2_minus=x2_plus,
        gamma_plus=g_plus, gamma_minus=g_minus,
        delta=delta, f=f)
