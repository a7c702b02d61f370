"""Symmetric and antisymmetric exciton bands of the coupled chains.

The two chains hybridize into a bright symmetric band E_s = E_A + J(k) + J'(k)
and a dark antisymmetric band E_a = E_A + J(k) - J'(k).  Radiative damping is
carried as an energy (hbar * rate): the symmetric band decays at twice the
single-chain exciton rate, the antisymmetric band is exactly dark, and both
become metastable beyond the critical wave number where the band crosses the
free-space light line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy.optimize import brentq

from .core import COULOMB, HBAR_C, ModelParams
from .lattice_sums import SumMethod, inter_dynamical_matrix, intra_dynamical_matrix

BranchLabel = Literal["symmetric", "antisymmetric"]


class RootNotFoundError(RuntimeError):
    """Bracketing root find failed to find a sign change."""


@dataclass(frozen=True)
class ExcitonBranch:
    k: float
    theta: float
    label: BranchLabel
    energy: float  # eV
    damping: float  # hbar * Gamma, eV; exactly 0 for the antisymmetric branch

    def __post_init__(self):
        if self.label not in ("symmetric", "antisymmetric"):
            raise ValueError(f"unknown exciton branch label {self.label!r}")
        if self.damping < 0:
            raise ValueError("exciton damping must be >= 0")


@dataclass(frozen=True)
class SplittingReport:
    delta_sa: float  # E_s - E_a = 2 J'(k), eV
    oscillation_possible: bool  # |splitting| exceeds the symmetric damping


# How a single requested method maps onto the (J, J') evaluations.  The
# ASYMPTOTIC entry is the closed-form mode: zeta(3) limit for J and the
# exponential closed form for J', reproducing the analytic dispersions
# literally (useful for figure parity, not as the accuracy reference).
_METHOD_MAP = {
    SumMethod.DIRECT: (SumMethod.DIRECT, SumMethod.DIRECT),
    SumMethod.BESSEL_SERIES: (SumMethod.DIRECT, SumMethod.BESSEL_SERIES),
    SumMethod.ASYMPTOTIC: (SumMethod.LONG_WAVELENGTH_LIMIT, SumMethod.ASYMPTOTIC),
    SumMethod.LONG_WAVELENGTH_LIMIT: (SumMethod.LONG_WAVELENGTH_LIMIT, SumMethod.BESSEL_SERIES),
}


def exciton_energy(k: float, theta: float, label: BranchLabel, params: ModelParams,
                   method: SumMethod = SumMethod.BESSEL_SERIES) -> ExcitonBranch:
    """One exciton branch at (k, theta): E_A + J(k) +/- J'(k) with its damping.

    The radiative width reuses the intralattice evaluation of the energy
    (E_ex inside the rate formula is E_A + J(k), interlattice shift dropped).
    """
    j_method, jp_method = _METHOD_MAP[method]
    j = intra_dynamical_matrix(k, params, j_method, theta=theta)
    jp = inter_dynamical_matrix(k, params, jp_method, theta=theta)
    sign = 1.0 if label == "symmetric" else -1.0
    energy = params.atom_energy + j.value + sign * jp.value
    if label == "antisymmetric":
        damping = 0.0
    else:
        damping = _symmetric_damping(params.atom_energy + j.value, k, theta, params)
    return ExcitonBranch(k=k, theta=theta, label=label, energy=energy, damping=damping)


def _rate_formula(e_ex: float, k: float, theta: float, params: ModelParams) -> float:
    # hbar*Gamma_ex = mu^2 E_ex^2 / (4 eps0 a (hbar c)^2)
    #                 * {1 + cos^2 - (hbar c k / E_ex)^2 (2 cos^2 - sin^2)}
    # and 1/(4 eps0) = pi / (4 pi eps0).
    mu = params.dipole.mu
    cos2 = math.cos(theta) ** 2
    sin2 = math.sin(theta) ** 2
    ratio2 = (HBAR_C * k / e_ex) ** 2
    bracket = 1.0 + cos2 - ratio2 * (2.0 * cos2 - sin2)
    return (math.pi * COULOMB * mu * mu * e_ex * e_ex
            / (params.geometry.a * HBAR_C * HBAR_C) * bracket)


def _symmetric_damping(e_ex: float, k: float, theta: float, params: ModelParams) -> float:
    if HBAR_C * k > e_ex:
        return 0.0  # metastable: no energy-conserving free photon exists
    return 2.0 * max(_rate_formula(e_ex, k, theta, params), 0.0)


def exciton_damping_unclamped(k: float, theta: float, params: ModelParams) -> float:
    """Single-chain exciton radiative width hbar*Gamma_ex(k, theta) in eV, no clamps.

    The raw angular formula, exposed alongside the clamped rate so the
    discrepancy between the two beyond the light line stays visible; it can
    go negative past its zero.  E_ex inside is E_A + J(k).
    """
    e_ex = params.atom_energy + intra_dynamical_matrix(k, params, theta=theta).value
    return _rate_formula(e_ex, k, theta, params)


def exciton_damping(k: float, theta: float, params: ModelParams,
                    label: BranchLabel = "symmetric") -> float:
    """Radiative width hbar*Gamma of an exciton branch, in eV.

    The antisymmetric branch is exactly dark.  The symmetric branch carries
    twice the single-chain width, set to zero beyond the light line
    (hbar c k > E_ex) and wherever the angular bracket of the rate formula
    turns negative.
    """
    if label == "antisymmetric":
        return 0.0
    if label != "symmetric":
        raise ValueError(f"unknown exciton branch label {label!r}")
    e_ex = params.atom_energy + intra_dynamical_matrix(k, params, theta=theta).value
    return _symmetric_damping(e_ex, k, theta, params)


def single_atom_damping(params: ModelParams) -> float:
    """Free-atom radiative width hbar*Gamma_A = mu^2 E_A^3 / (3 pi eps0 (hbar c)^3), eV."""
    mu = params.dipole.mu
    # 1/(3 pi eps0) = (4/3) / (4 pi eps0)
    return (4.0 / 3.0) * COULOMB * mu * mu * params.atom_energy**3 / HBAR_C**3


def sa_splitting(k: float, theta: float, params: ModelParams,
                 method: SumMethod = SumMethod.BESSEL_SERIES) -> SplittingReport:
    """Symmetric-antisymmetric splitting 2 J'(k) and whether coherent
    interlattice oscillation can outrun the symmetric damping."""
    _, jp_method = _METHOD_MAP[method]
    jp = inter_dynamical_matrix(k, params, jp_method, theta=theta)
    delta = 2.0 * jp.value
    gamma_s = exciton_damping(k, theta, params, "symmetric")
    return SplittingReport(delta_sa=delta, oscillation_possible=abs(delta) > gamma_s)


def critical_wavenumber(theta: float, params: ModelParams,
                        method: SumMethod = SumMethod.BESSEL_SERIES) -> float:
    """Wave number k_c where the symmetric band meets the light line.

    Solves E_ex^s(k_c) = hbar c k_c by a bracketing root find; since the
    lattice shifts are ~1e-8 of E_A, k_c sits within a whisker of E_A/(hbar c).
    """
    def mismatch(k: float) -> float:
        return exciton_energy(k, theta, "symmetric", params, method).energy - HBAR_C * k

    k_scale = params.atom_energy / HBAR_C
    lo, hi = 0.5 * k_scale, 2.0 * k_scale
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo * f_hi > 0:
        raise RootNotFoundError(
            f"no sign change in [{lo:g}, {hi:g}]: f(lo)={f_lo:g}, f(hi)={f_hi:g}")
    tol = params.numerics.root_tol
    return float(brentq(mismatch, lo, hi, xtol=tol * k_scale, rtol=max(tol, 4e-16)))
