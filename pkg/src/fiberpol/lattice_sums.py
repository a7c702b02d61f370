"""Exciton dynamical matrices of the two-chain lattice.

J(k) is the intralattice transfer sum, J'(k) the interlattice one.  Both are
computable by independent routes that must agree:

* ``DIRECT``: real-space summation over sites with analytic tail bounds,
* ``BESSEL_SERIES``: the exact dual series obtained from the Gaussian-integral
  identity; its terms decay like exp(-2 pi d n / a), so a handful of modified
  Bessel evaluations suffice,
* ``ASYMPTOTIC``: the closed form valid for ka << 1 and kd >> 1,
* ``LONG_WAVELENGTH_LIMIT``: the k -> 0 limit of J(k), proportional to zeta(3).

The dual series for S(k) = sum_l exp(i k a l) / (a^2 l^2 + d^2)^(5/2) is

    S(k) = 8/(3 a^3 d^2) sum_n v_n^2 K_2(w_n),
    v_n = n pi + k a / 2,   w_n = (2 d / a) |v_n|.

The momentum-space dipole tensor follows by applying d/dk operators to S
termwise; reducing K_2'' through the modified Bessel ODE and K_3 through the
upward recurrence collapses everything to cancellation-free brackets:

    D_xx(k) = 2/(a d^2) sum_n [w^2 K_2(w) - 2 w K_1(w)]
    D_yy(k) = 2/(a d^2) sum_n w K_1(w)
    D_zz(k) = 2/(a d^2) sum_n [w K_1(w) - w^2 K_2(w)]

with the n = 0 limits w K_1 -> 1 and w^2 K_2 -> 2 as k -> 0 (which also
resolves the 0 * inf form of the bare series at k = 0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import COULOMB, HBAR_C, DipoleOrientation, LatticeGeometry, ModelParams, NumericsParams
from .specialfn import ZETA3, SeriesNonconvergence, SeriesResult, bessel_k_all, cos_cubed_series

# Validity gates of the ASYMPTOTIC closed form.
REGIME_KD_MIN = 5.0
REGIME_KA_MAX = 0.1

_BLOCK = 65_536
_TINY_W = 1e-6  # below this, w K1 -> 1 and w^2 K2 -> 2


class SumMethod(str, Enum):
    DIRECT = "direct"
    BESSEL_SERIES = "bessel-series"
    ASYMPTOTIC = "asymptotic"
    LONG_WAVELENGTH_LIMIT = "long-wavelength-limit"


@dataclass(frozen=True)
class CouplingValue:
    """A lattice-sum result with method provenance and an error estimate.

    ``value`` is in eV for the dynamical matrices and 1/Angstrom^5 for S(k).
    ``regime_ok`` is False (with a warning attached) when an asymptotic or
    limit method is evaluated outside its validity regime; the value is still
    returned.
    """

    value: float
    method: SumMethod
    est_error: float
    regime_ok: bool = True
    warning: str | None = None


def dipole_coupling_free(separation, dipole: DipoleOrientation,
                         atom_energy: float | None = None) -> float:
    """Free-space resonant dipole-dipole coupling at vector separation R, in eV.

    J(R) = (1/4 pi eps0) [ |R|^2 mu^2 - 3 (mu.R)^2 ] / |R|^5.  The quasistatic
    kernel holds for |R| < lambda_A; pass ``atom_energy`` to get a warning
    outside that range (never an error, the finite-lattice validator
    deliberately sums past it).
    """
    rx, ry, rz = (float(c) for c in separation)
    r2 = rx * rx + ry * ry + rz * rz
    if r2 == 0.0:
        raise ValueError("dipole_coupling_free: zero separation is singular")
    if atom_energy is not None:
        lambda_a = 2.0 * math.pi * HBAR_C / atom_energy
        if math.sqrt(r2) >= lambda_a:
            warnings.warn(
                "dipole separation exceeds the transition wavelength; the "
                "quasistatic kernel omits radiative corrections",
                UserWarning,
                stacklevel=2,
            )
    mx, my, mz = dipole.components()
    mu2 = mx * mx + my * my + mz * mz
    mdr = mx * rx + my * ry + mz * rz
    return COULOMB * (r2 * mu2 - 3.0 * mdr * mdr) / r2**2.5


def d_tensor_element(i: str, j: str, l: int, geometry: LatticeGeometry) -> float:
    """Interlattice dipole tensor D_ij at integer site offset l, in 1/Angstrom^3."""
    if i not in ("x", "y", "z") or j not in ("x", "y", "z"):
        raise ValueError(f"axes must be one of x, y, z; got ({i!r}, {j!r})")
    a, d = geometry.a, geometry.d
    r2 = a * a * l * l + d * d
    pair = i + j if i <= j else j + i
    if pair == "xx":
        return r2**-1.5 - 3.0 * a * a * l * l * r2**-2.5
    if pair == "yy":
        return r2**-1.5
    if pair == "zz":
        return r2**-1.5 - 3.0 * d * d * r2**-2.5
    if pair == "xz":
        return -3.0 * a * d * l * r2**-2.5
    return 0.0  # xy and yz couplings vanish for chains offset along z


def intra_dynamical_matrix(k: float, params: ModelParams,
                           method: SumMethod = SumMethod.DIRECT,
                           theta: float | None = None) -> CouplingValue:
    """Intralattice exciton dynamical matrix J(k), in eV.

    DIRECT evaluates (mu_y^2 + mu_z^2 - 2 mu_x^2)/(4 pi eps0 a^3) times the
    cosine-over-cube series at phase k a; LONG_WAVELENGTH_LIMIT replaces the
    series by its k -> 0 value 2 zeta(3).  ``theta`` overrides the configured
    dipole angle (the override keeps the dipole in the x-z plane).
    """
    dipole = params.dipole if theta is None else DipoleOrientation(params.dipole.mu, theta)
    mx, my, mz = dipole.components()
    a = params.geometry.a
    pref = COULOMB * (my * my + mz * mz - 2.0 * mx * mx) / a**3
    num = params.numerics
    if method == SumMethod.DIRECT:
        series = cos_cubed_series(k * a, tol=num.sum_tol, max_terms=num.max_terms)
        return CouplingValue(pref * series.value, method, abs(pref) * series.est_error)
    if method == SumMethod.LONG_WAVELENGTH_LIMIT:
        x = abs(k * a)
        ok = x <= REGIME_KA_MAX
        warning = None if ok else (
            f"long-wavelength limit requires ka <= {REGIME_KA_MAX}, got ka = {x:g}")
        # Leading correction of the full series is O(x^2 ln x).
        est = abs(pref) * x * x * (1.5 + abs(math.log(x))) if x > 0 else 0.0
        return CouplingValue(pref * 2.0 * ZETA3, method, est, regime_ok=ok, warning=warning)
    raise ValueError(
        f"intra_dynamical_matrix supports DIRECT and LONG_WAVELENGTH_LIMIT, got {method}")


class _DirectTails:
    """Tail bounds for sums of exp(ikal) l^m / (a^2 l^2 + d^2)^p past l = L.

    The kernel magnitude is below l^m / (a l)^(2p) once a l >= 2 d; the
    absolute bound integrates that envelope, the oscillatory bound is Abel
    summation against the bounded partial sums of exp(ikal).  Both cover the
    two half-axes.
    """

    def __init__(self, k: float, a: float):
        self.sin_half = abs(math.sin(0.5 * k * a))
        self.a = a

    def bound(self, L: int, power: float, moment: int = 0) -> float:
        decay = 2.0 * power - moment  # kernel ~ 1 / (a^(2p) l^decay)
        scale = self.a ** -(2.0 * power)
        tail = 2.0 * scale / ((decay - 1.0) * L ** (decay - 1.0))
        if self.sin_half > 0.0:
            tail = min(tail, 2.0 * scale / (self.sin_half * L**decay))
        return tail


def s_function(k: float, geometry: LatticeGeometry, method: SumMethod = SumMethod.DIRECT,
               numerics: NumericsParams = NumericsParams()) -> CouplingValue:
    """S(k) = sum_l exp(i k a l) / (a^2 l^2 + d^2)^(5/2), in 1/Angstrom^5."""
    if k < 0:
        raise ValueError("s_function requires k >= 0; use evenness for negative k")
    a, d = geometry.a, geometry.d
    if method == SumMethod.DIRECT:
        tails = _DirectTails(k, a)
        floor = 4.0 / (3.0 * a * d**4)  # continuum magnitude of S(0)
        total = complex(d**-5.0)
        used = 0
        start = 1
        l_tail_ok = max(int(2.0 * d / a), 8)
        while used < numerics.max_terms:
            stop = min(start + _BLOCK - 1, numerics.max_terms)
            l = np.arange(start, stop + 1, dtype=float)
            base = (a * a * l * l + d * d) ** -2.5
            phase = np.exp(1j * (k * a) * l)
            total += np.sum(phase * base) + np.sum(np.conj(phase) * base)
            used = stop
            start = stop + 1
            if used < l_tail_ok:
                continue
            tail = tails.bound(used, 2.5)
            if tail <= numerics.sum_tol * max(abs(total.real), 1e-4 * floor):
                return CouplingValue(float(total.real), method, tail)
        raise SeriesNonconvergence(
            f"direct S(k) did not reach tolerance within max_terms={numerics.max_terms}",
            partial=SeriesResult(float(total.real), tails.bound(used, 2.5), used))

    if method == SumMethod.BESSEL_SERIES:
        pref = 8.0 / (3.0 * a**3 * d**2)
        c = 2.0 * d / a
        floor = 4.0 / (3.0 * a * d**4)

        def term(n: int) -> float:
            v = n * math.pi + 0.5 * k * a
            w = c * abs(v)
            if w < _TINY_W:
                # v^2 K_2(c v) -> 2/c^2 - v^2/2 as v -> 0
                return 2.0 / (c * c) - 0.5 * v * v
            return v * v * bessel_k_all(w)[2]

        total = term(0)
        est = 0.0
        for n in range(1, numerics.bessel_n_max + 1):
            pair = term(n) + term(-n)
            total += pair
            est = abs(pair) * pref
            if est <= 1e-3 * numerics.sum_tol * max(abs(total) * pref, floor):
                break
        else:
            n_next = numerics.bessel_n_max + 1
            est = (abs(term(n_next)) + abs(term(-n_next))) * pref
        return CouplingValue(pref * total, method, est)

    raise ValueError(f"s_function supports DIRECT and BESSEL_SERIES, got {method}")


def _bessel_dij(k: float, geometry: LatticeGeometry,
                numerics: NumericsParams) -> tuple[float, float, float, float]:
    """(D_xx, D_yy, D_zz, est) from the dual series, in 1/Angstrom^3."""
    a, d = geometry.a, geometry.d
    pref = 2.0 / (a * d * d)
    c = 2.0 * d / a

    def brackets(n: int) -> tuple[float, float, float]:
        v = n * math.pi + 0.5 * k * a
        w = c * abs(v)
        if w < _TINY_W:
            wk1, w2k2 = 1.0, 2.0
        else:
            ks = bessel_k_all(w)
            wk1 = w * ks[1]
            w2k2 = w * w * ks[2]
        return w2k2 - 2.0 * wk1, wk1, wk1 - w2k2

    xx, yy, zz = brackets(0)
    est = 0.0
    for n in range(1, numerics.bessel_n_max + 1):
        bp, bm = brackets(n), brackets(-n)
        xx += bp[0] + bm[0]
        yy += bp[1] + bm[1]
        zz += bp[2] + bm[2]
        est = max(abs(bp[i]) + abs(bm[i]) for i in range(3))
        if est <= 1e-3 * numerics.sum_tol:
            break
    else:
        n_next = numerics.bessel_n_max + 1
        est = max(abs(brackets(n_next)[i]) + abs(brackets(-n_next)[i]) for i in range(3))
    return pref * xx, pref * yy, pref * zz, pref * est


def inter_dynamical_matrix(k: float, params: ModelParams,
                           method: SumMethod = SumMethod.BESSEL_SERIES,
                           theta: float | None = None) -> CouplingValue:
    """Interlattice exciton dynamical matrix J'(k), in eV.

    DIRECT sums the full complex kernel, cross terms included; the x-z cross
    sum enters as D_xz(k) + conj(D_xz(k)) (the two index orders are complex
    conjugates in momentum space), so it cancels and the result is real up to
    rounding.  BESSEL_SERIES uses the exact dual series.  ASYMPTOTIC is the
    closed form

        J'(k) ~ sqrt(2 pi)/(a d^2) (kd)^(3/2) e^(-kd) / (4 pi eps0)
                * [mu_x^2 - mu_z^2 + (4/3) mu_y^2 / (kd)],

    flagged valid only for kd >= REGIME_KD_MIN and ka <= REGIME_KA_MAX.
    ``theta`` overrides the configured dipole angle (in-plane dipole).
    """
    if k < 0:
        raise ValueError("inter_dynamical_matrix requires k >= 0; J' is even in k")
    geometry = params.geometry
    dipole = params.dipole if theta is None else DipoleOrientation(params.dipole.mu, theta)
    mx, my, mz = dipole.components()
    a, d = geometry.a, geometry.d
    num = params.numerics

    if method == SumMethod.DIRECT:
        return _direct_inter(k, geometry, (mx, my, mz), num)

    if method == SumMethod.BESSEL_SERIES:
        dxx, dyy, dzz, est_d = _bessel_dij(k, geometry, num)
        value = COULOMB * (mx * mx * dxx + my * my * dyy + mz * mz * dzz)
        est = COULOMB * (mx * mx + my * my + mz * mz) * est_d
        return CouplingValue(value, method, est)

    if method == SumMethod.ASYMPTOTIC:
        kd = k * d
        ka = k * a
        ok = kd >= REGIME_KD_MIN and ka <= REGIME_KA_MAX
        warning = None
        if not ok:
            warning = (f"asymptotic J' requires kd >= {REGIME_KD_MIN} and "
                       f"ka <= {REGIME_KA_MAX}; got kd = {kd:g}, ka = {ka:g}")
        amp = math.sqrt(2.0 * math.pi) / (a * d * d) * math.exp(-kd) * COULOMB
        # The mu_y term carries (kd)^(1/2); written that way there is no 0/0 at k = 0.
        value = amp * (kd**1.5 * (mx * mx - mz * mz) + (4.0 / 3.0) * math.sqrt(kd) * my * my)
        est = abs(value) * 15.0 / (8.0 * kd) if kd > 0 else 0.0
        return CouplingValue(value, method, est, regime_ok=ok, warning=warning)

    raise ValueError(f"inter_dynamical_matrix does not support method {method}")


def _direct_inter(k: float, geometry: LatticeGeometry, mu: tuple[float, float, float],
                  numerics: NumericsParams) -> CouplingValue:
    """Blockwise direct evaluation of J'(k) with a combined tail bound.

    All four base sums (the two isotropic powers plus the l and l^2 moments)
    share the same site blocks, and the stopping test is applied to the
    assembled J' so the tolerance is relative to the physical value.
    """
    mx, my, mz = mu
    a, d = geometry.a, geometry.d
    tails = _DirectTails(k, a)
    mu_scale = mx * mx + my * my + mz * mz + 2.0 * abs(mx * mz)
    if mu_scale == 0.0:
        return CouplingValue(0.0, SumMethod.DIRECT, 0.0)
    # Stopping floor four decades below the k = 0 interlattice coupling scale.
    floor = 1e-4 * COULOMB * mu_scale * 2.0 / (a * d * d)

    p_sum = complex(d**-3.0)   # sum e^{ikal} r^-3
    s_sum = complex(d**-5.0)   # sum e^{ikal} r^-5
    m1_sum = 0.0 + 0.0j        # sum e^{ikal} l r^-5
    m2_sum = 0.0 + 0.0j        # sum e^{ikal} l^2 r^-5
    j_complex = COULOMB * (mx * mx + my * my + mz * mz) * p_sum
    est = math.inf
    used = 0
    start = 1
    l_tail_ok = max(int(2.0 * d / a), 8)
    while used < numerics.max_terms:
        stop = min(start + _BLOCK - 1, numerics.max_terms)
        l = np.arange(start, stop + 1, dtype=float)
        r3 = (a * a * l * l + d * d) ** -1.5
        r5 = (a * a * l * l + d * d) ** -2.5
        phase = np.exp(1j * (k * a) * l)
        conj = np.conj(phase)
        p_sum += np.sum(phase * r3) + np.sum(conj * r3)
        s_sum += np.sum(phase * r5) + np.sum(conj * r5)
        m1_sum += np.sum(phase * l * r5) - np.sum(conj * l * r5)
        m2_sum += np.sum(phase * l * l * r5) + np.sum(conj * l * l * r5)
        used = stop
        start = stop + 1
        if used < l_tail_ok:
            continue
        dxx = p_sum - 3.0 * a * a * m2_sum
        dyy = p_sum
        dzz = p_sum - 3.0 * d * d * s_sum
        dxz = -3.0 * a * d * m1_sum
        j_complex = COULOMB * (mx * mx * dxx + my * my * dyy + mz * mz * dzz
                               + mx * mz * (dxz + np.conj(dxz)))
        est = COULOMB * mu_scale * (tails.bound(used, 1.5)
                                    + 3.0 * a * a * tails.bound(used, 2.5, moment=2)
                                    + 3.0 * d * d * tails.bound(used, 2.5)
                                    + 3.0 * a * d * tails.bound(used, 2.5, moment=1))
        value = float(j_complex.real)
        if est <= numerics.sum_tol * max(abs(value), floor):
            if value != 0.0 and abs(j_complex.imag) > 1e-12 * abs(value):
                warnings.warn(
                    f"direct J'(k) imaginary residue {j_complex.imag:g} exceeds the "
                    "rounding scale", UserWarning, stacklevel=3)
            return CouplingValue(value, SumMethod.DIRECT, est)
    raise SeriesNonconvergence(
        f"direct J'(k) did not reach tolerance within max_terms={numerics.max_terms}",
        partial=SeriesResult(float(j_complex.real), est, used))
