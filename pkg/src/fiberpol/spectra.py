"""Linear optical response of the fiber: reflection, transmission, absorption.

The probe couples to the fiber ends with bandwidth gamma (an energy here,
hbar*gamma).  The response function

    Lambda(omega) = sum_r Y_r^2 / (omega - (omega_r - i Gamma_r))

sums the two polariton poles weighted by their photon fractions, and

    R = 1 / |1 + i gamma Lambda|^2,
    T = gamma^2 |Lambda|^2 / |1 + i gamma Lambda|^2,
    A = 1 - R - T.

A is the closure remainder; with nonnegative dampings it is nonnegative, and
a violation beyond rounding raises instead of being clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams
from .fiber_polaritons import PolaritonPoint, polariton_branches
from .lattice_sums import SumMethod

_CLOSURE_TOL = 1e-12


class PoleEvaluationError(ZeroDivisionError):
    """Probe energy hit an undamped polariton pole exactly."""


@dataclass(frozen=True)
class SpectrumPoint:
    omega: float  # probe energy, eV
    R: float
    T: float
    A: float


@dataclass(frozen=True)
class SpectrumPeak:
    branch: str        # "upper" or "lower", by nearest polariton energy
    omega_peak: float  # eV
    T_peak: float
    fwhm: float        # eV, width of the band at half the peak transmission


@dataclass(frozen=True)
class SpectrumTable:
    k: float
    theta: float
    gamma: float  # hbar*gamma, eV
    rows: tuple[SpectrumPoint, ...]
    peaks: tuple[SpectrumPeak, ...]


def response_lambda(omega: float, point: PolaritonPoint,
                    dampings: tuple[float, float]) -> complex:
    """Lambda(omega) in 1/eV; poles sit at omega_+- shifted below the real axis."""
    g_plus, g_minus = dampings
    if g_plus < 0 or g_minus < 0:
        raise ValueError("dampings must be >= 0")
    for omega_r, gamma_r in ((point.omega_plus, g_plus), (point.omega_minus, g_minus)):
        if gamma_r == 0.0 and omega == omega_r:
            raise PoleEvaluationError(
                f"omega = {omega:g} eV sits exactly on an undamped pole")
    return (point.Y2_plus / (omega - (point.omega_plus - 1j * g_plus))
            + point.Y2_minus / (omega - (point.omega_minus - 1j * g_minus)))


def _rt_from_lambda(lam, gamma: float):
    denom2 = np.abs(1.0 + 1j * gamma * lam) ** 2
    r = 1.0 / denom2
    t = gamma * gamma * np.abs(lam) ** 2 / denom2
    a = 1.0 - r - t
    return r, t, a


def spectrum_point(omega: float, k: float, theta: float, params: ModelParams,
                   method: SumMethod = SumMethod.BESSEL_SERIES) -> SpectrumPoint:
    """(R, T, A) at a single probe energy."""
    if not params.edge_coupling > 0:
        raise ValueError("spectrum requires edge coupling hbar_gamma > 0")
    point = polariton_branches(k, theta, params, method)
    lam = response_lambda(omega, point, (point.gamma_plus, point.gamma_minus))
    r, t, a = _rt_from_lambda(lam, params.edge_coupling)
    _check_physical(float(r), float(t), float(a), omega)
    return SpectrumPoint(omega=omega, R=float(r), T=float(t), A=float(a))


def _check_physical(r: float, t: float, a: float, omega: float) -> None:
    if a < -_CLOSURE_TOL or t > 1.0 + _CLOSURE_TOL or r > 1.0 + _CLOSURE_TOL:
        raise RuntimeError(
            "unphysical spectrum point (diagnostics): "
            f"omega={omega!r} R={r!r} T={t!r} A={a!r}")


def spectrum_sweep(k: float, theta: float, params: ModelParams,
                   omega_range: tuple[float, float], n_points: int,
                   method: SumMethod = SumMethod.BESSEL_SERIES) -> SpectrumTable:
    """Uniform omega sweep with transmission peak analysis.

    Local maxima of T are clustered into bands: two maxima merge when their
    separation is smaller than half the sum of their half-max widths.  In the
    narrow-bandwidth regime this reports the two polariton peaks; when gamma
    exceeds the Rabi splitting the shoulders around the central dip merge
    into a single band.
    """
    lo, hi = float(omega_range[0]), float(omega_range[1])
    if not hi > lo:
        raise ValueError("omega_range must be strictly increasing: (low, high)")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if not params.edge_coupling > 0:
        raise ValueError("spectrum requires edge coupling hbar_gamma > 0")
    point = polariton_branches(k, theta, params, method)
    gamma = params.edge_coupling
    omega = np.linspace(lo, hi, n_points)
    for omega_r, gamma_r in ((point.omega_plus, point.gamma_plus),
                             (point.omega_minus, point.gamma_minus)):
        if gamma_r == 0.0 and np.any(omega == omega_r):
            raise PoleEvaluationError(
                f"omega grid hits the undamped pole at {omega_r:g} eV")
    lam = (point.Y2_plus / (omega - (point.omega_plus - 1j * point.gamma_plus))
           + point.Y2_minus / (omega - (point.omega_minus - 1j * point.gamma_minus)))
    r, t, a = _rt_from_lambda(lam, gamma)
    bad = np.flatnonzero((a < -_CLOSURE_TOL) | (t > 1.0 + _CLOSURE_TOL))
    if bad.size:
        i = int(bad[0])
        _check_physical(float(r[i]), float(t[i]), float(a[i]), float(omega[i]))
    rows = tuple(SpectrumPoint(float(w), float(rr), float(tt), float(aa))
                 for w, rr, tt, aa in zip(omega, r, t, a))
    peaks = _find_bands(omega, t, point)
    return SpectrumTable(k=k, theta=theta, gamma=gamma, rows=rows, peaks=peaks)


def _half_max_extent(omega, t, idx: int) -> tuple[float, float]:
    """Contiguous interval around idx where T stays above half the peak value."""
    half = 0.5 * t[idx]
    left = idx
    while left > 0 and t[left - 1] >= half:
        left -= 1
    right = idx
    n = len(t)
    while right < n - 1 and t[right + 1] >= half:
        right += 1
    return float(omega[left]), float(omega[right])


def _find_bands(omega, t, point: PolaritonPoint) -> tuple[SpectrumPeak, ...]:
    n = len(t)
    maxima = [i for i in range(1, n - 1) if t[i] > t[i - 1] and t[i] >= t[i + 1]]
    if not maxima:
        return ()
    entries = []
    for i in maxima:
        lo, hi = _half_max_extent(omega, t, i)
        entries.append([float(omega[i]), float(t[i]), hi - lo])
    # Merge adjacent maxima whose spacing is below their mean half-max width.
    bands = [entries[0]]
    for pos, tpk, width in entries[1:]:
        prev = bands[-1]
        if pos - prev[0] < 0.5 * (width + prev[2]):
            if tpk > prev[1]:
                prev[0], prev[1] = pos, tpk
            prev[2] = max(prev[2], width, pos - prev[0] + width)
        else:
            bands.append([pos, tpk, width])
    peaks = []
    for pos, tpk, width in bands:
        branch = ("upper" if abs(pos - point.omega_plus) <= abs(pos - point.omega_minus)
                  else "lower")
        peaks.append(SpectrumPeak(branch=branch, omega_peak=pos, T_peak=tpk, fwhm=width))
    return tuple(peaks)
