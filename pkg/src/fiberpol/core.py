"""Unit system, physical constants, and model parameters.

Everything in this package works in a single unit system:

* energies in eV,
* lengths in Angstrom,
* dipole moments in e*Angstrom,
* wave numbers in 1/Angstrom,
* damping rates as energies (hbar * rate, eV).

The two combinations of fundamental constants that actually appear in the
formulas are ``hbar*c`` and ``e^2/(4 pi eps0)``; both are fixed here and are
not configurable.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

HBAR_C = 1973.2698  # eV * Angstrom
COULOMB = 14.399645  # eV * Angstrom, e^2 / (4 pi eps0)
HBAR_EVS = 6.582119569e-16  # eV * s, used only to convert energies to rad/s


@dataclass(frozen=True)
class UnitSystem:
    """The fixed eV / Angstrom / e*Angstrom unit system."""

    hbar_c: float = HBAR_C
    coulomb_factor: float = COULOMB


UNITS = UnitSystem()


class ConfigError(ValueError):
    """Raised for malformed configuration documents or invariant violations."""


@dataclass(frozen=True)
class LatticeGeometry:
    """Two parallel 1D lattices along x, separated by ``d`` in z.

    a        lattice constant (Angstrom)
    d        distance between the two chains (Angstrom)
    b        chain to fiber-surface distance (Angstrom); informational only,
             the fiber mode structure enters solely through ``u_b``
    n_sites  finite lattice size used by the brute-force validator
    """

    a: float
    d: float
    b: float = 0.0
    n_sites: int = 32

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError("geometry invariant violated: a > 0")
        if not self.d > 0:
            raise ConfigError("geometry invariant violated: d > 0")
        if self.n_sites < 1:
            raise ConfigError("geometry invariant violated: n_sites >= 1")
        if self.d <= self.a:
            # The interlattice asymptotics assume d >> a; flag, do not reject.
            warnings.warn(
                "lattice separation d <= a: the asymptotic interlattice "
                "formula is outside its regime",
                UserWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class DipoleOrientation:
    """Transition dipole of magnitude ``mu`` at angle ``theta`` to the chains.

    ``theta`` is in radians.  The dispersion formulas keep the dipole in the
    x-z plane (mu_y = 0); a nonzero ``mu_y`` is allowed for raw lattice sums,
    in which case the in-plane part sqrt(mu^2 - mu_y^2) is split by theta so
    that mu_x^2 + mu_y^2 + mu_z^2 = mu^2 always holds.
    """

    mu: float
    theta: float
    mu_y: float = 0.0

    def __post_init__(self):
        if not self.mu >= 0:
            raise ConfigError("dipole invariant violated: mu >= 0")
        if abs(self.mu_y) > self.mu:
            raise ConfigError("dipole invariant violated: |mu_y| <= mu")

    @property
    def mu_inplane(self) -> float:
        return math.sqrt(max(self.mu * self.mu - self.mu_y * self.mu_y, 0.0))

    @property
    def mu_x(self) -> float:
        return self.mu_inplane * math.cos(self.theta)

    @property
    def mu_z(self) -> float:
        return self.mu_inplane * math.sin(self.theta)

    def components(self) -> tuple[float, float, float]:
        return (self.mu_x, self.mu_y, self.mu_z)


@dataclass(frozen=True)
class FiberParams:
    """Single guided fiber mode in the simplified transverse-confinement picture.

    epsilon    average dielectric constant of the fiber
    k0         transverse-confinement wave number (1/Angstrom)
    mode_area  mode cross area S (Angstrom^2)
    u_b        dimensionless mode amplitude at the atom positions
    gamma_ph   photon damping hbar*Gamma_ph (eV)
    """

    epsilon: float
    k0: float
    mode_area: float
    u_b: float
    gamma_ph: float

    def __post_init__(self):
        if not self.epsilon >= 1:
            raise ConfigError("fiber invariant violated: epsilon >= 1")
        if not self.k0 > 0:
            raise ConfigError("fiber invariant violated: k0 > 0")
        if not self.mode_area > 0:
            raise ConfigError("fiber invariant violated: mode_area_S > 0")
        if not 0 < self.u_b <= 1:
            raise ConfigError("fiber invariant violated: 0 < u_b <= 1")
        if not self.gamma_ph >= 0:
            raise ConfigError("fiber invariant violated: gamma_ph >= 0")


@dataclass(frozen=True)
class NumericsParams:
    """Tolerances and cutoffs for the lattice sums and root finds."""

    sum_tol: float = 1e-10  # relative tolerance of lattice series
    max_terms: int = 1_000_000  # truncation cap of direct real-space sums
    bessel_n_max: int = 8  # dual-series index cap (terms decay ~ exp(-2 pi d n / a))
    root_tol: float = 1e-12  # relative tolerance of bracketing root finds

    def __post_init__(self):
        if not self.sum_tol > 0:
            raise ConfigError("numerics invariant violated: sum_tol > 0")
        if not self.max_terms > 0:
            raise ConfigError("numerics invariant violated: max_terms > 0")
        if not self.bessel_n_max > 0:
            raise ConfigError("numerics invariant violated: bessel_n_max > 0")
        if not self.root_tol > 0:
            raise ConfigError("numerics invariant violated: root_tol > 0")


@dataclass(frozen=True)
class ModelParams:
    """Full physical configuration of the two-chain plus fiber system.

    atom_energy    two-level transition energy E_A (eV)
    edge_coupling  fiber edge coupling bandwidth hbar*gamma (eV)
    """

    geometry: LatticeGeometry
    dipole: DipoleOrientation
    fiber: FiberParams
    atom_energy: float
    edge_coupling: float
    numerics: NumericsParams = NumericsParams()
    # Bookkeeping for exact config round trips; not part of value equality.
    defaulted_keys: tuple = field(default=(), compare=False, repr=False)
    source_items: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.atom_energy > 0:
            raise ConfigError("model invariant violated: E_A > 0")
        if not self.edge_coupling >= 0:
            raise ConfigError("model invariant violated: hbar_gamma >= 0")


def resonance_k0(atom_energy: float, epsilon: float) -> float:
    """Transverse wave number that puts the k=0 photon in resonance with E_A.

    Returns sqrt(epsilon) * E_A / (hbar c), in 1/Angstrom.
    """
    if not atom_energy > 0:
        raise ConfigError("resonance_k0 requires E_A > 0")
    if not epsilon >= 1:
        raise ConfigError("resonance_k0 requires epsilon >= 1")
    return math.sqrt(epsilon) * atom_energy / HBAR_C


# Flat key/value configuration schema.  Defaults reproduce the reference
# parameter set: a = 1000 A, d = 10 a, E_A = 1 eV, mu = 1 e*A at theta = 90 deg,
# epsilon = 3, S = 4 pi a^2, u(b) = 0.1, hbar*Gamma_ph = 1e-10 eV,
# hbar*gamma = 1e-6 eV.  b is never specified by the model and defaults to 0
# (informational only).
CONFIG_DEFAULTS = {
    "a_angstrom": 1000.0,
    "d_over_a": 10.0,
    "b_angstrom": 0.0,
    "n_sites": 32,
    "mu_eA": 1.0,
    "theta_deg": 90.0,
    "mu_y_eA": 0.0,
    "E_A_eV": 1.0,
    "epsilon": 3.0,
    "S_over_4pi_a2": 1.0,
    "u_b": 0.1,
    "hbar_gamma_ph_eV": 1e-10,
    "hbar_gamma_eV": 1e-6,
    "sum_tol": 1e-10,
    "max_terms": 1_000_000,
    "bessel_n_max": 8,
    "root_tol": 1e-12,
}

_INT_KEYS = {"n_sites", "max_terms", "bessel_n_max"}


def _read_document(source) -> dict:
    if isinstance(source, dict):
        return dict(source)
    if isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, str):
        path = Path(source)
        # A short string naming an existing file is a path, anything else is
        # treated as JSON text.
        if len(source) < 4096 and "\n" not in source and path.is_file():
            text = path.read_text()
        else:
            text = source
    else:
        raise ConfigError(f"unsupported config source type: {type(source).__name__}")
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a flat JSON object")
    return doc


def load_config(source="") -> ModelParams:
    """Build ModelParams from a flat JSON document (dict, text, or file path).

    Absent keys take the reference defaults; which keys were defaulted is
    recorded on the result.  Unknown keys are rejected.
    """
    doc = _read_document(source)
    unknown = sorted(set(doc) - set(CONFIG_DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    for key, value in doc.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key '{key}' must be a number")
        if key in _INT_KEYS and int(value) != value:
            raise ConfigError(f"config key '{key}' must be an integer")

    merged = dict(CONFIG_DEFAULTS)
    merged.update(doc)
    defaulted = tuple(sorted(set(CONFIG_DEFAULTS) - set(doc)))

    a = float(merged["a_angstrom"])
    geometry = LatticeGeometry(
        a=a,
        d=a * float(merged["d_over_a"]),
        b=float(merged["b_angstrom"]),
        n_sites=int(merged["n_sites"]),
    )
    dipole = DipoleOrientation(
        mu=float(merged["mu_eA"]),
        theta=math.radians(float(merged["theta_deg"])),
        mu_y=float(merged["mu_y_eA"]),
    )
    atom_energy = float(merged["E_A_eV"])
    epsilon = float(merged["epsilon"])
    fiber = FiberParams(
        epsilon=epsilon,
        k0=resonance_k0(atom_energy, epsilon),
        mode_area=float(merged["S_over_4pi_a2"]) * 4.0 * math.pi * a * a,
        u_b=float(merged["u_b"]),
        gamma_ph=float(merged["hbar_gamma_ph_eV"]),
    )
    numerics = NumericsParams(
        sum_tol=float(merged["sum_tol"]),
        max_terms=int(merged["max_terms"]),
        bessel_n_max=int(merged["bessel_n_max"]),
        root_tol=float(merged["root_tol"]),
    )
    return ModelParams(
        geometry=geometry,
        dipole=dipole,
        fiber=fiber,
        atom_energy=atom_energy,
        edge_coupling=float(merged["hbar_gamma_eV"]),
        numerics=numerics,
        defaulted_keys=defaulted,
        source_items=tuple(sorted(merged.items())),
    )


def default_params() -> ModelParams:
    """Reference parameter set (see CONFIG_DEFAULTS)."""
    return load_config({})


def serialize_config(params: ModelParams) -> dict:
    """Flat config dict that loads back to an identical ModelParams.

    Parameters built by load_config keep their raw source values, so the
    round trip is bit exact (re-deriving e.g. d_over_a = d / a can wobble by
    one ulp).
    """
    if params.source_items:
        return dict(params.source_items)
    a = params.geometry.a
    return {
        "a_angstrom": a,
        "d_over_a": params.geometry.d / a,
        "b_angstrom": params.geometry.b,
        "n_sites": params.geometry.n_sites,
        "mu_eA": params.dipole.mu,
        "theta_deg": math.degrees(params.dipole.theta),
        "mu_y_eA": params.dipole.mu_y,
        "E_A_eV": params.atom_energy,
        "epsilon": params.fiber.epsilon,
        "S_over_4pi_a2": params.fiber.mode_area / (4.0 * math.pi * a * a),
        "u_b": params.fiber.u_b,
        "hbar_gamma_ph_eV": params.fiber.gamma_ph,
        "hbar_gamma_eV": params.edge_coupling,
        "sum_tol": params.numerics.sum_tol,
        "max_terms": params.numerics.max_terms,
        "bessel_n_max": params.numerics.bessel_n_max,
        "root_tol": params.numerics.root_tol,
    }
