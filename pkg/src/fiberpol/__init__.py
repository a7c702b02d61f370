"""Excitons and fiber polaritons of two parallel 1D atom chains coupled to a
nanofiber mode: dispersions, damping rates, and linear transmission spectra,
with every analytic lattice sum cross-checked against independent brute-force
evaluations."""

__version__ = "0.1.0"

from .core import (
    COULOMB,
    HBAR_C,
    UNITS,
    ConfigError,
    DipoleOrientation,
    FiberParams,
    LatticeGeometry,
    ModelParams,
    NumericsParams,
    UnitSystem,
    default_params,
    load_config,
    resonance_k0,
    serialize_config,
)
from .excitons import (
    ExcitonBranch,
    RootNotFoundError,
    SplittingReport,
    critical_wavenumber,
    exciton_damping,
    exciton_damping_unclamped,
    exciton_energy,
    sa_splitting,
    single_atom_damping,
)
from .fiber_polaritons import (
    PolaritonPoint,
    coupling_strength,
    photon_energy,
    polariton_branches,
    polariton_damping,
)
from .lattice_sums import (
    CouplingValue,
    SumMethod,
    d_tensor_element,
    dipole_coupling_free,
    inter_dynamical_matrix,
    intra_dynamical_matrix,
    s_function,
)
from .oracle import (
    DispersionMatchReport,
    FiniteHamiltonian,
    build_finite_hamiltonian,
    compare_dispersion,
    diagonalize_symmetric,
    finite_dynamical_matrices,
)
from .specialfn import (
    SeriesNonconvergence,
    SeriesResult,
    bessel_k,
    cos_cubed_series,
    zeta3,
)
from .spectra import (
    PoleEvaluationError,
    SpectrumPeak,
    SpectrumPoint,
    SpectrumTable,
    response_lambda,
    spectrum_point,
    spectrum_sweep,
)
