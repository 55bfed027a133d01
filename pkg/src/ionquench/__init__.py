"""Sudden-quench work statistics and nonequilibrium lag for a laser-driven
trapped ion, across carrier and sideband regimes."""

from .params import (
    HBAR,
    SPEED_OF_LIGHT,
    Branch,
    QuenchSpec,
    ReducedParams,
    ThermalSpec,
    TrapIonConfig,
    eta_from_geometry,
    nbar_beta_convert,
    reduce,
    reduced_from_ratios,
)
from .numerics import (
    CouplingValue,
    coupling_f,
    laguerre_assoc,
    lncosh,
    log_sum_exp,
    sqrt_shift,
)
from .spectra import (
    DenseQuench,
    EigenPair,
    SpectrumTable,
    dense_hamiltonians,
    displacement_element,
    displacement_matrix,
    edge_eigenvalues,
    sideband_eigenvalues,
    sideband_eigenvectors,
    spectrum_table,
)
from .workstats import (
    MomentEstimate,
    WorkMoments,
    WorkPMF,
    moments_analytic,
    moments_numeric,
    work_pmf_sideband,
)
from .thermo import (
    DivergenceReport,
    LagResult,
    LogPartition,
    LowTemperatureLimit,
    PhiValue,
    TruncationError,
    TruncationPolicy,
    TruncationReport,
    divergence_predicate,
    ln_partition_final,
    ln_partition_initial,
    low_temperature_limit,
    nonequilibrium_lag,
    nu_to_zero_limit,
    phi,
    small_eta_coupling_sq,
    small_eta_coupling_sq_leading,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR",
    "SPEED_OF_LIGHT",
    "Branch",
    "QuenchSpec",
    "ReducedParams",
    "ThermalSpec",
    "TrapIonConfig",
    "eta_from_geometry",
    "nbar_beta_convert",
    "reduce",
    "reduced_from_ratios",
    "CouplingValue",
    "coupling_f",
    "laguerre_assoc",
    "lncosh",
    "log_sum_exp",
    "sqrt_shift",
    "DenseQuench",
    "EigenPair",
    "SpectrumTable",
    "dense_hamiltonians",
    "displacement_element",
    "displacement_matrix",
    "edge_eigenvalues",
    "sideband_eigenvalues",
    "sideband_eigenvectors",
    "spectrum_table",
    "MomentEstimate",
    "WorkMoments",
    "WorkPMF",
    "moments_analytic",
    "moments_numeric",
    "work_pmf_sideband",
    "DivergenceReport",
    "LagResult",
    "LogPartition",
    "LowTemperatureLimit",
    "PhiValue",
    "TruncationError",
    "TruncationPolicy",
    "TruncationReport",
    "divergence_predicate",
    "ln_partition_final",
    "ln_partition_initial",
    "low_temperature_limit",
    "nonequilibrium_lag",
    "nu_to_zero_limit",
    "phi",
    "small_eta_coupling_sq",
    "small_eta_coupling_sq_leading",
]
