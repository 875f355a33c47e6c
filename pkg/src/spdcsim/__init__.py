"""Type-II collinear SPDC two-photon states under dispersion.

Numerical and Gaussian-model joint spectral/temporal amplitudes, Schmidt
analysis, Hong-Ou-Mandel interference, the heralded-photon chronocyclic
Wigner function and dispersive propagation.
"""

__version__ = "0.1.0"

from .dispersion import CrystalModel, BulkMediumModel, TaylorCoefficients, solve_phasematching, taylor_coefficients
from .entangle import schmidt_gaussian, schmidt_number, schmidt_numeric, fedorov_ratio
from .errors import DomainError, GridError, NumericalError, SpdcError, UsageError
from .grids import FrequencyGrid, JointAmplitudeGrid, TimeGrid
from .hom import hom_dip_analytic, hom_dip_numeric, reduced_density
from .presets import list_presets, medium, preset
from .propagate import PropagationScenario, duration_sweep, migration_sweep, propagate_state, suppression_report
from .spectral import SourceConfig, auto_grid, build_jsa_grid, eval_gaussian_jsa, gaussian_params
from .temporal import erf_jta_grid, erf_params, gaussian_jta, jta_via_transform, z_envelope
from .wigner import cwf_analytic, cwf_grid, cwf_marginals, cwf_numeric

__all__ = [
    "__version__", "CrystalModel", "BulkMediumModel", "TaylorCoefficients", "solve_phasematching",
    "taylor_coefficients", "schmidt_gaussian", "schmidt_number", "schmidt_numeric", "fedorov_ratio",
    "DomainError", "GridError", "NumericalError", "SpdcError", "UsageError", "FrequencyGrid",
    "JointAmplitudeGrid", "TimeGrid", "hom_dip_analytic", "hom_dip_numeric", "reduced_density",
    "list_presets", "medium", "preset", "PropagationScenario", "duration_sweep", "migration_sweep",
    "propagate_state", "suppression_report", "SourceConfig", "auto_grid", "build_jsa_grid",
    "eval_gaussian_jsa", "gaussian_params", "erf_jta_grid", "erf_params", "gaussian_jta",
    "jta_via_transform", "z_envelope", "cwf_analytic", "cwf_grid", "cwf_marginals", "cwf_numeric",
]
