"""Numerical laboratory for perturbations of traveling waves in 1+1
semilinear and quasilinear wave systems.

The package evolves the perturbation equations in Cartesian form with a
method-of-lines RK4 scheme, tracks a weighted null-derivative energy
hierarchy (slice and spacetime parts) up to third order, checks the
coefficient order conditions and hyperbolicity margins that the stability
mechanism rests on, and exposes experiment drivers plus a small CLI.
"""

from .config import (
    DATA_KINDS,
    EXPERIMENT_KINDS,
    ExperimentConfig,
    config_to_dict,
    dump_config,
    load_config,
    parse_config,
)
from .energy import (
    COMPONENT_NAMES,
    EnergyConfig,
    EnergyReport,
    WeightSet,
    accumulate_spacetime,
    gronwall_verify,
    initial_smallness,
    make_weights,
    slice_energy,
    sobolev_check,
)
from .errors import (
    BoundaryContaminationError,
    BlowupError,
    ConfigError,
    EvaluationFailureError,
    HypothesisViolationError,
    NoBoostFoundError,
    NonSymmetricCoefficientsError,
    SingularCoefficientError,
    StudyInvalidError,
    SupportViolationError,
    UnknownNameError,
    WavestabError,
)
from .experiments import (
    RunSummary,
    run_experiment,
    run_sweep,
    summary_to_dict,
    write_energy_csv,
)
from .geometry import (
    MultiIndex,
    NullPoint,
    RegionKind,
    RegionSpec,
    SampledField,
    apply_null_derivative,
    bracket,
    from_null,
    fubini_residual,
    integrate_region,
    to_null,
)
from .profiles import (
    DecayReport,
    TravelingWaveProfile,
    builtin_profile,
    decay_report,
    verify_exact_solution,
)
from .solver import (
    ConvergenceReport,
    GridSpec,
    Termination,
    Trajectory,
    convergence_study,
    init_state,
    run,
    step,
)
from .systems import (
    BoostMap,
    CoefficientSet,
    HyperbolicityReport,
    StructureReport,
    SystemKind,
    boost_grid,
    builtin_system,
    cartesian_coefficients,
    check_structure,
    find_boost,
    hyperbolicity_margin,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # config
    "DATA_KINDS", "EXPERIMENT_KINDS", "ExperimentConfig", "config_to_dict",
    "dump_config", "load_config", "parse_config",
    # energy
    "COMPONENT_NAMES", "EnergyConfig", "EnergyReport", "WeightSet",
    "accumulate_spacetime", "gronwall_verify", "initial_smallness",
    "make_weights", "slice_energy", "sobolev_check",
    # errors
    "BoundaryContaminationError", "BlowupError", "ConfigError",
    "EvaluationFailureError", "HypothesisViolationError", "NoBoostFoundError",
    "NonSymmetricCoefficientsError", "SingularCoefficientError",
    "StudyInvalidError", "SupportViolationError", "UnknownNameError",
    "WavestabError",
    # experiments
    "RunSummary", "run_experiment", "run_sweep", "summary_to_dict",
    "write_energy_csv",
    # geometry
    "MultiIndex", "NullPoint", "RegionKind", "RegionSpec", "SampledField",
    "apply_null_derivative", "bracket", "from_null", "fubini_residual",
    "integrate_region", "to_null",
    # profiles
    "DecayReport", "TravelingWaveProfile", "builtin_profile", "decay_report",
    "verify_exact_solution",
    # solver
    "ConvergenceReport", "GridSpec", "Termination", "Trajectory",
    "convergence_study", "init_state", "run", "step",
    # systems
    "BoostMap", "CoefficientSet", "HyperbolicityReport", "StructureReport",
    "SystemKind", "boost_grid", "builtin_system", "cartesian_coefficients",
    "check_structure", "find_boost", "hyperbolicity_margin",
]
