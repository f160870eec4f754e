"""Lifted-system iterative learning control with closed-form fast-forward.

The package models finite-horizon sampled systems in lifted (matrix) form,
runs iterative learning updates under three gain laws, evaluates when to
switch learning from a model to hardware, and inverts non-minimum-phase
plants by deleting the leading rows of the lifted map.
"""

from .config import (
    ExperimentConfig,
    PlantParams,
    TrajectoryShape,
    continuous_plant,
    load_config,
    write_config,
)
from .engine import (
    IterationHistory,
    IterationRecord,
    SpectralDecomposition,
    fast_forward,
    geometric_sum,
    run_hybrid,
    run_iterations,
    spectral_decompose,
)
from .errors import (
    ConfigError,
    DegenerateDeletionError,
    DimensionError,
    DivergenceError,
    EmptyHorizonError,
    EmptyInputError,
    InvalidParameterError,
    LiftedIlcError,
    NotSymmetricError,
    RankDeficiencyError,
    SingularSystemError,
    UndefinedDbError,
)
from .laws import (
    LAW_KINDS,
    GainMatrix,
    LearningLaw,
    StabilityMetrics,
    build_gain,
    iteration_matrix,
    stability_metrics,
    update_input,
)
from .lifted import (
    LiftedSystem,
    Trajectory,
    build_lifted,
    delete_rows,
    lifted_output,
    pseudo_inverse_input,
)
from .lti import (
    ContinuousStateSpace,
    DiscreteStateSpace,
    FirstOrderFeedbackSpec,
    analytic_first_order_response,
    discretize_zoh,
    first_order_closed_loop,
    make_second_order,
    make_third_order,
    sampled_zeros,
    simulate,
)
from .switching import SwitchReport, evaluate_switch, rms, to_db
from .experiments import (
    CSV_HEADER,
    FIGURE_IDS,
    RunArtifacts,
    build_desired_trajectory,
    build_initial_input,
    build_lifted_pair,
    reproduce_figure,
    run_experiment,
    unhandled_zero_warning,
    write_history_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "PlantParams",
    "TrajectoryShape",
    "continuous_plant",
    "load_config",
    "write_config",
    "IterationHistory",
    "IterationRecord",
    "SpectralDecomposition",
    "fast_forward",
    "geometric_sum",
    "run_hybrid",
    "run_iterations",
    "spectral_decompose",
    "ConfigError",
    "DegenerateDeletionError",
    "DimensionError",
    "DivergenceError",
    "EmptyHorizonError",
    "EmptyInputError",
    "InvalidParameterError",
    "LiftedIlcError",
    "NotSymmetricError",
    "RankDeficiencyError",
    "SingularSystemError",
    "UndefinedDbError",
    "LAW_KINDS",
    "GainMatrix",
    "LearningLaw",
    "StabilityMetrics",
    "build_gain",
    "iteration_matrix",
    "stability_metrics",
    "update_input",
    "LiftedSystem",
    "Trajectory",
    "build_lifted",
    "delete_rows",
    "lifted_output",
    "pseudo_inverse_input",
    "ContinuousStateSpace",
    "DiscreteStateSpace",
    "FirstOrderFeedbackSpec",
    "analytic_first_order_response",
    "discretize_zoh",
    "first_order_closed_loop",
    "make_second_order",
    "make_third_order",
    "sampled_zeros",
    "simulate",
    "SwitchReport",
    "evaluate_switch",
    "rms",
    "to_db",
    "CSV_HEADER",
    "FIGURE_IDS",
    "RunArtifacts",
    "build_desired_trajectory",
    "build_initial_input",
    "build_lifted_pair",
    "reproduce_figure",
    "run_experiment",
    "unhandled_zero_warning",
    "write_history_csv",
    "__version__",
]
