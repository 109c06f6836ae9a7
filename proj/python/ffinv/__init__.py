"""Focus-focus model systems and their semi-global invariants."""

from ._ffinv import (
    ModelFoliation,
    NumericError,
    ValidationError,
    analytic_return_times,
    build_model,
    extract_series,
    glue_map,
    momentum_map,
    monodromy_matrix,
    normal_form_flow,
    numeric_return_times,
    run_config,
    section_points,
)

__all__ = [
    "ModelFoliation",
    "NumericError",
    "ValidationError",
    "analytic_return_times",
    "build_model",
    "extract_series",
    "glue_map",
    "momentum_map",
    "monodromy_matrix",
    "normal_form_flow",
    "numeric_return_times",
    "run_config",
    "section_points",
]
