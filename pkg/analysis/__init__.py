"""
Analysis Package
Weight grid, decomposition sweep and complexity regression.
"""

from .weights import enumerate_weightings
from .sweep import (
    DecompositionSweep,
    SWEEP_COLUMNS,
    best_per_n,
    records_to_frame,
    sweep,
    write_sweep_csv,
)
from .regression import (
    design_matrix,
    ols_fit,
    regression_to_dict,
    render_regression_table,
)

__all__ = [
    "enumerate_weightings",
    "DecompositionSweep",
    "SWEEP_COLUMNS",
    "best_per_n",
    "records_to_frame",
    "sweep",
    "write_sweep_csv",
    "design_matrix",
    "ols_fit",
    "regression_to_dict",
    "render_regression_table",
]
