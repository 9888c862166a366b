"""High-order signed distance transforms of sampled binary volumes.

A binary image is first embedded with the average of two one-sided exact
Euclidean distance transforms, then corrected by an upwind sweeping solver
(first-order or WENO5 Godunov updates) so the result satisfies the distance
equation to high order away from shocks while still thresholding back to the
input image exactly.
"""

from .grid import (
    BinaryGrid,
    ScalarField,
    sample_with_extrapolation,
    sign_field,
    sweep_orderings,
    voxel_centers,
)
from .edt import (
    averaged_init,
    brute_force_squared_edt,
    exact_point_edt,
    exact_squared_edt,
    signed_edt,
    surface_set,
)
from .sweep import (
    MACHINE_EPSILON,
    SolverConfig,
    SolverReport,
    clamp_sign,
    run,
    sgnmin,
    shift_correction,
    solve_signed_quadratic,
    sweep_once,
    upwind_neighbor_first_order,
    upwind_neighbor_high_order,
    weno5_one_sided,
)
from .evaluation import (
    StudyRecord,
    add_order_m_noise,
    analytic_sphere,
    binarize,
    eikonal_residual_stats,
    error_norms,
    minimize_l1_shift,
    order_estimate,
    recovery_check,
)
from .io import read_study_csv, read_volume, write_study_csv, write_volume

__version__ = "0.1.0"

__all__ = [
    "BinaryGrid",
    "ScalarField",
    "SolverConfig",
    "SolverReport",
    "StudyRecord",
    "MACHINE_EPSILON",
    "add_order_m_noise",
    "analytic_sphere",
    "averaged_init",
    "binarize",
    "brute_force_squared_edt",
    "clamp_sign",
    "eikonal_residual_stats",
    "error_norms",
    "exact_point_edt",
    "exact_squared_edt",
    "minimize_l1_shift",
    "order_estimate",
    "read_study_csv",
    "read_volume",
    "recovery_check",
    "run",
    "sample_with_extrapolation",
    "sgnmin",
    "shift_correction",
    "sign_field",
    "signed_edt",
    "solve_signed_quadratic",
    "surface_set",
    "sweep_once",
    "sweep_orderings",
    "upwind_neighbor_first_order",
    "upwind_neighbor_high_order",
    "voxel_centers",
    "weno5_one_sided",
    "write_study_csv",
    "write_volume",
]
