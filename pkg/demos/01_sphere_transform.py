"""Transform a binarized sphere and compare against the analytic distance field.

The classic exact distance transform of a binary mask is quantized: distances
only take values realizable between voxel centers, so gradients band and
downstream geometry gets noisy.  This walk-through builds a sphere mask,
embeds it two ways, and measures how much the sweeping correction helps.

Run:  python3 demos/01_sphere_transform.py
"""

import numpy as np

from hosdt import (
    analytic_sphere,
    averaged_init,
    binarize,
    eikonal_residual_stats,
    error_norms,
    minimize_l1_shift,
    recovery_check,
    run,
    SolverConfig,
)

# A 50^3 lattice at 2 mm spacing holding a 25 mm sphere: the same setup the
# bundled studies use, small enough to run in a few seconds.
h = 2.0
n = 50
center = (h * (n // 2),) * 3
reference = analytic_sphere((n,) * 3, (h,) * 3, center, 25.0)
image = binarize(reference)
print(f"lattice {n}^3 at h={h} mm, sphere r=25 mm, "
      f"{int(image.labels.sum())} foreground voxels")

# Stage 1: exact Euclidean initialization, averaged so no voxel is zero and
# the implicit surface runs between the voxels.
phi0 = averaged_init(image)
print("\ninitialization (averaged exact distance transform)")
print("  recovers the mask exactly:", recovery_check(phi0, image))
l1, linf = error_norms(phi0, reference, band=15.0)
print(f"  banded error vs analytic: l1={l1:.3f} mm, linf={linf:.3f} mm")
med, p95 = eikonal_residual_stats(phi0, band=15.0, exclusion=2 * h, centers=[center])
print(f"  | |grad phi| - 1 |: median={med:.4f}, p95={p95:.4f}   <- quantization noise")

# Stage 2: upwind sweeping correction with fifth-order WENO neighbor values.
phi, report = run(image, SolverConfig(order=5, max_iterations=30))
print(f"\nsweeping correction: {report.iterations_run} iterations, "
      f"{report.elapsed_seconds:.1f} s")
print("  first per-iteration errors:",
      ", ".join(f"{e:.4f}" for e in report.error_history[:5]))
print("  still recovers the mask exactly:", recovery_check(phi, image))
l1, linf = error_norms(phi, reference, band=15.0)
print(f"  banded error vs analytic: l1={l1:.3f} mm, linf={linf:.3f} mm")
med, p95 = eikonal_residual_stats(phi, band=15.0, exclusion=2 * h, centers=[center])
print(f"  | |grad phi| - 1 |: median={med:.4f}, p95={p95:.4f}")

# The embedding is only defined up to a sub-voxel constant (any shift smaller
# than half a voxel recovers the same mask), so the fair shape comparison
# removes the best constant first.
corrected, a_star = minimize_l1_shift(phi, reference, band=15.0)
l1c, _ = error_norms(corrected, reference, band=15.0)
print(f"\nafter removing the l1-minimizing constant ({a_star:+.3f} mm): l1={l1c:.3f} mm")
print("gradient noise drops by an order of magnitude while the zero level set",
      "still reproduces the input mask bit for bit.")
