"""Analytic references, error norms, and field diagnostics for the sphere studies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import BinaryGrid, ScalarField, voxel_centers

__all__ = [
    "StudyRecord",
    "analytic_sphere",
    "binarize",
    "error_norms",
    "minimize_l1_shift",
    "order_estimate",
    "add_order_m_noise",
    "recovery_check",
    "eikonal_residual_stats",
]


@dataclass
class StudyRecord:
    """One row of a study output: norms (mm) at a spacing, with estimated orders."""

    h: float
    l1: float
    linf: float
    order_l1: Optional[float]
    order_linf: Optional[float]
    corrected: bool
    iterations: int
    band: float

    def __post_init__(self):
        if self.l1 < 0:
            raise ValueError("l1 must be non-negative")
        if self.linf < self.l1:
            raise ValueError("linf (max error) cannot be below l1 (mean error)")


def analytic_sphere(dims, spacing, center, radius: float) -> ScalarField:
    """Ideal signed distance to a sphere, negative inside: |x - c| - r at voxel centers."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    dims = tuple(int(n) for n in dims)
    center = tuple(float(c) for c in np.atleast_1d(center))
    if len(center) != len(dims):
        raise ValueError("center must have one coordinate per axis")
    axes = voxel_centers(dims, spacing)
    sq = np.zeros(dims, dtype=np.float64)
    for k, line in enumerate(axes):
        shape = [1] * len(dims)
        shape[k] = -1
        sq = sq + (line - center[k]).reshape(shape) ** 2
    return ScalarField(np.sqrt(sq) - radius, spacing)


def binarize(phi: ScalarField) -> BinaryGrid:
    """Threshold at zero: foreground where phi < 0 (exact zeros are background)."""
    return BinaryGrid(phi.values < 0, phi.spacing)


def _band_mask(reference: ScalarField, band: float) -> np.ndarray:
    mask = np.abs(reference.values) <= band
    if not mask.any():
        raise ValueError(f"band of width {band} mm contains no voxels")
    return mask


def _check_same_lattice(a: ScalarField, b: ScalarField):
    if a.dims != b.dims:
        raise ValueError(f"field shapes differ: {a.dims} vs {b.dims}")
    if a.spacing != b.spacing:
        raise ValueError(f"field spacings differ: {a.spacing} vs {b.spacing}")


def error_norms(approx: ScalarField, reference: ScalarField, band: float):
    """(l1, linf) of |approx - reference| over voxels with |reference| <= band.

    l1 is the mean per-voxel absolute error (not the image norm); linf the max.
    """
    _check_same_lattice(approx, reference)
    mask = _band_mask(reference, band)
    err = np.abs(approx.values[mask] - reference.values[mask])
    return float(err.mean()), float(err.max())


def minimize_l1_shift(approx: ScalarField, reference: ScalarField, band: float):
    """Subtract the constant minimizing the banded l1 error: the residual median.

    Even counts take the lower median.  Returns (corrected field, constant).
    """
    _check_same_lattice(approx, reference)
    mask = _band_mask(reference, band)
    residual = np.sort(approx.values[mask] - reference.values[mask])
    a_star = float(residual[(residual.size - 1) // 2])
    return ScalarField(approx.values - a_star, approx.spacing), a_star


def order_estimate(norm_h: float, norm_h2: float) -> float:
    """Observed order of accuracy from norms at spacings h and h/2: log2 of their ratio."""
    if norm_h2 == 0:
        raise ValueError("exact solution: order is not measurable from a zero norm")
    if norm_h <= 0 or norm_h2 < 0:
        raise ValueError("norms must be positive")
    return float(np.log2(norm_h / norm_h2))


def add_order_m_noise(phi: ScalarField, m: int, h: float) -> ScalarField:
    """Perturb a 3-D field with a plane-wave of amplitude h^m and frequency 1/(10h).

    Adds h^m * sin(2*pi/(10h) * (x+y+z)) at physical voxel centers, mimicking
    an error term of prescribed order m.
    """
    if phi.ndim != 3:
        raise ValueError("noise model is 3-D: the phase sums three coordinates")
    if m < 0:
        raise ValueError("noise order must be non-negative")
    if not h > 0:
        raise ValueError("spacing must be positive")
    x, y, z = voxel_centers(phi.dims, phi.spacing)
    phase = (2.0 * np.pi / (10.0 * h)) * (
        x[:, None, None] + y[None, :, None] + z[None, None, :]
    )
    return ScalarField(phi.values + h**m * np.sin(phase), phi.spacing)


def recovery_check(phi: ScalarField, image: BinaryGrid) -> bool:
    """True iff thresholding the embedding at zero reproduces the binary image exactly."""
    if phi.dims != image.dims:
        raise ValueError(f"shapes differ: {phi.dims} vs {image.dims}")
    return bool(((phi.values < 0) == image.labels).all())


def _local_magnitude_maxima(values: np.ndarray) -> np.ndarray:
    """Voxels whose |value| is >= every face neighbor's (plateau-inclusive)."""
    mag = np.abs(values)
    is_max = np.ones(values.shape, dtype=bool)
    for axis in range(values.ndim):
        lo = [slice(None)] * values.ndim
        hi = [slice(None)] * values.ndim
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        is_max[tuple(lo)] &= mag[tuple(lo)] >= mag[tuple(hi)]
        is_max[tuple(hi)] &= mag[tuple(hi)] >= mag[tuple(lo)]
    return is_max


def eikonal_residual_stats(
    phi: ScalarField,
    band: float,
    exclusion: float,
    centers=None,
):
    """(median, p95) of | |grad phi| - 1 | over the banded, shock-free interior.

    The gradient uses central differences.  Retained voxels satisfy
    |phi| <= band, lie at least 3 voxels from the domain boundary, and are
    farther than ``exclusion`` (mm) from every excluded point.  ``centers``
    gives those points explicitly (physical mm coordinates); when omitted,
    local maxima of |phi| are detected and used, since characteristics
    collide there and the distance function is not differentiable.
    """
    values = phi.values
    grads = np.gradient(values, *phi.spacing)
    if phi.ndim == 1:
        grads = [grads]
    norm = np.sqrt(sum(g * g for g in grads))
    residual = np.abs(norm - 1.0)

    retained = np.abs(values) <= band
    margin = np.zeros(phi.dims, dtype=bool)
    interior = tuple(slice(3, n - 3) for n in phi.dims)
    if all(n > 6 for n in phi.dims):
        margin[interior] = True
    retained &= margin

    if centers is None:
        shock_idx = np.argwhere(_local_magnitude_maxima(values))
        centers = [
            tuple((i + 0.5) * h for i, h in zip(idx, phi.spacing)) for idx in shock_idx
        ]
    axes = voxel_centers(phi.dims, phi.spacing)
    for center in centers:
        sq = np.zeros(phi.dims, dtype=np.float64)
        for k, line in enumerate(axes):
            shape = [1] * phi.ndim
            shape[k] = -1
            sq = sq + (line - center[k]).reshape(shape) ** 2
        retained &= sq > exclusion * exclusion

    if not retained.any():
        raise ValueError("no voxels retained for the residual statistics")
    kept = residual[retained]
    return float(np.median(kept)), float(np.percentile(kept, 95))
