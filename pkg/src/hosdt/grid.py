"""n-dimensional lattice containers, sweep orderings, and stencil extrapolation.

Everything downstream (initialization, sweeping solver, evaluation) works on
the two containers defined here: a binary image with per-axis spacing and a
double-precision scalar embedding on the same lattice.  Arrays are stored in
C order (last axis fastest) throughout, including file I/O.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BinaryGrid",
    "ScalarField",
    "sign_field",
    "sweep_orderings",
    "sample_with_extrapolation",
    "voxel_centers",
]


def _check_geometry(shape, spacing):
    if len(shape) < 1:
        raise ValueError("grid needs at least one axis")
    if len(spacing) != len(shape):
        raise ValueError(
            f"spacing has {len(spacing)} entries for a {len(shape)}-d grid"
        )
    if any(n < 1 for n in shape):
        raise ValueError(f"axis sizes must be positive, got {tuple(shape)}")
    if any(not h > 0 for h in spacing):
        raise ValueError(f"spacing must be positive, got {tuple(spacing)}")


@dataclass(frozen=True)
class BinaryGrid:
    """Sampled binary image: boolean labels (True = foreground) plus voxel spacing in mm.

    ``labels`` is coerced to a C-contiguous boolean array; if it already is
    one, it is shared, not copied.
    """

    labels: np.ndarray
    spacing: tuple

    def __post_init__(self):
        labels = np.ascontiguousarray(self.labels, dtype=bool)
        spacing = tuple(float(h) for h in np.atleast_1d(self.spacing))
        _check_geometry(labels.shape, spacing)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self):
        return self.labels.shape

    @property
    def ndim(self):
        return self.labels.ndim

    @property
    def size(self):
        return self.labels.size

    def complement(self) -> "BinaryGrid":
        return BinaryGrid(~self.labels, self.spacing)


@dataclass(frozen=True)
class ScalarField:
    """Double-precision embedding on the same lattice as a :class:`BinaryGrid`.

    Values must be finite; transient infinities live only inside the solver's
    scalar routines, never in a field.  A C-contiguous float64 input array is
    shared, not copied, so in-place solvers can wrap their working buffer.
    """

    values: np.ndarray
    spacing: tuple

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        spacing = tuple(float(h) for h in np.atleast_1d(self.spacing))
        _check_geometry(values.shape, spacing)
        if not np.isfinite(values).all():
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self):
        return self.values.shape

    @property
    def ndim(self):
        return self.values.ndim

    @property
    def size(self):
        return self.values.size

    def copy(self) -> "ScalarField":
        return ScalarField(self.values.copy(), self.spacing)


def sign_field(image: BinaryGrid) -> np.ndarray:
    """Per-voxel intended sign of the embedding: +1 on background, -1 on foreground.

    Returned as an int8 array with the image's shape; never zero.
    """
    return np.where(image.labels, -1, 1).astype(np.int8)


def sweep_orderings(d: int) -> list:
    """All 2^d per-axis direction vectors used by the sweeping solver.

    Each ordering is a tuple with +1 (ascending) or -1 (descending) per axis.
    Axis 0 varies slowest, so for d=2 the list is (+,+), (+,-), (-,+), (-,-).
    """
    if d < 1:
        raise ValueError("dimensionality must be at least 1")
    return [tuple(dirs) for dirs in itertools.product((1, -1), repeat=d)]


def voxel_centers(dims, spacing) -> tuple:
    """Physical voxel-center coordinates per axis: (i + 1/2) * h, in mm.

    Cell-centered so that n * h equals the physical extent of the axis.
    """
    return tuple(
        (np.arange(n, dtype=np.float64) + 0.5) * h for n, h in zip(dims, spacing)
    )


def sample_with_extrapolation(field: ScalarField, index) -> float:
    """Field value at a (possibly out-of-domain) integer index vector.

    In-domain indices return the stored value.  An index k steps beyond the
    boundary along one axis returns ``edge + k * (edge - inner)`` where edge
    and inner are the outermost and second-outermost in-domain values along
    that axis.  Multi-axis excursions resolve one axis at a time, axis 0
    first, which reproduces affine fields exactly.
    """
    idx = tuple(int(i) for i in np.atleast_1d(index))
    if len(idx) != field.ndim:
        raise ValueError(f"index has {len(idx)} entries for a {field.ndim}-d field")
    return _sample(field.values, idx, 0)


def _sample(values, idx, axis):
    if axis == values.ndim:
        return float(values[idx])
    n = values.shape[axis]
    i = idx[axis]
    if 0 <= i < n:
        return _sample(values, idx, axis + 1)
    if n < 2:
        raise ValueError(
            f"degenerate axis {axis}: extrapolation needs at least 2 voxels"
        )
    if i < 0:
        k, edge, inner = -i, 0, 1
    else:
        k, edge, inner = i - (n - 1), n - 1, n - 2
    e = _sample(values, idx[:axis] + (edge,) + idx[axis + 1 :], axis + 1)
    g = _sample(values, idx[:axis] + (inner,) + idx[axis + 1 :], axis + 1)
    return e + k * (e - g)
