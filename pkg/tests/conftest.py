import numpy as np
import pytest

from hosdt import BinaryGrid


def random_image(rng, d=None, min_size=2, max_size=24, p=None):
    """Random binary image with both phases present."""
    if d is None:
        d = int(rng.integers(1, 4))
    dims = tuple(int(rng.integers(min_size, max_size + 1)) for _ in range(d))
    if p is None:
        p = float(rng.uniform(0.15, 0.85))
    labels = rng.random(dims) < p
    if labels.all():
        labels.flat[rng.integers(labels.size)] = False
    if not labels.any():
        labels.flat[rng.integers(labels.size)] = True
    spacing = tuple(float(rng.uniform(0.5, 2.0)) for _ in range(d))
    return BinaryGrid(labels, spacing)


@pytest.fixture(scope="session")
def order_solves():
    """Full order-of-accuracy study (h = 8,4,2,1, order 5, 100 iterations).

    Session-scoped: this is the expensive protocol shared by the acceptance
    criteria that reference it.
    """
    from hosdt.studies import order_study

    return order_study()


@pytest.fixture(scope="session")
def noise_result():
    """Noise-comparison study at h=0.1, r=2.5 (shared by acceptance)."""
    from hosdt.studies import noise_study

    return noise_study()
