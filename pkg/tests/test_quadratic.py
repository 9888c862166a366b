import math

import numpy as np
import pytest

from hosdt import clamp_sign, sgnmin, solve_signed_quadratic
from hosdt.sweep import MACHINE_EPSILON


def godunov_oracle(q, h, speed, s):
    """Independent reference: enumerate prefix sizes, solve each quadratic
    directly, and validate the upwind selection conditions.

    q/h must already be sorted so s*q ascends; infinite entries encode absent
    neighbors and are never part of a valid prefix.
    """
    finite = [i for i, v in enumerate(q) if math.isfinite(v)]
    assert finite, "oracle needs at least one finite neighbor"
    candidates = []
    for k in range(1, len(finite) + 1):
        qs = [q[i] for i in finite[:k]]
        hs = [h[i] for i in finite[:k]]
        a = sum(1.0 / hh**2 for hh in hs)
        b = sum(-2.0 * qq / hh**2 for qq, hh in zip(qs, hs))
        c = sum(qq**2 / hh**2 for qq, hh in zip(qs, hs)) - 1.0 / speed**2
        disc = b * b - 4.0 * a * c
        if disc < 0:
            continue
        phi = (-b + s * math.sqrt(disc)) / (2.0 * a)
        # all included terms must be upwind-active, the next one inactive
        if any(s * phi <= s * qq - 1e-12 for qq in qs):
            continue
        if k < len(finite) and s * phi > s * q[finite[k]] + 1e-12:
            continue
        candidates.append(phi)
    assert candidates, "oracle found no admissible prefix"
    return candidates


class TestSgnmin:
    def test_positive_takes_min(self):
        assert sgnmin(1.0, 2.0, 1) == 1.0

    def test_negative_takes_max(self):
        assert sgnmin(-1.0, -2.0, -1) == -1.0

    def test_negative_sign_on_positive_values(self):
        assert sgnmin(3.0, 5.0, -1) == 5.0

    def test_commutative_and_mirror(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            a, b = rng.uniform(-4, 4, size=2)
            s = int(rng.choice([-1, 1]))
            assert sgnmin(a, b, s) == sgnmin(b, a, s)
            assert sgnmin(a, b, s) == -sgnmin(-a, -b, -s)


class TestClampSign:
    def test_pass_through(self):
        assert clamp_sign(0.7, 1, MACHINE_EPSILON) == 0.7

    def test_wrong_sign_clamps_to_epsilon(self):
        assert clamp_sign(-0.3, 1, MACHINE_EPSILON) == MACHINE_EPSILON

    def test_mirror(self):
        assert clamp_sign(0.3, -1, MACHINE_EPSILON) == -MACHINE_EPSILON


class TestSolveSignedQuadratic:
    def test_unit_step(self):
        assert solve_signed_quadratic([0.0], [1.0], 1.0, 1) == 1.0

    def test_two_equal_neighbors(self):
        assert solve_signed_quadratic([0.0, 0.0], [1.0, 1.0], 1.0, 1) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-15
        )

    def test_causality_break_skips_far_neighbor(self):
        assert solve_signed_quadratic([0.0, 2.0], [1.0, 1.0], 1.0, 1) == 1.0

    def test_two_active_neighbors(self):
        assert solve_signed_quadratic([0.0, 0.5], [1.0, 1.0], 1.0, 1) == pytest.approx(
            (1.0 + math.sqrt(7.0)) / 4.0, abs=1e-15
        )

    def test_negative_sign_mirror(self):
        assert solve_signed_quadratic([-1.0], [1.0], 1.0, -1) == -2.0

    def test_absent_neighbors_sort_last_and_are_skipped(self):
        assert solve_signed_quadratic([0.0, np.inf], [1.0, 1.0], 1.0, 1) == 1.0
        assert solve_signed_quadratic([0.0, -np.inf], [1.0, 1.0], 1.0, -1) == -1.0

    def test_all_infinite_raises(self):
        with pytest.raises(ValueError, match="no upwind neighbor"):
            solve_signed_quadratic([np.inf, np.inf], [1.0, 1.0], 1.0, 1)

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError, match="sign"):
            solve_signed_quadratic([0.0], [1.0], 1.0, 2)

    def test_causality_of_result(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            s = int(rng.choice([-1, 1]))
            n = int(rng.integers(1, 4))
            vals = rng.uniform(-3, 3, size=n)
            order = np.argsort(s * vals)
            q = vals[order]
            h = rng.uniform(0.2, 3.0, size=n)[order]
            speed = float(rng.uniform(0.5, 2.0))
            phi = solve_signed_quadratic(q, h, speed, s)
            assert s * phi > s * q[0]

    def test_agrees_with_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(2000):
            s = int(rng.choice([-1, 1]))
            n = int(rng.integers(1, 4))
            vals = rng.uniform(-3, 3, size=n)
            absent = rng.random(size=n) < 0.25
            if absent.all():
                absent[rng.integers(n)] = False
            vals[absent] = s * np.inf
            order = np.argsort(s * vals, kind="stable")
            q = vals[order]
            h = rng.uniform(0.2, 3.0, size=n)[order]
            speed = float(rng.uniform(0.5, 2.0))
            phi = solve_signed_quadratic(q, h, speed, s)
            candidates = godunov_oracle(list(q), list(h), speed, s)
            assert min(abs(phi - c) for c in candidates) < 1e-12
