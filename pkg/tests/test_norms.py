"""Admissible pairs and discrete functionals vs brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlspinn import norms
from nlspinn.errors import DomainError, EmptyGrid, NonFinite
from nlspinn.norms import (
    SpaceTimeGrid,
    admissible_q_grid,
    j_h1,
    j_inf_h1,
    j_pq,
    pair_from_alpha,
    pair_from_q,
)


def brute_force_pq(values, p, q, weights, derivatives=None):
    """Nested power means evaluated with explicit python loops."""
    m, n = len(values), len(values[0])
    total = 0.0
    for l in range(m):
        inner = 0.0
        for j in range(n):
            term = abs(values[l][j]) ** q
            if derivatives is not None:
                term += abs(derivatives[l][j]) ** q
            inner += weights[l][j] * term
        total += (inner / n) ** (p / q)
    return (total / m) ** (1.0 / p)


class TestAdmissiblePairs:
    def test_cubic_pair_and_conjugates(self):
        pair = pair_from_alpha(3.0)
        assert (pair.p, pair.q) == (8.0, 4.0)
        assert pair.p_conj == 8.0 / 7.0
        assert pair.q_conj == 4.0 / 3.0

    def test_endpoints(self):
        assert pair_from_q(2.0).p == math.inf
        assert pair_from_q(math.inf).p == 4.0
        assert pair_from_q(math.inf).q_conj == 1.0

    def test_rejects_small_q(self):
        with pytest.raises(DomainError):
            pair_from_q(1.5)

    @given(st.floats(2.0, 100.0))
    @settings(max_examples=100, deadline=None)
    def test_admissibility_relation(self, q):
        pair = pair_from_q(q)
        if math.isfinite(pair.p):
            assert abs(2.0 / pair.p + 1.0 / pair.q - 0.5) < 1e-12
            assert abs(1.0 / pair.p + 1.0 / pair.p_conj - 1.0) < 1e-12
        assert abs(1.0 / pair.q + 1.0 / pair.q_conj - 1.0) < 1e-12

    def test_default_q_grid(self):
        qs = admissible_q_grid()
        assert qs[0] == 2.0 and qs[-1] == 100.0 and qs.size == 197
        assert np.allclose(np.diff(qs), 0.5)
        for q in qs[::14]:
            pair_from_q(q)  # every grid point is admissible

    def test_custom_grid(self):
        pairs = [pair_from_q(q) for q in (2.0, 4.0)]
        assert pairs[0].p == math.inf and pairs[1].p == 8.0


class TestH1Functionals:
    def test_zero_field(self):
        assert j_h1(np.zeros(5), np.zeros(5)) == 0.0

    def test_two_point_hand_value(self):
        # f(x) = x on {0, 1}: sqrt((1/2)((0 + 1) + (1 + 1))) = sqrt(1.5)
        value = j_h1(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
        assert np.isclose(value, np.sqrt(1.5))

    def test_identity_initial_data_vanishes(self):
        xs = np.linspace(-4, 4, 33)
        f = np.exp(-(xs**2)) * (1 + 1j)
        assert j_h1(f - f, np.zeros_like(f)) == 0.0

    def test_sup_variant_constant_field(self):
        vals = np.ones((4, 6))
        assert np.isclose(j_inf_h1(vals, np.zeros_like(vals)), 1.0)

    def test_sup_attained_at_largest_slice(self):
        times = np.array([0.0, 1.0])
        vals = times[:, None] * np.ones((2, 5))
        assert np.isclose(j_inf_h1(vals, np.zeros_like(vals)), 1.0)

    def test_zeroed_derivative_never_larger(self):
        rng = np.random.default_rng(0)
        vals = rng.normal(size=8) + 1j * rng.normal(size=8)
        derivs = rng.normal(size=8)
        assert j_h1(vals, np.zeros(8)) <= j_h1(vals, derivs) + 1e-15

    def test_empty_grid(self):
        with pytest.raises(EmptyGrid):
            j_h1(np.array([]), np.array([]))


class TestJpq:
    def test_constant_one(self):
        vals = np.ones((3, 4))
        for q in (2.5, 4.0, 9.0):
            assert np.isclose(j_pq(vals, pair_from_q(q)), 1.0)

    def test_single_sample(self):
        vals = np.array([[3.0 - 4.0j]])
        assert np.isclose(j_pq(vals, pair_from_alpha(3.0)), 5.0)

    def test_hand_evaluated_two_by_two(self):
        vals = np.array([[1.0, 0.0], [0.0, 1.0]])
        value = j_pq(vals, pair_from_alpha(3.0))
        assert np.isclose(value, 0.25**0.125)
        assert np.isclose(value, 0.840896, atol=5e-7)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            vals = rng.normal(size=(5, 7)) + 1j * rng.normal(size=(5, 7))
            weights = rng.uniform(0.0, 1.0, size=(5, 7))
            q = float(rng.uniform(2.0, 10.0))
            pair = pair_from_q(q)
            mine = j_pq(vals, pair, weights=weights)
            brute = brute_force_pq(vals, pair.p, pair.q, weights)
            assert abs(mine - brute) / max(brute, 1e-12) < 1e-12

    def test_sobolev_mode_matches_brute_force(self):
        rng = np.random.default_rng(13)
        vals = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        derivs = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        pair = pair_from_alpha(3.0)
        mine = j_pq(vals, pair, x_derivatives=derivs)
        brute = brute_force_pq(vals, pair.p, pair.q, np.ones((4, 6)), derivatives=derivs)
        assert abs(mine - brute) / brute < 1e-12

    @given(st.integers(0, 10_000), st.floats(0.01, 100.0))
    @settings(max_examples=60, deadline=None)
    def test_homogeneity(self, seed, scale):
        rng = np.random.default_rng(seed)
        vals = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        pair = pair_from_q(float(rng.uniform(2, 12)))
        assert np.isclose(j_pq(vals * scale, pair), scale * j_pq(vals, pair), rtol=1e-12)

    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_weight_monotonicity(self, seed):
        rng = np.random.default_rng(seed)
        vals = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        weights = rng.uniform(0.1, 1.0, size=(3, 5))
        pair = pair_from_q(float(rng.uniform(2, 12)))
        lowered = weights.copy()
        lowered[rng.integers(0, 3), rng.integers(0, 5)] *= rng.uniform(0, 1)
        assert j_pq(vals, pair, weights=lowered) <= j_pq(vals, pair, weights=weights) + 1e-14

    def test_rejects_infinite_exponents(self):
        with pytest.raises(DomainError):
            j_pq(np.ones((2, 2)), pair_from_q(2.0))  # p = inf

    def test_rejects_nan_samples(self):
        vals = np.ones((2, 2))
        vals[0, 0] = np.nan
        with pytest.raises(NonFinite):
            j_pq(vals, pair_from_alpha(3.0))

    def test_empty_grid(self):
        with pytest.raises(EmptyGrid):
            j_pq(np.zeros((0, 0)), pair_from_alpha(3.0))


class TestSpaceTimeGrid:
    def test_uniform_construction(self):
        grid = SpaceTimeGrid.uniform(8.0, 2.0, 5, 3)
        assert grid.shape == (3, 5)
        assert grid.points[0] == -8.0 and grid.points[-1] == 8.0
        assert grid.times[0] == -2.0 and grid.times[-1] == 2.0
        assert np.all(grid.weights == 1.0)

    def test_mesh_layout(self):
        grid = SpaceTimeGrid.uniform(1.0, 1.0, 2, 2)
        tt, xx = grid.mesh()
        assert np.array_equal(tt, [-1, -1, 1, 1])
        assert np.array_equal(xx, [-1, 1, -1, 1])

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            SpaceTimeGrid(np.array([0.0]), np.array([0.0]), np.array([[1.5]]))
        with pytest.raises(ValueError):
            SpaceTimeGrid(np.array([0.0]), np.array([0.0, 1.0]), np.ones((2, 1)))
