"""Admissible exponent pairs and the discrete space-time functionals.

The three functional shapes are a weighted discrete H^1 norm over space
points, its sup-over-time-slices variant, and the nested (1/M, 1/N)
power means over a space-time grid.  All of them use the printed (1/N),
(1/M) normalizations; physical cell sizes can be switched on through the
``cells`` argument, in which case the factors become (dt, dx).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyGrid, NonFinite


@dataclass(frozen=True)
class AdmissiblePair:
    """Exponents (p, q) with 2/p + 1/q = 1/2, plus their Hölder conjugates."""

    p: float
    q: float
    p_conj: float
    q_conj: float

    def __post_init__(self):
        if math.isfinite(self.p) and math.isfinite(self.q):
            if abs(2.0 / self.p + 1.0 / self.q - 0.5) > 1e-12:
                raise DomainError(f"(p, q)=({self.p}, {self.q}) is not admissible")


def holder_conjugate(r):
    if r == 1.0:
        return math.inf
    if math.isinf(r):
        return 1.0
    return r / (r - 1.0)


def pair_from_q(q):
    """Admissible pair determined by the space exponent q >= 2.

    q = 2 gives the (inf, 2) endpoint, q = inf gives (4, inf).
    """
    q = float(q)
    if q < 2.0:
        raise DomainError("admissible pairs require q >= 2")
    if q == 2.0:
        p = math.inf
    elif math.isinf(q):
        p = 4.0
    else:
        p = 4.0 * q / (q - 2.0)
    return AdmissiblePair(p=p, q=q, p_conj=holder_conjugate(p), q_conj=holder_conjugate(q))


def pair_from_alpha(alpha):
    """The pair (4(alpha+1)/(alpha-1), alpha+1) tied to the nonlinearity power."""
    alpha = float(alpha)
    if alpha <= 1.0:
        raise DomainError("nonlinearity power must exceed 1")
    return pair_from_q(alpha + 1.0)


def admissible_q_grid(q_min=2.0, q_max=100.0, count=197):
    """Uniform grid of space exponents; default is half-integer steps 2..100."""
    if count < 1:
        raise DomainError("q grid needs at least one point")
    return np.linspace(float(q_min), float(q_max), int(count))


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Collocation times, points, and per-node weights in [0, 1]."""

    times: np.ndarray
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        points = np.asarray(self.points, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        if weights.shape != (times.size, points.size):
            raise ValueError("weights must have shape (len(times), len(points))")
        if weights.size and (weights.min() < 0.0 or weights.max() > 1.0):
            raise ValueError("weights must lie in [0, 1]")

    @staticmethod
    def uniform(half_width, half_time, n_points, m_times):
        """Equispaced grid over [-T, T] x [-R, R] with unit weights."""
        times = np.linspace(-half_time, half_time, m_times)
        points = np.linspace(-half_width, half_width, n_points)
        return SpaceTimeGrid(times, points, np.ones((m_times, n_points)))

    def mesh(self):
        """Flattened (t, x) arrays covering the grid row by row."""
        tt = np.repeat(self.times, self.points.size)
        xx = np.tile(self.points, self.times.size)
        return tt, xx

    @property
    def shape(self):
        return (self.times.size, self.points.size)

    def cell_sizes(self):
        dt = (self.times.max() - self.times.min()) / self.times.size if self.times.size else 0.0
        dx = (self.points.max() - self.points.min()) / self.points.size if self.points.size else 0.0
        return dt, dx


def nested_power_mean(powered, p, q, weights, inv_n, inv_m):
    """((1/M) sum_l ((1/N) sum_j w s^q)^(p/q))^(1/p) on pre-powered samples.

    ``powered`` holds s^q per node, shape (M, N); it may be a numpy array
    or an autodiff Tensor, which is how the training loss differentiates
    through this reduction.
    """
    inner = (powered * weights).sum(axis=1) * inv_n
    outer = (inner ** (p / q)).sum() * inv_m
    return outer ** (1.0 / p)


def _check_finite(*arrays):
    for arr in arrays:
        if arr is not None and not np.all(np.isfinite(arr)):
            raise NonFinite("sampled values contain NaN/Inf")


def j_h1(values, x_derivatives, weights=None, cell=None):
    """Discrete H^1 size of one time slice: sqrt((1/N) sum w (|f|^2 + |f'|^2))."""
    values = np.asarray(values)
    x_derivatives = np.asarray(x_derivatives)
    n = values.size
    if n == 0:
        raise EmptyGrid("j_h1 called with no points")
    _check_finite(values, x_derivatives)
    if weights is None:
        weights = np.ones(n)
    factor = cell if cell is not None else 1.0 / n
    total = np.sum(weights * (np.abs(values) ** 2 + np.abs(x_derivatives) ** 2))
    return float(np.sqrt(factor * total))


def j_inf_h1(values, x_derivatives, weights=None, cell=None):
    """Max over time slices of the per-slice discrete H^1 size."""
    values = np.asarray(values)
    x_derivatives = np.asarray(x_derivatives)
    if values.size == 0:
        raise EmptyGrid("j_inf_h1 called with an empty grid")
    if weights is None:
        weights = np.ones(values.shape)
    return max(
        j_h1(values[l], x_derivatives[l], weights[l], cell=cell)
        for l in range(values.shape[0])
    )


def j_pq(values, pair, weights=None, x_derivatives=None, cells=None):
    """Nested space-time power mean of |g| (plus |g_x| when derivatives given).

    ``values`` has shape (M, N) over (times, points).  Passing
    ``x_derivatives`` switches the integrand from |g|^q to
    |g|^q + |g_x|^q, the Sobolev variant used by the error metrics.
    """
    p, q = float(pair.p), float(pair.q)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise DomainError("j_pq needs finite exponents; use j_inf_h1 for sup-type pairs")
    if p < 1.0 or q < 1.0:
        raise DomainError("j_pq needs p, q >= 1")
    values = np.asarray(values)
    if values.size == 0:
        raise EmptyGrid("j_pq called with an empty grid")
    m, n = values.shape
    _check_finite(values, None if x_derivatives is None else np.asarray(x_derivatives))
    if weights is None:
        weights = np.ones((m, n))
    powered = np.abs(values) ** q
    if x_derivatives is not None:
        powered = powered + np.abs(np.asarray(x_derivatives)) ** q
    if cells is not None:
        inv_m, inv_n = float(cells[0]), float(cells[1])
    else:
        inv_m, inv_n = 1.0 / m, 1.0 / n
    return float(nested_power_mean(powered, p, q, np.asarray(weights), inv_n, inv_m))
