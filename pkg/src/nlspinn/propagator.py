"""Discrete free-Schrödinger evolution of initial-data mismatches.

Samples on a uniform periodic grid over [-R, R] are turned into discrete
Fourier coefficients; multiplying by exp(-i t xi^2) and evaluating the
trigonometric interpolant gives the linearly evolved field at arbitrary
(t, x).  Coefficients are stored phase-adjusted to the left grid edge so
synthesis reads (1/K) sum_k exp(-i t xi_k^2) c_k exp(i xi_k x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import network
from .errors import NonUniformGrid


def uniform_grid(half_width, count):
    """K points x_k = -R + k (2R/K); the right endpoint is the periodic image."""
    spacing = 2.0 * half_width / count
    return -half_width + spacing * np.arange(count)


@dataclass(frozen=True)
class SpectralField:
    """DFT representation of samples on a uniform grid over [-R, R]."""

    grid_points: np.ndarray
    coefficients: np.ndarray
    frequencies: np.ndarray

    @property
    def size(self):
        return self.grid_points.size


def analyze(points, values):
    """Forward DFT of complex samples on a uniform grid.

    The forward transform is unnormalized; synthesis carries the 1/K.
    Raises NonUniformGrid unless the points are equally spaced.
    """
    points = np.asarray(points, dtype=np.float64)
    values = np.asarray(values, dtype=np.complex128)
    if points.size < 2:
        raise NonUniformGrid("spectral analysis needs at least two points")
    gaps = np.diff(points)
    spacing = gaps[0]
    if spacing <= 0 or not np.allclose(gaps, spacing, rtol=1e-9, atol=0.0):
        raise NonUniformGrid("sample points are not uniformly spaced")
    k = points.size
    frequencies = 2.0 * np.pi * np.fft.fftfreq(k, d=spacing)
    coefficients = np.fft.fft(values) * np.exp(-1j * frequencies * points[0])
    return SpectralField(points, coefficients, frequencies)


def evolve_at(field, t, x, derivative=False):
    """Evaluate exp(i t d_xx) of the analyzed field at arbitrary (t, x).

    Linear in the field; with ``derivative`` the spectral x-derivative
    (an extra i*xi factor) is returned instead of the value.
    """
    x = np.asarray(x, dtype=np.float64)
    multiplier = np.exp(-1j * t * field.frequencies**2) * field.coefficients
    if derivative:
        multiplier = multiplier * (1j * field.frequencies)
    modes = np.exp(1j * np.outer(np.atleast_1d(x).ravel(), field.frequencies))
    out = modes @ multiplier / field.size
    return complex(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def propagated_mismatch_table(u0, params, grid, count, half_width, derivative=False):
    """Linear evolution of u0 - u_net(0, .) tabulated on a space-time grid.

    The mismatch is sampled on ``count`` uniform points over
    [-half_width, half_width], analyzed once, then evolved to every
    (t_l, x_j) node of ``grid``.
    """
    xk = uniform_grid(half_width, count)
    u0_vals, _ = u0.evaluate(np.zeros_like(xk), xk)
    net_vals = network.forward_values(params, np.zeros_like(xk), xk)
    mismatch = u0_vals - (net_vals[0] + 1j * net_vals[1])
    field = analyze(xk, mismatch)
    rows = [
        evolve_at(field, t, grid.points, derivative=derivative) for t in grid.times
    ]
    return np.vstack(rows)


def mismatch_to_grid_matrix(count, half_width, times, points):
    """Complex matrix taking K mismatch samples to their evolved grid table.

    Row k, column l*N+j holds the coefficient of sample k in
    v(t_l, x_j); the table is mismatch @ matrix, which is how the
    differentiable loss reaches the linear-evolution term without
    re-running an FFT on the tape.
    """
    xk = uniform_grid(half_width, count)
    frequencies = 2.0 * np.pi * np.fft.fftfreq(count, d=xk[1] - xk[0])
    # unnormalized forward DFT with the left-edge phase adjustment folded in
    dft = np.exp(-2j * np.pi * np.outer(np.arange(count), np.arange(count)) / count)
    dft = np.exp(-1j * frequencies * xk[0])[:, None] * dft
    points = np.asarray(points, dtype=np.float64)
    columns = []
    for t in np.asarray(times, dtype=np.float64):
        phases = np.exp(-1j * t * frequencies**2)
        modes = np.exp(1j * np.outer(frequencies, points))
        columns.append(dft.T @ (phases[:, None] * modes) / count)
    return np.hstack(columns)


def tail_mass_fraction(field):
    """Fraction of spectral mass in the highest-frequency band (aliasing cue)."""
    energy = np.abs(field.coefficients) ** 2
    total = energy.sum()
    if total == 0.0:
        return 0.0
    band = np.abs(field.frequencies) >= 0.9 * np.abs(field.frequencies).max()
    return float(energy[band].sum() / total)
