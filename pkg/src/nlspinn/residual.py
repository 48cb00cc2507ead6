"""The NLS residual operator and the two-term training loss.

The residual of a field u is i u_t + u_xx + |u|^(alpha-1) u, assembled
from jet slots (so no derivatives beyond the second in x are ever
needed).  The loss adds the (p', q') nested mean of |residual| over the
collocation grid to the (p, q) nested mean of the linearly evolved
initial-data mismatch; both terms use values only, per the discrete
functionals' printed form, and both differentiate exactly through the
jets/tape machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import network, propagator
from .autodiff import Tensor
from .errors import DomainError, NonFinite, NonFiniteGradient
from .jets import Jet2
from .norms import nested_power_mean, pair_from_alpha


def _modulus_scale(re_v, im_v, alpha):
    """|u|^(alpha-1) from the real/imaginary value slots."""
    a2 = re_v * re_v + im_v * im_v
    exponent = (float(alpha) - 1.0) / 2.0
    if exponent == 1.0:
        return a2
    if isinstance(a2, Tensor):
        return a2**exponent
    a2 = np.asarray(a2, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a2 == 0.0, 0.0, a2**exponent)


def residual_parts(u, alpha):
    """Real and imaginary parts of i u_t + u_xx + |u|^(alpha-1) u."""
    scale = _modulus_scale(u.re.v, u.im.v, alpha)
    e_re = -u.im.dt + u.re.dxx + scale * u.re.v
    e_im = u.re.dt + u.im.dxx + scale * u.im.v
    return e_re, e_im


def residual_from_jet(u, alpha):
    """Complex residual value(s) of a numpy-mode jet."""
    e_re, e_im = residual_parts(u, alpha)
    return np.asarray(e_re) + 1j * np.asarray(e_im)


@dataclass
class ResidualSample:
    """Residual of the network at one space-time point."""

    t: float
    x: float
    value: complex
    x_derivative: complex | None = None  # needs third-order jets; not computed


def nls_residual(params, alpha, t, x):
    """Residual of the network field at (t, x)."""
    if not 2.0 <= alpha < 5.0:
        raise DomainError("residual operator expects alpha in [2, 5)")
    u = network.forward(params, t, x)
    value = residual_from_jet(u, alpha)
    if np.ndim(value) == 0:
        value = complex(value)
    return ResidualSample(t=t, x=x, value=value)


def _reshape(a, shape):
    return a.reshape(shape) if isinstance(a, Tensor) else np.reshape(a, shape)


def _row(a, index):
    return a.row(index) if isinstance(a, Tensor) else a[index]


class LossEvaluator:
    """Differentiable two-term loss bound to a reference and its grids.

    The linear-evolution term needs the free propagator applied to the
    network's t = 0 mismatch on every evaluation; since that map is
    linear in the mismatch samples, it is precomputed once as a complex
    matrix and applied on the tape as real matmuls.
    """

    def __init__(
        self,
        reference,
        alpha,
        grid_residual,
        grid_data,
        propagator_points=100,
        half_width=None,
        use_cell_scaling=False,
    ):
        if grid_residual.times.size == 0 or grid_data.times.size == 0:
            raise DomainError("loss grids must be nonempty")
        self.reference = reference
        self.alpha = float(alpha)
        self.pair = pair_from_alpha(alpha)
        self.grid_residual = grid_residual
        self.grid_data = grid_data
        self.propagator_points = int(propagator_points)
        if half_width is None:
            half_width = float(np.max(np.abs(grid_data.points)))
        self.half_width = float(half_width)

        self._t4, self._x4 = grid_residual.mesh()
        xk = propagator.uniform_grid(self.half_width, self.propagator_points)
        u0_vals, _ = reference.evaluate(np.zeros_like(xk), xk)
        self._u0_re = np.real(u0_vals)
        self._u0_im = np.imag(u0_vals)
        matrix = propagator.mismatch_to_grid_matrix(
            self.propagator_points, self.half_width, grid_data.times, grid_data.points
        )
        self._prop_re = np.real(matrix)
        self._prop_im = np.imag(matrix)
        if use_cell_scaling:
            dt4, dx4 = grid_residual.cell_sizes()
            dt5, dx5 = grid_data.cell_sizes()
            self._factors4 = (dt4, dx4)
            self._factors5 = (dt5, dx5)
        else:
            m4, n4 = grid_residual.shape
            m5, n5 = grid_data.shape
            self._factors4 = (1.0 / m4, 1.0 / n4)
            self._factors5 = (1.0 / m5, 1.0 / n5)

    # -- loss of an arbitrary field (stub-friendly) ---------------------

    def loss_of_field(self, field_jets_fn, initial_values_fn):
        """Loss of any field given its jets and its t = 0 values.

        ``field_jets_fn(t, x) -> Jet2`` feeds the residual term;
        ``initial_values_fn(x) -> (re, im)`` feeds the mismatch term.
        """
        u = field_jets_fn(self._t4, self._x4)
        term1 = self._residual_term(u)
        re0, im0 = initial_values_fn(
            propagator.uniform_grid(self.half_width, self.propagator_points)
        )
        term2 = self._data_term(re0, im0)
        return term1 + term2

    def _residual_term(self, u):
        e_re, e_im = residual_parts(u, self.alpha)
        abs2 = e_re * e_re + e_im * e_im
        powered = _reshape(abs2 ** (self.pair.q_conj / 2.0), self.grid_residual.shape)
        inv_m, inv_n = self._factors4
        return nested_power_mean(
            powered,
            self.pair.p_conj,
            self.pair.q_conj,
            self.grid_residual.weights,
            inv_n,
            inv_m,
        )

    def _data_term(self, re0, im0):
        k = self.propagator_points
        m_re = _reshape(self._u0_re - re0, (1, k))
        m_im = _reshape(self._u0_im - im0, (1, k))
        v_re = m_re @ self._prop_re - m_im @ self._prop_im
        v_im = m_re @ self._prop_im + m_im @ self._prop_re
        abs2 = _reshape(v_re * v_re + v_im * v_im, self.grid_data.shape)
        inv_m, inv_n = self._factors5
        return nested_power_mean(
            abs2 ** (self.pair.q / 2.0),
            self.pair.p,
            self.pair.q,
            self.grid_data.weights,
            inv_n,
            inv_m,
        )

    def _network_loss(self, params):
        def field_jets(t, x):
            return network.forward(params, t, x)

        def initial_values(xk):
            vals = network.forward_values(params, np.zeros_like(xk), xk)
            return _row(vals, 0), _row(vals, 1)

        return self.loss_of_field(field_jets, initial_values)

    # -- public entry points --------------------------------------------

    def value(self, params):
        """Loss as a plain float (numpy evaluation path)."""
        out = self._network_loss(params)
        out = float(out.data) if isinstance(out, Tensor) else float(out)
        if not np.isfinite(out):
            raise NonFinite("loss evaluated to NaN/Inf")
        return out

    def value_and_gradient(self, params):
        """Loss and its exact gradient in the flat parameter order.

        Raises NonFiniteGradient when a component is NaN/Inf, which only
        happens at exact zeros of the fractional-power sums.
        """
        tparams = network.tensor_params(params)
        out = self._network_loss(tparams)
        out.backward()
        pieces = []
        for w, b in tparams.layers:
            for leaf in (w, b):
                if leaf.grad is None:
                    pieces.append(np.zeros(leaf.data.size))
                else:
                    pieces.append(np.asarray(leaf.grad).ravel())
        grad = np.concatenate(pieces)
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradient("loss gradient contains NaN/Inf")
        return float(out.data), grad

    def flat_objective(self, architecture):
        """(loss, grad) callable over flat vectors, for the optimizer."""

        def objective(flat):
            params = network.NetworkParams.unflatten(architecture, flat)
            return self.value_and_gradient(params)

        return objective
