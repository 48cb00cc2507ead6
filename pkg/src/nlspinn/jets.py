"""Second-order space-time jets and exact parameter gradients.

A :class:`Jet` carries a real field value together with its first time
derivative and first/second space derivatives; compositions of the
elementary operations (+, -, *, /, sin, cos, exp, powers) propagate all
four slots by the exact chain and Leibniz rules.  :class:`Jet2` pairs two
real jets into a complex field, expanding the complex arithmetic of the
equation over (real, imaginary) components so the differentiation core
stays real-valued.

Jet slots may be floats, numpy arrays, or :class:`~nlspinn.autodiff.Tensor`
nodes.  The last combination nests forward (t, x)-differentiation inside
reverse parameter accumulation: evaluating a scalar loss on Tensor-valued
parameters and calling :func:`loss_gradient` yields the exact dLoss/dθ.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import autodiff
from .autodiff import Tensor
from .errors import NonFiniteGradient


def sin(x):
    """sin for floats, arrays, Tensors, and (complex) jets."""
    if isinstance(x, Jet):
        return Jet(*autodiff.jet_sin_slots(x.v, x.dt, x.dx, x.dxx))
    return autodiff.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = autodiff.sin(x.v), autodiff.cos(x.v)
        return Jet(c, -s * x.dt, -s * x.dx, -c * x.dx * x.dx - s * x.dxx)
    return autodiff.cos(x)


def exp(x):
    if isinstance(x, Jet):
        e = autodiff.exp(x.v)
        return Jet(e, e * x.dt, e * x.dx, e * (x.dx * x.dx + x.dxx))
    return autodiff.exp(x)


def power(x, exponent):
    """x**exponent for a real jet with positive (or safely signed) base."""
    if isinstance(x, Jet):
        e = float(exponent)
        if e == 1.0:
            return x
        v = x.v ** e
        d1 = e * x.v ** (e - 1.0)
        d2 = e * (e - 1.0) * x.v ** (e - 2.0)
        return Jet(v, d1 * x.dt, d1 * x.dx, d2 * x.dx * x.dx + d1 * x.dxx)
    return x ** exponent


class Jet(object):
    """Real scalar field jet: (value, d/dt, d/dx, d2/dx2)."""

    __slots__ = ("v", "dt", "dx", "dxx")
    __array_ufunc__ = None

    def __init__(self, v, dt=0.0, dx=0.0, dxx=0.0):
        self.v = v
        self.dt = dt
        self.dx = dx
        self.dxx = dxx

    def __repr__(self):
        return f"Jet(v={self.v!r}, dt={self.dt!r}, dx={self.dx!r}, dxx={self.dxx!r})"

    @staticmethod
    def constant(value):
        return Jet(value, 0.0, 0.0, 0.0)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.dt + other.dt, self.dx + other.dx, self.dxx + other.dxx)
        return Jet(self.v + other, self.dt, self.dx, self.dxx)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.dt, -self.dx, -self.dxx)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v - other.v, self.dt - other.dt, self.dx - other.dx, self.dxx - other.dxx)
        return Jet(self.v - other, self.dt, self.dx, self.dxx)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            # Leibniz to second order in x, first order in t
            return Jet(
                self.v * other.v,
                self.dt * other.v + self.v * other.dt,
                self.dx * other.v + self.v * other.dx,
                self.dxx * other.v + 2.0 * self.dx * other.dx + self.v * other.dxx,
            )
        return Jet(self.v * other, self.dt * other, self.dx * other, self.dxx * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            q = self.v / other.v
            q_t = (self.dt - q * other.dt) / other.v
            q_x = (self.dx - q * other.dx) / other.v
            q_xx = (self.dxx - 2.0 * q_x * other.dx - q * other.dxx) / other.v
            return Jet(q, q_t, q_x, q_xx)
        return Jet(self.v / other, self.dt / other, self.dx / other, self.dxx / other)

    def __rtruediv__(self, other):
        return Jet.constant(other) / self


class Jet2(object):
    """Complex field jet assembled from real/imaginary :class:`Jet` parts."""

    __slots__ = ("re", "im")
    __array_ufunc__ = None

    def __init__(self, re, im=None):
        if not isinstance(re, Jet):
            re = Jet.constant(re)
        if im is None:
            im = Jet.constant(0.0)
        elif not isinstance(im, Jet):
            im = Jet.constant(im)
        self.re = re
        self.im = im

    # complex views of the four slots (numpy-mode only)
    @property
    def u(self):
        return _as_complex(self.re.v, self.im.v)

    @property
    def u_t(self):
        return _as_complex(self.re.dt, self.im.dt)

    @property
    def u_x(self):
        return _as_complex(self.re.dx, self.im.dx)

    @property
    def u_xx(self):
        return _as_complex(self.re.dxx, self.im.dxx)

    def __repr__(self):
        return f"Jet2(re={self.re!r}, im={self.im!r})"

    @staticmethod
    def constant(z):
        z = complex(z)
        return Jet2(Jet.constant(z.real), Jet.constant(z.imag))

    def conj(self):
        return Jet2(self.re, -self.im)

    def abs2(self):
        """|z|^2 = z z̄ as a real jet."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        other = _coerce(other)
        return Jet2(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        return Jet2(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet2(self.re * other, self.im * other)
        if isinstance(other, Jet2):
            return Jet2(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        z = complex(other)
        if z.imag == 0.0:
            return Jet2(self.re * z.real, self.im * z.real)
        return self * Jet2.constant(z)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return Jet2(self.re / other, self.im / other)
        other = _coerce(other)
        return (self * other.conj()) / other.abs2()

    def __rtruediv__(self, other):
        return _coerce(other) / self


def _coerce(z):
    if isinstance(z, Jet2):
        return z
    if isinstance(z, Jet):
        return Jet2(z)
    return Jet2.constant(z)


def _as_complex(re, im):
    re = autodiff.as_array(re)
    im = autodiff.as_array(im)
    return re + 1j * np.asarray(im)


def i_times(z):
    """Multiplication by the imaginary unit: i·(a+ib) = -b + ia."""
    z = _coerce(z)
    return Jet2(-z.im, z.re)


def cis(phase):
    """e^{i·phase} for a real jet phase."""
    return Jet2(cos(phase), sin(phase))


def seed_input(t, x):
    """Jets of the identity coordinate functions.

    Returns ``(t_jet, x_jet)`` with the derivative slots seeded so that any
    composition built on top of them carries exact d/dt, d/dx, d2/dx2.
    """
    t = _finite_input(t, "t")
    x = _finite_input(x, "x")
    return Jet(t, 1.0, 0.0, 0.0), Jet(x, 0.0, 1.0, 0.0)


def _finite_input(value, name):
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite {name} input to seed_input")
    return arr if arr.ndim else float(arr)


def modulus_power(z, alpha):
    """|z|^(alpha-1) z with exact jets; zero by definition at z = 0.

    For alpha >= 2 the map is C^1 at the origin, so value and all jet
    slots are set to 0 wherever |z| is exactly zero (numpy mode).  On the
    Tensor path the raw formula is used; an exactly-zero sample there
    surfaces later as NonFiniteGradient.
    """
    z = _coerce(z)
    exponent = (float(alpha) - 1.0) / 2.0
    a2 = z.abs2()
    if exponent == 1.0:
        scale = a2
    elif _is_tensor_jet(a2):
        scale = power(a2, exponent)
    else:
        scale = _power_masked(a2, exponent)
    return Jet2(scale * z.re, scale * z.im)


def _is_tensor_jet(jet):
    return any(isinstance(slot, Tensor) for slot in (jet.v, jet.dt, jet.dx, jet.dxx))


def _power_masked(jet, e):
    v = np.asarray(jet.v, dtype=np.float64)
    zero = v == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(zero, 0.0, v**e)
        d1 = np.where(zero, 0.0, e * v ** (e - 1.0))
        d2 = np.where(zero, 0.0, e * (e - 1.0) * v ** (e - 2.0))
    out = Jet(
        value,
        d1 * jet.dt,
        d1 * jet.dx,
        d2 * np.asarray(jet.dx) ** 2 + d1 * jet.dxx,
    )
    if np.ndim(out.v) == 0:
        out = Jet(float(out.v), float(out.dt), float(out.dx), float(out.dxx))
    return out


def loss_gradient(params, loss_evaluator):
    """Exact gradient of a scalar loss with respect to every network parameter.

    ``params`` is any dataclass with a ``layers`` list of (weight, bias)
    arrays; the evaluator receives a copy whose layers are Tensor leaves
    and must return the scalar loss built from them.  The gradient is
    assembled by reverse accumulation in the documented flat order
    (row-major weights then bias, layer by layer).
    """
    leaves = [(Tensor(w), Tensor(b)) for w, b in params.layers]
    tensor_params = dataclasses.replace(params, layers=leaves)
    out = loss_evaluator(tensor_params)

    sizes = [(w.data.size, b.data.size) for w, b in leaves]
    total = sum(ws + bs for ws, bs in sizes)
    if not isinstance(out, Tensor):
        # loss does not depend on the parameters at all
        return np.zeros(total)
    out.backward()

    pieces = []
    for w, b in leaves:
        for leaf in (w, b):
            if leaf.grad is None:
                pieces.append(np.zeros(leaf.data.size))
            else:
                pieces.append(np.asarray(leaf.grad, dtype=np.float64).ravel())
    flat = np.concatenate(pieces)
    if not np.all(np.isfinite(flat)):
        raise NonFiniteGradient("parameter gradient contains NaN/Inf")
    return flat
