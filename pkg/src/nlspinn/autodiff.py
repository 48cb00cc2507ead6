"""Minimal reverse-mode automatic differentiation over numpy arrays.

Tensors wrap float64 arrays and record the operations applied to them;
``backward`` replays the tape in reverse topological order and accumulates
exact adjoints into every leaf.  The op set is deliberately small: it is
exactly what the jet-valued network forward pass and the discrete loss
functionals need.  Reductions use numpy's fixed left-to-right summation
order, so repeated runs are bit-reproducible.
"""

from __future__ import annotations

import numpy as np


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """A node of the reverse-mode tape holding a float64 numpy array."""

    __slots__ = ("data", "grad", "_parents", "_backward")

    # force numpy to defer binary ops to our reflected operators
    __array_ufunc__ = None

    def __init__(self, data, parents=(), backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self._parents = parents
        self._backward = backward

    # -- inspection ---------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    def item(self):
        return float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Tensor):
            out = Tensor(self.data + other.data, (self, other))

            def backward(g):
                _accumulate(self, _unbroadcast(g, self.data.shape))
                _accumulate(other, _unbroadcast(g, other.data.shape))

        else:
            out = Tensor(self.data + other, (self,))

            def backward(g):
                _accumulate(self, _unbroadcast(g, self.data.shape))

        out._backward = backward
        return out

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        out = Tensor(-self.data, (self,))

        def backward(g):
            _accumulate(self, -g)

        out._backward = backward
        return out

    def __sub__(self, other):
        if isinstance(other, Tensor):
            out = Tensor(self.data - other.data, (self, other))

            def backward(g):
                _accumulate(self, _unbroadcast(g, self.data.shape))
                _accumulate(other, _unbroadcast(-g, other.data.shape))

        else:
            out = Tensor(self.data - other, (self,))

            def backward(g):
                _accumulate(self, _unbroadcast(g, self.data.shape))

        out._backward = backward
        return out

    def __rsub__(self, other):
        out = Tensor(other - self.data, (self,))

        def backward(g):
            _accumulate(self, _unbroadcast(-g, self.data.shape))

        out._backward = backward
        return out

    def __mul__(self, other):
        if isinstance(other, Tensor):
            out = Tensor(self.data * other.data, (self, other))

            def backward(g):
                _accumulate(self, _unbroadcast(g * other.data, self.data.shape))
                _accumulate(other, _unbroadcast(g * self.data, other.data.shape))

        else:
            out = Tensor(self.data * other, (self,))

            def backward(g):
                _accumulate(self, _unbroadcast(g * other, self.data.shape))

        out._backward = backward
        return out

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Tensor):
            out = Tensor(self.data / other.data, (self, other))

            def backward(g):
                _accumulate(self, _unbroadcast(g / other.data, self.data.shape))
                _accumulate(
                    other,
                    _unbroadcast(-g * self.data / (other.data * other.data), other.data.shape),
                )

        else:
            out = Tensor(self.data / other, (self,))

            def backward(g):
                _accumulate(self, _unbroadcast(g / other, self.data.shape))

        out._backward = backward
        return out

    def __rtruediv__(self, other):
        out = Tensor(other / self.data, (self,))

        def backward(g):
            _accumulate(self, _unbroadcast(-g * other / (self.data * self.data), self.data.shape))

        out._backward = backward
        return out

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, float)):
            raise TypeError("Tensor exponents must be Python numbers")
        e = float(exponent)
        out = Tensor(self.data**e, (self,))

        def backward(g):
            # fractional powers of exact zeros produce Inf/NaN here; that is
            # surfaced downstream as NonFiniteGradient, not hidden
            with np.errstate(divide="ignore", invalid="ignore"):
                _accumulate(self, g * e * self.data ** (e - 1.0))

        out._backward = backward
        return out

    def __matmul__(self, other):
        if isinstance(other, Tensor):
            out = Tensor(self.data @ other.data, (self, other))

            def backward(g):
                _accumulate(self, g @ other.data.T)
                _accumulate(other, self.data.T @ g)

        else:
            other = np.asarray(other, dtype=np.float64)
            out = Tensor(self.data @ other, (self,))

            def backward(g):
                _accumulate(self, g @ other.T)

        out._backward = backward
        return out

    def __rmatmul__(self, other):
        other = np.asarray(other, dtype=np.float64)
        out = Tensor(other @ self.data, (self,))

        def backward(g):
            _accumulate(self, other.T @ g)

        out._backward = backward
        return out

    # -- shape and reduction ops ---------------------------------------

    def sum(self, axis=None):
        out = Tensor(self.data.sum(axis=axis), (self,))
        shape = self.data.shape

        def backward(g):
            if axis is None:
                _accumulate(self, np.broadcast_to(g, shape))
            else:
                _accumulate(self, np.broadcast_to(np.expand_dims(g, axis), shape))

        out._backward = backward
        return out

    def reshape(self, shape):
        out = Tensor(self.data.reshape(shape), (self,))
        original = self.data.shape

        def backward(g):
            _accumulate(self, g.reshape(original))

        out._backward = backward
        return out

    def row(self, index):
        """Extract one row of a 2-D tensor as a 1-D tensor."""
        out = Tensor(self.data[index], (self,))
        shape = self.data.shape

        def backward(g):
            full = np.zeros(shape)
            full[index] = g
            _accumulate(self, full)

        out._backward = backward
        return out

    # -- reverse pass ---------------------------------------------------

    def backward(self):
        """Populate ``grad`` on every tensor this scalar output depends on.

        Degenerate configurations may propagate Inf/NaN adjoints; callers
        collecting gradients are responsible for raising NonFiniteGradient.
        """
        order = _toposort(self)
        self.grad = np.ones_like(self.data)
        with np.errstate(divide="ignore", invalid="ignore"):
            for node in reversed(order):
                if node._backward is not None:
                    node._backward(node.grad)


def _accumulate(node, grad):
    # adjoints are never mutated in place, so aliasing the incoming array
    # (or a broadcast view of it) is safe and saves a copy per edge
    if node.grad is None:
        node.grad = grad
    else:
        node.grad = node.grad + grad


def _toposort(root):
    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    return order


def sin(x):
    if isinstance(x, Tensor):
        out = Tensor(np.sin(x.data), (x,))

        def backward(g):
            _accumulate(x, g * np.cos(x.data))

        out._backward = backward
        return out
    return np.sin(x)


def cos(x):
    if isinstance(x, Tensor):
        out = Tensor(np.cos(x.data), (x,))

        def backward(g):
            _accumulate(x, -g * np.sin(x.data))

        out._backward = backward
        return out
    return np.cos(x)


def exp(x):
    if isinstance(x, Tensor):
        value = np.exp(x.data)
        out = Tensor(value, (x,))

        def backward(g):
            _accumulate(x, g * value)

        out._backward = backward
        return out
    return np.exp(x)


def as_array(x):
    """Underlying numpy data of a Tensor, or the input unchanged."""
    return x.data if isinstance(x, Tensor) else x


def jet_sin_slots(v, dt, dx, dxx):
    """Fused sine chain rule over the four jet slots.

    Returns (sin v, cos v · dt, cos v · dx, cos v · dxx - sin v · dx²) with
    one sin/cos evaluation shared across the forward values and all four
    backward closures; this is the hot path of the network forward pass.
    """
    if not any(isinstance(slot, Tensor) for slot in (v, dt, dx, dxx)):
        s, c = np.sin(v), np.cos(v)
        return s, c * dt, c * dx, c * dxx - s * dx * dx

    v = v if isinstance(v, Tensor) else Tensor(v)
    s_val = np.sin(v.data)
    c_val = np.cos(v.data)

    out_v = Tensor(s_val, (v,))

    def backward_v(g):
        _accumulate(v, g * c_val)

    out_v._backward = backward_v

    def scaled(slot):
        if isinstance(slot, Tensor):
            out = Tensor(c_val * slot.data, (v, slot))

            def backward(g):
                _accumulate(v, _unbroadcast(-g * s_val * slot.data, v.data.shape))
                _accumulate(slot, _unbroadcast(g * c_val, slot.data.shape))

        else:
            out = Tensor(c_val * slot, (v,))

            def backward(g):
                _accumulate(v, _unbroadcast(-g * s_val * slot, v.data.shape))

        out._backward = backward
        return out

    out_t = scaled(dt)
    out_x = scaled(dx)
    dx_data = as_array(dx)
    dxx_data = as_array(dxx)
    parents = tuple(p for p in (v, dx, dxx) if isinstance(p, Tensor))
    out_xx = Tensor(c_val * dxx_data - s_val * dx_data * dx_data, parents)

    def backward_xx(g):
        _accumulate(v, _unbroadcast(-g * (s_val * dxx_data + c_val * dx_data * dx_data), v.data.shape))
        if isinstance(dx, Tensor):
            _accumulate(dx, _unbroadcast(-2.0 * g * s_val * dx_data, dx_data.shape))
        if isinstance(dxx, Tensor):
            _accumulate(dxx, _unbroadcast(g * c_val, np.shape(dxx_data)))

    out_xx._backward = backward_xx
    return out_v, out_t, out_x, out_xx
