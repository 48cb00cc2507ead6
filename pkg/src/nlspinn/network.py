"""The complex-valued MLP ansatz u(t, x) with sine activations.

Two real inputs (t, x) pass through ``hidden_layers`` affine+sine blocks
of width ``hidden_width`` and a final affine map onto two real outputs
interpreted as (Re u, Im u).  ``forward`` propagates second-order jets, so
the returned field carries u, u_t, u_x, u_xx exactly; parameters may be
numpy arrays or autodiff Tensors.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from . import jets
from .autodiff import Tensor, as_array
from .jets import Jet, Jet2

CHECKPOINT_FORMAT = "flat little-endian float64; per layer: row-major weights then biases"


@dataclass(frozen=True)
class Architecture:
    """Layer plan of the network; inputs are (t, x), outputs (Re u, Im u)."""

    hidden_layers: int = 4
    hidden_width: int = 20
    input_dim: int = 2
    output_dim: int = 2
    # optional affine input scaling (t, x) -> (t/t_scale, x/x_scale); None = raw inputs
    input_scale: tuple | None = None

    def __post_init__(self):
        if self.hidden_layers < 1 or self.hidden_width < 1:
            raise ValueError("architecture needs at least one hidden layer and unit")

    def layer_shapes(self):
        widths = [self.input_dim] + [self.hidden_width] * self.hidden_layers + [self.output_dim]
        return [(widths[k + 1], widths[k]) for k in range(len(widths) - 1)]

    def parameter_count(self):
        return sum(out * inp + out for out, inp in self.layer_shapes())

    def to_dict(self):
        return {
            "hidden_layers": self.hidden_layers,
            "hidden_width": self.hidden_width,
            "input_dim": self.input_dim,
            "output_dim": self.output_dim,
            "input_scale": list(self.input_scale) if self.input_scale else None,
        }

    @staticmethod
    def from_dict(d):
        scale = d.get("input_scale")
        return Architecture(
            hidden_layers=d["hidden_layers"],
            hidden_width=d["hidden_width"],
            input_dim=d.get("input_dim", 2),
            output_dim=d.get("output_dim", 2),
            input_scale=tuple(scale) if scale else None,
        )


@dataclass
class NetworkParams:
    """Ordered (weight, bias) pairs plus the architecture they realize.

    Biases are stored with shape (out, 1) so they broadcast over batched
    evaluation points.  The flat view concatenates, layer by layer, the
    row-major weight entries followed by the bias entries.
    """

    layers: list
    architecture: Architecture

    def flatten(self):
        pieces = []
        for w, b in self.layers:
            pieces.append(np.asarray(w, dtype=np.float64).ravel())
            pieces.append(np.asarray(b, dtype=np.float64).ravel())
        return np.concatenate(pieces)

    @staticmethod
    def unflatten(architecture, flat):
        flat = np.asarray(flat, dtype=np.float64)
        if flat.size != architecture.parameter_count():
            raise ValueError(
                f"expected {architecture.parameter_count()} parameters, got {flat.size}"
            )
        layers = []
        offset = 0
        for out, inp in architecture.layer_shapes():
            w = flat[offset : offset + out * inp].reshape(out, inp).copy()
            offset += out * inp
            b = flat[offset : offset + out].reshape(out, 1).copy()
            offset += out
            layers.append((w, b))
        return NetworkParams(layers=layers, architecture=architecture)


def init_glorot(architecture, seed):
    """Glorot-uniform weights, zero biases; deterministic in the seed."""
    rng = np.random.default_rng(seed)
    layers = []
    for out, inp in architecture.layer_shapes():
        limit = np.sqrt(6.0 / (inp + out))
        w = rng.uniform(-limit, limit, size=(out, inp))
        layers.append((w, np.zeros((out, 1))))
    return NetworkParams(layers=layers, architecture=architecture)


def _input_jets(architecture, t, x):
    t = np.asarray(t, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    shape = np.broadcast_shapes(t.shape, x.shape)
    tf, xf = np.broadcast_arrays(np.atleast_1d(t), np.atleast_1d(x))
    values = np.vstack([tf.ravel().astype(np.float64), xf.ravel().astype(np.float64)])
    dt_seed = np.array([[1.0], [0.0]])
    dx_seed = np.array([[0.0], [1.0]])
    if architecture.input_scale is not None:
        scale = np.array(architecture.input_scale, dtype=np.float64).reshape(2, 1)
        values = values / scale
        dt_seed = dt_seed / scale
        dx_seed = dx_seed / scale
    return Jet(values, dt_seed, dx_seed, np.zeros((2, 1))), shape


def _row(values, index):
    if isinstance(values, Tensor):
        return values.row(index)
    return values[index]


def _jet_row(jet, index):
    return Jet(
        _row(jet.v, index), _row(jet.dt, index), _row(jet.dx, index), _row(jet.dxx, index)
    )


def _affine(w, b, h):
    dxx = h.dxx
    if isinstance(dxx, np.ndarray) and not dxx.any():
        # input jets carry an exactly-zero second derivative; keep it a
        # constant so no tape nodes (or W-gradient terms) are spent on it
        dxx = np.zeros((as_array(w).shape[0], dxx.shape[1]))
    else:
        dxx = w @ dxx
    return Jet(w @ h.v + b, w @ h.dt, w @ h.dx, dxx)


def forward(params, t, x):
    """Evaluate the network as a complex Jet2 at (t, x).

    ``t`` and ``x`` broadcast together; the jet slots come back with the
    broadcast shape (plain complex scalars/arrays in numpy mode).  The map
    is pure: identical inputs and parameters give identical jets.
    """
    h, shape = _input_jets(params.architecture, t, x)
    for w, b in params.layers[:-1]:
        h = jets.sin(_affine(w, b, h))
    w, b = params.layers[-1]
    out = _affine(w, b, h)
    re, im = _jet_row(out, 0), _jet_row(out, 1)
    if shape == () and not isinstance(out.v, Tensor):
        re = Jet(*(float(np.asarray(s)[0]) for s in (re.v, re.dt, re.dx, re.dxx)))
        im = Jet(*(float(np.asarray(s)[0]) for s in (im.v, im.dt, im.dx, im.dxx)))
    elif shape != () and not isinstance(out.v, Tensor):
        re = Jet(*(np.asarray(s).reshape(shape) if np.ndim(s) else s for s in (re.v, re.dt, re.dx, re.dxx)))
        im = Jet(*(np.asarray(s).reshape(shape) if np.ndim(s) else s for s in (im.v, im.dt, im.dx, im.dxx)))
    return Jet2(re, im)


def forward_values(params, t, x):
    """Value-only forward pass: returns the (2, P) output rows (Re, Im)."""
    h, _ = _input_jets(params.architecture, t, x)
    a = h.v
    for w, b in params.layers[:-1]:
        a = jets.sin(w @ a + b)
    w, b = params.layers[-1]
    return w @ a + b


def tensor_params(params):
    """A NetworkParams copy whose layers are autodiff Tensor leaves."""
    leaves = [(Tensor(w), Tensor(b)) for w, b in params.layers]
    return dataclasses.replace(params, layers=leaves)


def save_checkpoint(params, path_bin, path_json, seed=None, extra=None):
    """Write the flat parameter vector plus a JSON sidecar describing it."""
    flat = params.flatten().astype("<f8")
    with open(path_bin, "wb") as fh:
        fh.write(flat.tobytes())
    meta = {
        "format": CHECKPOINT_FORMAT,
        "architecture": params.architecture.to_dict(),
        "parameter_count": int(flat.size),
        "seed": seed,
    }
    if extra:
        meta.update(extra)
    with open(path_json, "w") as fh:
        json.dump(meta, fh, indent=2)


def load_checkpoint(path_bin, path_json):
    with open(path_json) as fh:
        meta = json.load(fh)
    architecture = Architecture.from_dict(meta["architecture"])
    flat = np.frombuffer(open(path_bin, "rb").read(), dtype="<f8").astype(np.float64)
    return NetworkParams.unflatten(architecture, flat), meta
