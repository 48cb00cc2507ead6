"""Run configuration: dataclass, per-family defaults, and the flat file format.

Config files are plain ``key = value`` lines ('#' starts a comment).
Keys mirror the RunConfig field names; unknown keys are errors.  The
``solution`` key selects a preset (box sizes, grid sizes, slice times)
that the remaining keys then override.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import ConfigError
from .solutions import (
    make_kuznetsov_ma,
    make_peregrine,
    make_soliton,
    make_standing_wave,
)


@dataclass
class RunConfig:
    # reference solution and equation
    solution: str = "soliton"
    c: float = 1.0
    nu: float = 1.0
    a: float = 0.75
    omega: float = 1.0
    alpha: float = 3.0
    # space-time box
    half_width: float = 8.0  # space interval [-R, R]
    half_time: float = 2.0  # time interval [-T, T]
    # collocation grid sizes; n1..n3 / m2..m3 default to the data-term sizes
    n1: int | None = None
    n2: int | None = None
    n3: int | None = None
    m2: int | None = None
    m3: int | None = None
    n4: int = 32
    m4: int = 32
    n5: int = 32
    m5: int = 32
    n_test: int = 100
    m_test: int = 100
    # network
    hidden_layers: int = 4
    hidden_width: int = 20
    input_scaling: bool = False
    seed: int = 0
    # optimizer
    max_iters: int = 3000
    history: int = 100  # 10 loses ~3x accuracy on the breather runs
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    initial_step: float = 1.0
    max_line_search: int = 25
    grad_tol: float = 1e-10
    monitor_every: int = 1
    milestones: tuple = (100, 500, 1000, 3000)
    # propagator and functionals
    propagator_points: int = 100
    cell_scaling: bool = False
    q_min: float = 2.0
    q_max: float = 100.0
    q_count: int = 197
    # outputs
    slice_times: tuple | None = None
    out: str | None = None

    def __post_init__(self):
        if self.half_width <= 0 or self.half_time <= 0:
            raise ConfigError("half_width and half_time must be positive")
        for name in ("n4", "m4", "n5", "m5", "n_test", "m_test"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")

    # grid-size ties: the monitor grids default to the data-term grids
    @property
    def n1_points(self):
        return self.n1 if self.n1 is not None else self.n5

    @property
    def n2_points(self):
        return self.n2 if self.n2 is not None else self.n5

    @property
    def n3_points(self):
        return self.n3 if self.n3 is not None else self.n5

    @property
    def m2_times(self):
        return self.m2 if self.m2 is not None else self.m5

    @property
    def m3_times(self):
        return self.m3 if self.m3 is not None else self.m5

    def reference(self):
        if self.solution == "soliton":
            return make_soliton(self.c, self.nu)
        if self.solution == "peregrine":
            return make_peregrine()
        if self.solution == "kuznetsov_ma":
            return make_kuznetsov_ma(self.a)
        if self.solution == "standing_wave":
            return make_standing_wave(self.omega, self.alpha)
        raise ConfigError(f"unknown solution kind: {self.solution!r}")

    def default_slice_times(self):
        if self.slice_times is not None:
            return tuple(self.slice_times)
        if self.solution == "kuznetsov_ma":
            return (-1.0, 0.3, 0.8)
        return (-2.0, 0.5, 1.5)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["milestones"] = list(self.milestones)
        d["slice_times"] = list(self.slice_times) if self.slice_times else None
        return d


_PRESETS = {
    "soliton": {},
    "standing_wave": {},
    "kuznetsov_ma": {"half_width": 5.0, "half_time": 1.0},
    "peregrine": {"half_width": 10.0, "half_time": 2.0, "n4": 64, "m4": 64},
}


def default_config(solution="soliton", **overrides):
    """Preset box/grid defaults for a solution family, plus overrides."""
    if solution not in _PRESETS:
        raise ConfigError(f"unknown solution kind: {solution!r}")
    fields = {"solution": solution}
    fields.update(_PRESETS[solution])
    fields.update(overrides)
    return RunConfig(**fields)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _parse_value(name, text):
    text = text.strip()
    if text.lower() in ("none", "null"):
        return None
    kind = _FIELD_TYPES[name]
    if kind in ("int", "int | None"):
        return int(text)
    if kind in ("float", "float | None"):
        return float(text)
    if kind == "bool":
        if text.lower() in ("true", "yes", "1", "on"):
            return True
        if text.lower() in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"cannot parse boolean {name} = {text!r}")
    if kind == "tuple" or kind == "tuple | None":
        return tuple(float(part) for part in text.split(",") if part.strip())
    return text


def parse_config_file(path):
    """Read a flat key/value config file into a RunConfig."""
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            entries[key] = _parse_value(key, value)
    solution = entries.pop("solution", "soliton")
    if "milestones" in entries:
        entries["milestones"] = tuple(int(v) for v in entries["milestones"])
    return default_config(solution, **entries)


def write_config_file(cfg, path):
    with open(path, "w") as fh:
        for key, value in cfg.to_dict().items():
            if value is None:
                continue
            if isinstance(value, (list, tuple)):
                value = ",".join(str(v) for v in value)
            fh.write(f"{key} = {value}\n")
