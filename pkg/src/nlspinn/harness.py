"""Training driver: monitors, error metrics, reports, sweeps, plot data.

A run wires together the reference solution, the collocation grids, the
differentiable loss, and the optimizer, recording per-iteration monitor
constants (initial-data mismatch in discrete H^1, the sup-in-time H^1
size, and the space-time (p, q) size of the network) plus error metrics
at milestone iteration counts and at the end.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import lbfgs, network, propagator, splitstep
from .lbfgs import LbfgsOptions
from .norms import (
    SpaceTimeGrid,
    admissible_q_grid,
    j_h1,
    j_inf_h1,
    j_pq,
    pair_from_alpha,
    pair_from_q,
)
from .residual import LossEvaluator


@dataclass(frozen=True)
class MonitorValues:
    """The three runtime-checkable size constants of a candidate network."""

    mismatch_h1: float  # discrete H^1 of u0 - u_net(0, .)
    sup_h1: float  # max over time slices of the discrete H^1 of u_net
    space_time: float  # nested (p, q) mean of |u_net|


@dataclass(frozen=True)
class ErrorMetrics:
    sprime: float  # max over the admissible q grid (incl. the H^1 endpoint)
    lp_w1q: float  # Sobolev-mode (p, q) error at the nonlinearity's own pair
    linf_h1: float  # sup-in-time discrete H^1 error

    def as_dict(self):
        return {
            "error_LpW1q": self.lp_w1q,
            "error_LinfH1": self.linf_h1,
            "error_Sprime": self.sprime,
        }


def _network_table(params, grid):
    """Complex values and x-derivatives of the network on a space-time grid."""
    tt, xx = grid.mesh()
    u = network.forward(params, tt, xx)
    shape = grid.shape
    values = (np.asarray(u.re.v) + 1j * np.asarray(u.im.v)).reshape(shape)
    derivs = (np.asarray(u.re.dx) + 1j * np.asarray(u.im.dx)).reshape(shape)
    return values, derivs


def _reference_table(reference, grid):
    tt, xx = grid.mesh()
    vals, derivs = reference.evaluate(tt, xx)
    return vals.reshape(grid.shape), derivs.reshape(grid.shape)


class _Monitors:
    """Cached grids and reference samples for per-iteration monitoring."""

    def __init__(self, cfg, reference):
        r, t = cfg.half_width, cfg.half_time
        self.x1 = np.linspace(-r, r, cfg.n1_points)
        u0, u0x = reference.evaluate(np.zeros_like(self.x1), self.x1)
        self.u0, self.u0x = u0, u0x
        self.grid2 = SpaceTimeGrid.uniform(r, t, cfg.n2_points, cfg.m2_times)
        same = (cfg.n3_points, cfg.m3_times) == (cfg.n2_points, cfg.m2_times)
        self.grid3 = self.grid2 if same else SpaceTimeGrid.uniform(r, t, cfg.n3_points, cfg.m3_times)
        self.shared_grid = same
        self.pair = pair_from_alpha(cfg.alpha)
        if cfg.cell_scaling:
            self.cell1 = 2.0 * r / cfg.n1_points
            self.cells2 = self.grid2.cell_sizes()
            self.cells3 = self.grid3.cell_sizes()
        else:
            self.cell1 = None
            self.cells2 = self.cells3 = None

    def compute(self, params):
        u = network.forward(params, np.zeros_like(self.x1), self.x1)
        dv = (np.asarray(u.re.v) + 1j * np.asarray(u.im.v)) - self.u0
        dd = (np.asarray(u.re.dx) + 1j * np.asarray(u.im.dx)) - self.u0x
        mismatch = j_h1(dv, dd, cell=self.cell1)
        vals2, derivs2 = _network_table(params, self.grid2)
        cell2 = None if self.cells2 is None else self.cells2[1]
        sup = j_inf_h1(vals2, derivs2, cell=cell2)
        vals3 = vals2 if self.shared_grid else _network_table(params, self.grid3)[0]
        space_time = j_pq(vals3, self.pair, cells=self.cells3)
        return MonitorValues(mismatch, sup, space_time)


def monitor_constants(params, cfg, reference=None):
    """The (mismatch, sup-H^1, space-time) constants for one network."""
    if reference is None:
        reference = cfg.reference()
    return _Monitors(cfg, reference).compute(params)


class _TestGrid:
    """Cached reference samples on the error-metric grid."""

    def __init__(self, cfg, reference):
        self.grid = SpaceTimeGrid.uniform(cfg.half_width, cfg.half_time, cfg.n_test, cfg.m_test)
        self.ref_vals, self.ref_derivs = _reference_table(reference, self.grid)
        self.pair = pair_from_alpha(cfg.alpha)
        self.qs = admissible_q_grid(cfg.q_min, cfg.q_max, cfg.q_count)
        self.cells = self.grid.cell_sizes() if cfg.cell_scaling else None

    def difference(self, params):
        vals, derivs = _network_table(params, self.grid)
        return vals - self.ref_vals, derivs - self.ref_derivs

    def metrics(self, params):
        dv, dd = self.difference(params)
        cell_x = None if self.cells is None else self.cells[1]
        linf_h1 = j_inf_h1(dv, dd, cell=cell_x)
        lp_w1q = j_pq(dv, self.pair, x_derivatives=dd, cells=self.cells)
        sprime = linf_h1
        for q in self.qs:
            sprime = max(sprime, self._single_q(dv, dd, q, cell_x))
        return ErrorMetrics(sprime=sprime, lp_w1q=lp_w1q, linf_h1=linf_h1)

    def _single_q(self, dv, dd, q, cell_x):
        if q == 2.0:
            return j_inf_h1(dv, dd, cell=cell_x)
        return j_pq(dv, pair_from_q(q), x_derivatives=dd, cells=self.cells)

    def q_curve(self, params):
        dv, dd = self.difference(params)
        cell_x = None if self.cells is None else self.cells[1]
        rows = []
        for q in self.qs:
            pair = pair_from_q(q)
            rows.append((float(q), float(pair.p), self._single_q(dv, dd, q, cell_x)))
        return rows


def error_metrics(params, reference, cfg):
    """Sobolev-mode error functionals of the network against a reference."""
    return _TestGrid(cfg, reference).metrics(params)


def q_error_curve(params, reference, cfg):
    """(q, p, error) rows over the admissible exponent grid."""
    return _TestGrid(cfg, reference).q_curve(params)


@dataclass
class RunReport:
    """Everything a finished training run produced, ready to serialize."""

    config: dict
    seed: int
    iterations: list = field(default_factory=list)
    milestone_errors: dict = field(default_factory=dict)
    final_errors: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0
    evaluations: int = 0
    stalled: bool = False
    diagnostics: dict = field(default_factory=dict)
    optimizer_records: list = field(default_factory=list)
    final_parameters: np.ndarray | None = None  # not serialized; see checkpoint

    def to_dict(self):
        return {
            "config": self.config,
            "seed": self.seed,
            "iterations": self.iterations,
            "milestone_errors": self.milestone_errors,
            "final_errors": self.final_errors,
            "elapsed_seconds": self.elapsed_seconds,
            "evaluations": self.evaluations,
            "stalled": self.stalled,
            "diagnostics": self.diagnostics,
        }


def build_loss(cfg, reference=None):
    """The differentiable loss evaluator a config describes."""
    if reference is None:
        reference = cfg.reference()
    grid4 = SpaceTimeGrid.uniform(cfg.half_width, cfg.half_time, cfg.n4, cfg.m4)
    grid5 = SpaceTimeGrid.uniform(cfg.half_width, cfg.half_time, cfg.n5, cfg.m5)
    return LossEvaluator(
        reference,
        cfg.alpha,
        grid4,
        grid5,
        propagator_points=cfg.propagator_points,
        half_width=cfg.half_width,
        use_cell_scaling=cfg.cell_scaling,
    )


def architecture_from_config(cfg):
    scale = (cfg.half_time, cfg.half_width) if cfg.input_scaling else None
    return network.Architecture(
        hidden_layers=cfg.hidden_layers, hidden_width=cfg.hidden_width, input_scale=scale
    )


def train(cfg, seed=None):
    """Initialize, optimize, and evaluate one run; returns its RunReport.

    Training stalls surface in the report (``stalled``), never as silent
    truncation: the iteration series always matches the completed count.
    """
    seed = cfg.seed if seed is None else seed
    reference = cfg.reference()
    evaluator = build_loss(cfg, reference)
    arch = architecture_from_config(cfg)
    params0 = network.init_glorot(arch, seed)
    objective = evaluator.flat_objective(arch)

    monitors = _Monitors(cfg, reference)
    test_grid = _TestGrid(cfg, reference)
    milestones = set(int(m) for m in cfg.milestones if int(m) <= cfg.max_iters)

    report = RunReport(config=cfg.to_dict(), seed=seed)
    last_monitor = [None]

    def callback(record, flat):
        params = network.NetworkParams.unflatten(arch, flat)
        if last_monitor[0] is None or record.iteration % max(1, cfg.monitor_every) == 0:
            last_monitor[0] = monitors.compute(params)
        mon = last_monitor[0]
        report.iterations.append(
            {
                "iteration": record.iteration,
                "wall_seconds": record.wall_seconds,
                "loss": record.loss,
                "A_tilde": mon.mismatch_h1,
                "A": mon.sup_h1,
                "B": mon.space_time,
            }
        )
        if record.iteration in milestones:
            report.milestone_errors[record.iteration] = test_grid.metrics(params).as_dict()

    start = time.perf_counter()
    options = LbfgsOptions(
        history=cfg.history,
        c1=cfg.wolfe_c1,
        c2=cfg.wolfe_c2,
        initial_step=cfg.initial_step,
        max_line_search=cfg.max_line_search,
        grad_tol=cfg.grad_tol,
    )
    flat_final, records = lbfgs.run(
        params0.flatten(), objective, cfg.max_iters, callback=callback, options=options
    )
    report.elapsed_seconds = time.perf_counter() - start

    params_final = network.NetworkParams.unflatten(arch, flat_final)
    report.final_errors = test_grid.metrics(params_final).as_dict()
    report.evaluations = records[-1].evaluations if records else 1
    report.stalled = len(records) < cfg.max_iters
    report.optimizer_records = records
    report.final_parameters = flat_final

    xk = propagator.uniform_grid(cfg.half_width, cfg.propagator_points)
    u0_vals, _ = reference.evaluate(np.zeros_like(xk), xk)
    net0 = network.forward_values(params_final, np.zeros_like(xk), xk)
    field_mismatch = propagator.analyze(xk, u0_vals - (net0[0] + 1j * net0[1]))
    report.diagnostics["propagator_tail_fraction"] = propagator.tail_mass_fraction(field_mismatch)

    if cfg.out:
        write_outputs(report, params_final, cfg)
    return report


# ---------------------------------------------------------------------------
# persistence


def _write_csv(path, header, rows, seed):
    with open(path, "w", newline="") as fh:
        fh.write(f"# seed = {seed}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_outputs(report, params, cfg, out_dir=None):
    """Write report.json, CSV series, checkpoint, slices, and plot data."""
    out = out_dir or cfg.out
    os.makedirs(out, exist_ok=True)
    seed = report.seed

    with open(os.path.join(out, "report.json"), "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)

    _write_csv(
        os.path.join(out, "iterations.csv"),
        ["iteration", "wall_seconds", "loss", "A_tilde", "A", "B"],
        [
            [r["iteration"], f"{r['wall_seconds']:.6f}", repr(r["loss"]), repr(r["A_tilde"]), repr(r["A"]), repr(r["B"])]
            for r in report.iterations
        ],
        seed,
    )
    lbfgs.write_log_csv(report.optimizer_records, os.path.join(out, "optimizer_log.csv"))

    error_rows = [
        [it, e["error_LpW1q"], e["error_LinfH1"], e["error_Sprime"]]
        for it, e in sorted(report.milestone_errors.items())
    ]
    if report.final_errors:
        final_it = report.iterations[-1]["iteration"] if report.iterations else 0
        error_rows.append(
            [
                f"final({final_it})",
                report.final_errors["error_LpW1q"],
                report.final_errors["error_LinfH1"],
                report.final_errors["error_Sprime"],
            ]
        )
    _write_csv(
        os.path.join(out, "errors.csv"),
        ["iteration", "error_LpW1q", "error_LinfH1", "error_Sprime"],
        error_rows,
        seed,
    )

    network.save_checkpoint(
        params,
        os.path.join(out, "checkpoint.bin"),
        os.path.join(out, "checkpoint.json"),
        seed=seed,
        extra={"config": report.config},
    )
    emit_plots(report, params, cfg, out)


def emit_plots(report, params, cfg, out_dir):
    """Slice tables, the q-sweep error curve, and a CSV-only plot script."""
    os.makedirs(out_dir, exist_ok=True)
    reference = cfg.reference()
    seed = report.seed
    xs = np.linspace(-cfg.half_width, cfg.half_width, cfg.n_test)
    slice_files = []
    for t in cfg.default_slice_times():
        exact, _ = reference.evaluate(np.full_like(xs, t), xs)
        u = network.forward(params, np.full_like(xs, t), xs)
        dnn = np.asarray(u.re.v) + 1j * np.asarray(u.im.v)
        name = f"slices_t{t:g}.csv"
        slice_files.append(name)
        _write_csv(
            os.path.join(out_dir, name),
            ["x", "re_exact", "im_exact", "re_dnn", "im_dnn"],
            [
                [x, ue.real, ue.imag, ud.real, ud.imag]
                for x, ue, ud in zip(xs, exact, dnn)
            ],
            seed,
        )

    curve = q_error_curve(params, reference, cfg)
    _write_csv(
        os.path.join(out_dir, "qsweep.csv"),
        ["q", "p", "error"],
        [[q, p, err] for q, p, err in curve],
        seed,
    )

    with open(os.path.join(out_dir, "plot.py"), "w") as fh:
        fh.write(_PLOT_SCRIPT.format(slices=slice_files))


_PLOT_SCRIPT = '''"""Render the run's CSV outputs (no package imports needed)."""
import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read(name):
    with open(os.path.join(HERE, name)) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, data = rows[0], rows[1:]
    return header, [[float(v) if i or not v.startswith("final") else v
                     for i, v in enumerate(row)] for row in data]


slice_files = {slices}
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for name in slice_files:
    _, data = read(name)
    xs = [row[0] for row in data]
    label = name.replace("slices_", "").replace(".csv", "")
    axes[0].plot(xs, [row[1] for row in data], label=f"exact {{label}}")
    axes[0].plot(xs, [row[3] for row in data], "--", label=f"dnn {{label}}")
    axes[1].plot(xs, [row[2] for row in data], label=f"exact {{label}}")
    axes[1].plot(xs, [row[4] for row in data], "--", label=f"dnn {{label}}")
axes[0].set_title("real part"), axes[1].set_title("imaginary part")
for ax in axes:
    ax.set_xlabel("x"), ax.legend(fontsize=7)
fig.savefig(os.path.join(HERE, "slices.png"), dpi=150)

_, iters = read("iterations.csv")
fig, axes = plt.subplots(2, 2, figsize=(10, 7))
series = {{"loss": 2, "A_tilde": 3, "A": 4, "B": 5}}
for ax, (label, col) in zip(axes.ravel(), series.items()):
    ax.plot([r[0] for r in iters], [r[col] for r in iters])
    ax.set_title(label), ax.set_xlabel("iteration")
    if label in ("loss", "A_tilde"):
        ax.set_yscale("log")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "constants.png"), dpi=150)

_, sweep = read("qsweep.csv")
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot([r[0] for r in sweep], [r[2] for r in sweep])
ax.set_xlabel("q"), ax.set_ylabel("space-time error"), ax.set_yscale("log")
fig.savefig(os.path.join(HERE, "qsweep.png"), dpi=150)
print("wrote slices.png, constants.png, qsweep.png")
'''


# ---------------------------------------------------------------------------
# sweeps and the split-step cross-check


def sweep(cfg, parameter, values, out_dir=None):
    """Train once per parameter value; failures are recorded, not fatal."""
    if not values:
        raise ValueError("sweep needs a nonempty parameter list")
    results = []
    for value in values:
        run_cfg = dataclasses.replace(cfg, **{parameter: value})
        if out_dir:
            run_cfg = dataclasses.replace(
                run_cfg, out=os.path.join(out_dir, f"{parameter}_{value}")
            )
        try:
            results.append((value, train(run_cfg), None))
        except Exception as exc:  # noqa: BLE001 - per-run isolation is the contract
            results.append((value, None, f"{type(exc).__name__}: {exc}"))
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        rows = []
        for value, report, failure in results:
            if report is None:
                rows.append([value] + ["failed"] * 8 + [failure])
                continue
            last = report.iterations[-1]
            rows.append(
                [
                    value,
                    f"{report.elapsed_seconds:.3f}",
                    last["loss"],
                    last["A_tilde"],
                    last["A"],
                    last["B"],
                    report.final_errors["error_LpW1q"],
                    report.final_errors["error_LinfH1"],
                    report.final_errors["error_Sprime"],
                    "",
                ]
            )
        _write_csv(
            os.path.join(out_dir, "sweep.csv"),
            [
                parameter,
                "elapsed_seconds",
                "loss",
                "A_tilde",
                "A",
                "B",
                "error_LpW1q",
                "error_LinfH1",
                "error_Sprime",
                "failure",
            ],
            rows,
            cfg.seed,
        )
    return results


def oracle_comparison(cfg, params=None, times=21, grid_size=1024, dt=1e-3, margin=2.5):
    """Distances between the network, the split-step run, and the closed form.

    The split-step box extends ``margin`` times beyond the training
    half-width (at least to 20) so the periodic boundary stays quiet.
    Distances are discrete L2 values over the training box.
    """
    reference = cfg.reference()
    half_width = max(20.0, margin * cfg.half_width)
    ss_cfg = splitstep.SplitStepConfig(half_width, grid_size, dt, cfg.alpha)
    xs = splitstep.grid(ss_cfg)
    u0, _ = reference.evaluate(np.zeros_like(xs), xs)
    ts = np.linspace(-cfg.half_time, cfg.half_time, int(times))
    table = splitstep.splitstep_table(u0, ss_cfg, ts)

    inside = np.abs(xs) <= cfg.half_width
    dx = xs[1] - xs[0]
    exact = np.vstack(
        [reference.evaluate(np.full(inside.sum(), t), xs[inside])[0] for t in ts]
    )
    oracle_vals = table[:, inside]
    result = {
        "oracle_vs_exact": splitstep.discrete_l2(oracle_vals - exact, dx) / np.sqrt(len(ts)),
        "times": ts.tolist(),
    }
    if params is not None:
        rows = []
        for t in ts:
            u = network.forward(params, np.full(inside.sum(), t), xs[inside])
            rows.append(np.asarray(u.re.v) + 1j * np.asarray(u.im.v))
        net_vals = np.vstack(rows)
        result["network_vs_oracle"] = splitstep.discrete_l2(net_vals - oracle_vals, dx) / np.sqrt(len(ts))
        result["network_vs_exact"] = splitstep.discrete_l2(net_vals - exact, dx) / np.sqrt(len(ts))
    return result
