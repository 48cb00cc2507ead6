"""Limited-memory BFGS with a strong-Wolfe line search.

Plain numpy, deterministic, and single-threaded at the driver level: the
two-loop recursion builds the search direction from at most ``history``
curvature pairs, the line search brackets and zooms until both strong
Wolfe conditions hold, and pairs violating s·y > 0 are skipped.  The
objective is any callable ``flat -> (loss, grad)``.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import LineSearchFailed, NonFiniteGradient


@dataclass(frozen=True)
class LbfgsOptions:
    history: int = 100
    c1: float = 1e-4
    c2: float = 0.9
    initial_step: float = 1.0
    max_line_search: int = 25
    grad_tol: float = 1e-10


@dataclass
class IterationRecord:
    iteration: int
    wall_seconds: float
    loss: float
    grad_norm: float
    step_length: float
    evaluations: int
    note: str = ""


@dataclass
class LbfgsState:
    x: np.ndarray
    loss: float
    grad: np.ndarray
    history: list = field(default_factory=list)  # (s, y, 1/(s·y)) pairs
    iteration: int = 0
    evaluations: int = 0
    consecutive_failures: int = 0
    stalled: bool = False
    last_step_length: float = 0.0
    last_note: str = ""


def initialize(x0, objective):
    x0 = np.asarray(x0, dtype=np.float64).copy()
    loss, grad = objective(x0)
    if not (np.isfinite(loss) and np.all(np.isfinite(grad))):
        raise NonFiniteGradient("objective is not finite at the initial point")
    return LbfgsState(x=x0, loss=float(loss), grad=np.asarray(grad, dtype=np.float64), evaluations=1)


def two_loop_direction(history, grad):
    """Search direction -H·grad from the stored curvature pairs.

    With an empty history this is steepest descent scaled by the initial
    inverse-Hessian guess (the s·y/y·y scaling of the newest pair).
    """
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if history:
        s, y, _ = history[-1]
        gamma = float(s @ y) / float(y @ y)
    else:
        gamma = 1.0
    r = gamma * q
    for (s, y, rho), a in zip(history, reversed(alphas)):
        beta = rho * float(y @ r)
        r += (a - beta) * s
    return -r


def _probe(objective, x, direction, step, counter):
    counter[0] += 1
    try:
        loss, grad = objective(x + step * direction)
    except NonFiniteGradient:
        return np.inf, None, np.nan
    loss = float(loss)
    if not np.isfinite(loss):
        return np.inf, None, np.nan
    grad = np.asarray(grad, dtype=np.float64)
    return loss, grad, float(grad @ direction)


def strong_wolfe_search(objective, x, direction, loss0, slope0, options):
    """Bracket/zoom line search enforcing both strong Wolfe conditions.

    Returns (step, loss, grad, evaluations); raises LineSearchFailed when
    no acceptable step is found within ``max_line_search`` probes.
    """
    c1, c2 = options.c1, options.c2
    counter = [0]

    def fail(reason):
        exc = LineSearchFailed(reason)
        exc.evaluations = counter[0]
        return exc

    if slope0 >= 0.0:
        raise fail("search direction is not a descent direction")

    def done():
        return counter[0] >= options.max_line_search

    def zoom(lo, f_lo, slope_lo, hi, f_hi):
        while not done():
            span = hi - lo
            if abs(span) < 1e-16 * max(1.0, abs(lo)):
                break
            # quadratic model through (lo, f_lo, slope_lo) and (hi, f_hi)
            denom = 2.0 * (f_hi - f_lo - slope_lo * span)
            trial = lo - slope_lo * span * span / denom if denom != 0.0 else lo + 0.5 * span
            low, high = (lo, hi) if lo < hi else (hi, lo)
            margin = 0.1 * (high - low)
            if not np.isfinite(trial) or trial < low + margin or trial > high - margin:
                trial = 0.5 * (lo + hi)
            f_t, g_t, slope_t = _probe(objective, x, direction, trial, counter)
            if f_t > loss0 + c1 * trial * slope0 or f_t >= f_lo:
                hi, f_hi = trial, f_t
            else:
                if abs(slope_t) <= -c2 * slope0:
                    return trial, f_t, g_t
                if slope_t * (hi - lo) >= 0.0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, slope_lo = trial, f_t, slope_t
        raise fail("zoom exhausted the line-search budget")

    prev_step, prev_loss, prev_slope = 0.0, loss0, slope0
    step = options.initial_step
    first = True
    while not done():
        loss, grad, slope = _probe(objective, x, direction, step, counter)
        if loss > loss0 + c1 * step * slope0 or (not first and loss >= prev_loss):
            s, f, g = zoom(prev_step, prev_loss, prev_slope, step, loss)
            return s, f, g, counter[0]
        if abs(slope) <= -c2 * slope0:
            return step, loss, grad, counter[0]
        if slope >= 0.0:
            s, f, g = zoom(step, loss, slope, prev_step, prev_loss)
            return s, f, g, counter[0]
        prev_step, prev_loss, prev_slope = step, loss, slope
        step *= 2.0
        first = False
    raise fail("bracketing exhausted the line-search budget")


def step(state, objective, options=LbfgsOptions()):
    """One L-BFGS iteration; on line-search failure the parameters are kept
    and the failure is flagged on the state."""
    direction = two_loop_direction(state.history, state.grad)
    slope = float(state.grad @ direction)
    if slope >= 0.0:
        state.history.clear()
        direction = -state.grad
        slope = float(state.grad @ direction)
    try:
        alpha, new_loss, new_grad, evals = strong_wolfe_search(
            objective, state.x, direction, state.loss, slope, options
        )
    except LineSearchFailed as failure:
        state.evaluations += getattr(failure, "evaluations", options.max_line_search)
        state.consecutive_failures += 1
        state.history.clear()
        state.iteration += 1
        state.last_step_length = 0.0
        state.last_note = "line_search_failed"
        if state.consecutive_failures >= 2:
            state.stalled = True
        return state

    new_x = state.x + alpha * direction
    s = new_x - state.x
    y = new_grad - state.grad
    curvature = float(s @ y)
    if curvature > 0.0:
        state.history.append((s, y, 1.0 / curvature))
        if len(state.history) > options.history:
            state.history.pop(0)
        note = ""
    else:
        note = "curvature_pair_skipped"
    state.x = new_x
    state.loss = new_loss
    state.grad = new_grad
    state.evaluations += evals
    state.iteration += 1
    state.consecutive_failures = 0
    state.last_step_length = alpha
    state.last_note = note
    return state


def run(x0, objective, max_iters, callback=None, options=LbfgsOptions()):
    """Iterate L-BFGS from a flat starting vector.

    Returns (final x, iteration records).  Line-search failures become
    log entries; two in a row stop the run as a stall, as does a gradient
    max-norm below ``grad_tol``.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    state = initialize(x0, objective)
    records = []
    start = time.perf_counter()
    for _ in range(max_iters):
        if float(np.max(np.abs(state.grad))) <= options.grad_tol:
            state.stalled = True
            break
        step(state, objective, options)
        record = IterationRecord(
            iteration=state.iteration,
            wall_seconds=time.perf_counter() - start,
            loss=state.loss,
            grad_norm=float(np.max(np.abs(state.grad))),
            step_length=state.last_step_length,
            evaluations=state.evaluations,
            note=state.last_note,
        )
        records.append(record)
        if callback is not None:
            callback(record, state.x)
        if state.stalled:
            break
    return state.x, records


def write_log_csv(records, path):
    """Iteration log with the columns the optimizer interface documents."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "wall_seconds", "loss", "grad_norm", "step_length"])
        for r in records:
            writer.writerow([r.iteration, f"{r.wall_seconds:.6f}", repr(r.loss), repr(r.grad_norm), repr(r.step_length)])
