"""Deterministic property suites: differentiation, closed forms, propagator,
functionals, optimizer, and the split-step integrator.

Each check compares an implementation path against an independent route
(central finite differences, brute-force nested means, closed-form free
evolutions, known minimizers) at fixed tolerances and returns a
CheckResult; the CLI ``verify`` command prints one line per check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lbfgs, network, propagator, splitstep
from .harness import build_loss
from .config import default_config
from .network import Architecture, NetworkParams, init_glorot
from .norms import SpaceTimeGrid, j_pq, pair_from_alpha, pair_from_q
from .residual import residual_from_jet
from .solutions import (
    make_kuznetsov_ma,
    make_peregrine,
    make_soliton,
    make_standing_wave,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _fd_jet(f, t, x, h=1e-3):
    """Fourth-order central differences of a scalar map (t, x) -> value."""
    def val(tt, xx):
        return f(tt, xx)

    v = val(t, x)
    d_t = (8 * (val(t + h, x) - val(t - h, x)) - (val(t + 2 * h, x) - val(t - 2 * h, x))) / (12 * h)
    d_x = (8 * (val(t, x + h) - val(t, x - h)) - (val(t, x + 2 * h) - val(t, x - 2 * h))) / (12 * h)
    d_xx = (
        -(val(t, x + 2 * h) + val(t, x - 2 * h))
        + 16 * (val(t, x + h) + val(t, x - h))
        - 30 * v
    ) / (12 * h * h)
    return v, d_t, d_x, d_xx


def _rel_err(a, b, scale=1.0):
    return abs(a - b) / max(abs(a), abs(b), scale)


def check_jets_match_finite_differences(draws=100, seed=2024, tol=1e-6):
    """Network jet slots vs central finite differences of forward values."""
    rng = np.random.default_rng(seed)
    arch = Architecture(hidden_layers=4, hidden_width=20)
    worst = 0.0
    for k in range(draws):
        params = init_glorot(arch, int(rng.integers(0, 2**31)))
        t = float(rng.uniform(-2, 2))
        x = float(rng.uniform(-8, 8))
        jet = network.forward(params, t, x)
        for part in (0, 1):
            def component(tt, xx, part=part):
                vals = network.forward_values(params, tt, xx)
                return float(vals[part][0])

            v, d_t, d_x, d_xx = _fd_jet(component, t, x)
            slot = jet.re if part == 0 else jet.im
            worst = max(
                worst,
                _rel_err(slot.v, v),
                _rel_err(slot.dt, d_t),
                _rel_err(slot.dx, d_x),
                _rel_err(slot.dxx, d_xx),
            )
    return CheckResult(
        "jet components vs finite differences",
        worst <= tol,
        f"max relative deviation {worst:.2e} over {draws} draws (tol {tol:.0e})",
    )


def check_loss_gradient_matches_finite_differences(draws=3, seed=7, tol=1e-4):
    """Full training-loss gradient vs central differences, component by component."""
    cfg = default_config("soliton", n4=8, m4=8, n5=8, m5=8, propagator_points=16)
    evaluator = build_loss(cfg)
    arch = Architecture(hidden_layers=4, hidden_width=20)
    worst = 0.0
    for k in range(draws):
        params = init_glorot(arch, seed + k)
        flat = params.flatten()
        _, grad = evaluator.value_and_gradient(params)
        h = 1e-4
        scale = max(1.0, float(np.max(np.abs(grad))))
        for i in range(flat.size):
            probe = flat.copy()
            probe[i] = flat[i] + h
            up = evaluator.value(NetworkParams.unflatten(arch, probe))
            probe[i] = flat[i] - h
            down = evaluator.value(NetworkParams.unflatten(arch, probe))
            fd = (up - down) / (2 * h)
            err = abs(grad[i] - fd) / max(abs(grad[i]), abs(fd), 1e-4 * scale)
            worst = max(worst, err)
    return CheckResult(
        "loss gradient vs finite differences",
        worst <= tol,
        f"max relative deviation {worst:.2e} over {draws} full gradients (tol {tol:.0e})",
    )


def check_exact_solution_residuals(tol=1e-5):
    """The four closed forms annihilate the residual (analytic jets)."""
    cases = [
        ("soliton", make_soliton(1.0, 1.0), 3.0, 2.0, 8.0),
        ("peregrine", make_peregrine(), 3.0, 2.0, 10.0),
        ("kuznetsov_ma", make_kuznetsov_ma(0.75), 3.0, 1.0, 5.0),
        ("standing_wave", make_standing_wave(1.0, 2.0), 2.0, 2.0, 8.0),
    ]
    worst_name, worst = "", 0.0
    for name, ref, alpha, half_time, half_width in cases:
        tt = np.repeat(np.linspace(-half_time, half_time, 50), 50)
        xx = np.tile(np.linspace(-half_width, half_width, 50), 50)
        residual = residual_from_jet(ref.evaluate_jet(tt, xx), alpha)
        peak = float(np.max(np.abs(residual)))
        if peak > worst:
            worst_name, worst = name, peak
    return CheckResult(
        "closed-form residuals",
        worst <= tol,
        f"max |residual| {worst:.2e} (worst family: {worst_name}, tol {tol:.0e})",
    )


def check_propagator(tol_identity=1e-12, tol_gaussian=1e-6):
    """Identity at t=0, grid-point L2 conservation, Gaussian law, semigroup."""
    rng = np.random.default_rng(11)
    xk = propagator.uniform_grid(8.0, 64)
    samples = rng.normal(size=64) + 1j * rng.normal(size=64)
    field = propagator.analyze(xk, samples)

    identity = np.max(np.abs(propagator.evolve_at(field, 0.0, xk) - samples))

    t = 0.37
    evolved = propagator.evolve_at(field, t, xk)
    conservation = abs(
        np.sum(np.abs(evolved) ** 2) - np.sum(np.abs(samples) ** 2)
    ) / np.sum(np.abs(samples) ** 2)

    twice = propagator.analyze(xk, propagator.evolve_at(field, 0.21, xk))
    semigroup = np.max(
        np.abs(propagator.evolve_at(twice, 0.16, xk) - propagator.evolve_at(field, 0.37, xk))
    )

    xg = propagator.uniform_grid(20.0, 256)
    gfield = propagator.analyze(xg, np.exp(-(xg**2)).astype(complex))
    probe = np.linspace(-5.0, 5.0, 41)
    numeric = propagator.evolve_at(gfield, 0.5, probe)
    closed = np.exp(-(probe**2) / (1 + 4j * 0.5)) / np.sqrt(1 + 4j * 0.5)
    gaussian = np.max(np.abs(numeric - closed))

    passed = (
        identity <= tol_identity
        and conservation <= tol_identity
        and semigroup <= tol_identity
        and gaussian <= tol_gaussian
    )
    return CheckResult(
        "spectral free propagator",
        passed,
        f"identity {identity:.1e}, conservation {conservation:.1e}, "
        f"semigroup {semigroup:.1e}, gaussian {gaussian:.1e}",
    )


def _brute_force_pq(values, p, q, weights):
    m, n = values.shape
    total = 0.0
    for l in range(m):
        inner = 0.0
        for j in range(n):
            inner += weights[l][j] * abs(values[l][j]) ** q
        total += (inner / n) ** (p / q)
    return (total / m) ** (1.0 / p)


def check_functionals(cases=100, seed=5, tol=1e-12):
    """j_pq vs a brute-force nested mean; homogeneity; weight monotonicity."""
    rng = np.random.default_rng(seed)
    pair = pair_from_alpha(3.0)
    conjugates_ok = (pair.p, pair.q) == (8.0, 4.0) and (
        pair.p_conj,
        pair.q_conj,
    ) == (8.0 / 7.0, 4.0 / 3.0)
    worst = 0.0
    monotone_ok = homogeneous_ok = True
    for _ in range(cases):
        values = rng.normal(size=(5, 7)) + 1j * rng.normal(size=(5, 7))
        q = float(rng.uniform(2.0, 12.0))
        this_pair = pair_from_q(q)
        direct = j_pq(values, this_pair)
        brute = _brute_force_pq(values, this_pair.p, this_pair.q, np.ones((5, 7)))
        worst = max(worst, _rel_err(direct, brute))

        c = float(rng.uniform(0.1, 10.0))
        if _rel_err(j_pq(values * c, this_pair), c * direct) > 1e-12:
            homogeneous_ok = False

        weights = rng.uniform(0.2, 1.0, size=(5, 7))
        lowered = weights.copy()
        lowered[rng.integers(0, 5), rng.integers(0, 7)] *= rng.uniform(0.0, 0.9)
        if j_pq(values, this_pair, weights=lowered) > j_pq(values, this_pair, weights=weights) + 1e-14:
            monotone_ok = False
    passed = conjugates_ok and worst <= tol and monotone_ok and homogeneous_ok
    return CheckResult(
        "discrete functionals",
        passed,
        f"brute-force deviation {worst:.2e}, conjugates {'ok' if conjugates_ok else 'BAD'}, "
        f"homogeneity {'ok' if homogeneous_ok else 'BAD'}, monotonicity {'ok' if monotone_ok else 'BAD'}",
    )


def check_optimizer():
    """Quadratic and Rosenbrock convergence plus bit-identical reruns."""

    def quadratic(x):
        return float(x @ x), 2.0 * x

    xq, rec_q = lbfgs.run(np.array([1.0, 1.0]), quadratic, 10)
    quad_ok = float(np.linalg.norm(xq)) <= 1e-8 and len(rec_q) <= 10

    def rosenbrock(z):
        x, y = z
        f = (1 - x) ** 2 + 100.0 * (y - x * x) ** 2
        g = np.array([-2 * (1 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x)])
        return float(f), g

    xr, rec_r = lbfgs.run(np.array([-1.2, 1.0]), rosenbrock, 200)
    rosen_ok = float(np.max(np.abs(xr - 1.0))) <= 1e-6

    cfg = default_config("soliton", n4=6, m4=6, n5=6, m5=6, propagator_points=16, max_iters=5)
    evaluator = build_loss(cfg)
    arch = Architecture(hidden_layers=2, hidden_width=8)
    objective = evaluator.flat_objective(arch)
    runs = []
    for _ in range(2):
        x0 = init_glorot(arch, 3).flatten()
        xf, _ = lbfgs.run(x0, objective, 5)
        runs.append(xf)
    deterministic = bool(np.array_equal(runs[0], runs[1]))

    passed = quad_ok and rosen_ok and deterministic
    return CheckResult(
        "L-BFGS",
        passed,
        f"quadratic {'ok' if quad_ok else 'BAD'} ({len(rec_q)} iters), "
        f"rosenbrock {'ok' if rosen_ok else 'BAD'} ({len(rec_r)} iters), "
        f"repeatable {'ok' if deterministic else 'BAD'}",
    )


def check_splitstep(tol=1e-4):
    """Soliton accuracy at t=0.5 and second-order error decay in dt."""
    ref = make_soliton(1.0, 1.0)
    errors = {}
    for dt in (1e-3, 5e-4):
        cfg = splitstep.SplitStepConfig(20.0, 1024, dt, 3.0)
        xs = splitstep.grid(cfg)
        u0, _ = ref.evaluate(np.zeros_like(xs), xs)
        evolved = splitstep.splitstep_evolve(u0, cfg, 0.5)
        exact, _ = ref.evaluate(np.full_like(xs, 0.5), xs)
        errors[dt] = splitstep.discrete_l2(evolved - exact, xs[1] - xs[0])
    ratio = errors[1e-3] / errors[5e-4]
    passed = errors[1e-3] <= tol and 3.0 <= ratio <= 5.0
    return CheckResult(
        "split-step integrator",
        passed,
        f"soliton L2 error {errors[1e-3]:.2e} at dt=1e-3 (tol {tol:.0e}), halving ratio {ratio:.2f}",
    )


ALL_CHECKS = (
    check_jets_match_finite_differences,
    check_loss_gradient_matches_finite_differences,
    check_exact_solution_residuals,
    check_propagator,
    check_functionals,
    check_optimizer,
    check_splitstep,
)


def run_all(quick=False):
    results = []
    for check in ALL_CHECKS:
        if quick and check is check_jets_match_finite_differences:
            results.append(check(draws=10))
        elif quick and check is check_loss_gradient_matches_finite_differences:
            results.append(check(draws=1))
        else:
            results.append(check())
    return results
