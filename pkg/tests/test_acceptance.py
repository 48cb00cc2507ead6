"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Criteria 1-6 are deterministic property checks; 7-12 are desk-scale
reproductions of the reference results.  The stochastic criteria train
with five seeds and pass when at least three meet the stated bound; the
soliton runs are shared across criteria 7 and 10-12.
"""

import numpy as np
import pytest

from nlspinn import harness, network, verification
from nlspinn.config import default_config
from nlspinn.harness import oracle_comparison, q_error_curve, train

SEEDS = (0, 1, 2, 3, 4)
NEEDED = 3


def report_line(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number} ({title}): {detail}"
    print(line)
    return passed


# ---------------------------------------------------------------------------
# deterministic criteria


def test_criterion_1_jets_and_gradients():
    jets = verification.check_jets_match_finite_differences(draws=100)
    grads = verification.check_loss_gradient_matches_finite_differences(draws=3)
    ok = jets.passed and grads.passed
    assert report_line(1, "jet/gradient correctness", ok, f"{jets.detail}; {grads.detail}")


def test_criterion_2_exact_solution_residuals():
    result = verification.check_exact_solution_residuals()
    assert report_line(2, "exact-solution residuals", result.passed, result.detail)


def test_criterion_3_propagator():
    result = verification.check_propagator()
    assert report_line(3, "propagator", result.passed, result.detail)


def test_criterion_4_functionals():
    result = verification.check_functionals(cases=100)
    assert report_line(4, "functionals", result.passed, result.detail)


def test_criterion_5_optimizer():
    result = verification.check_optimizer()
    assert report_line(5, "optimizer", result.passed, result.detail)


def test_criterion_6_splitstep_oracle():
    result = verification.check_splitstep()
    assert report_line(6, "split-step oracle", result.passed, result.detail)


# ---------------------------------------------------------------------------
# stochastic criteria (>= 3 of 5 seeds)


@pytest.fixture(scope="module")
def soliton_runs():
    cfg = default_config("soliton", max_iters=3000)
    return {seed: train(cfg, seed=seed) for seed in SEEDS}


@pytest.fixture(scope="module")
def km_runs():
    cfg = default_config("kuznetsov_ma", max_iters=3000)
    return {seed: train(cfg, seed=seed) for seed in SEEDS}


@pytest.fixture(scope="module")
def peregrine_runs():
    cfg = default_config("peregrine", max_iters=3000)
    return {seed: train(cfg, seed=seed) for seed in SEEDS}


def count_passes(runs, predicate):
    outcomes = {seed: predicate(report) for seed, report in runs.items()}
    return sum(outcomes.values()), outcomes


def test_criterion_7_soliton_table(soliton_runs):
    def passes(report):
        final = report.final_errors["error_Sprime"]
        loss = report.iterations[-1]["loss"]
        early = report.milestone_errors[100]
        late = report.milestone_errors[3000]
        decreasing = all(late[k] < early[k] for k in late)
        return final <= 6e-2 and loss <= 1e-2 and decreasing

    n, outcomes = count_passes(soliton_runs, passes)
    finals = [f"{r.final_errors['error_Sprime']:.3e}" for r in soliton_runs.values()]
    assert report_line(
        7, "soliton reproduction", n >= NEEDED,
        f"{n}/5 seeds within error_Sprime<=6e-2 & loss<=1e-2 (finals: {finals})",
    )


def test_criterion_8_km_breather(km_runs):
    def passes(report):
        return report.final_errors["error_Sprime"] <= 9e-2

    n, _ = count_passes(km_runs, passes)
    finals = [f"{r.final_errors['error_Sprime']:.3e}" for r in km_runs.values()]
    assert report_line(8, "Kuznetsov-Ma reproduction", n >= NEEDED, f"{n}/5 seeds <= 9e-2 (finals: {finals})")


def test_criterion_9_peregrine(peregrine_runs):
    def passes(report):
        final = report.final_errors["error_Sprime"]
        improving = (
            report.milestone_errors[3000]["error_Sprime"]
            < report.milestone_errors[1000]["error_Sprime"]
        )
        return final <= 1.5e-1 and improving

    n, _ = count_passes(peregrine_runs, passes)
    finals = [f"{r.final_errors['error_Sprime']:.3e}" for r in peregrine_runs.values()]
    assert report_line(9, "Peregrine reproduction", n >= NEEDED, f"{n}/5 seeds <= 1.5e-1 (finals: {finals})")


def test_criterion_10_monitor_behavior(soliton_runs):
    def passes(report):
        first = report.iterations[0]["A_tilde"]
        last = report.iterations[-1]["A_tilde"]
        drop = first / max(last, 1e-300) >= 100.0
        tail = report.iterations[len(report.iterations) * 2 // 3 :]
        bounded = max(r["A"] for r in tail) <= 2 * 0.619 and max(r["B"] for r in tail) <= 2 * 0.753
        return drop and bounded

    n, _ = count_passes(soliton_runs, passes)
    drops = [
        f"{r.iterations[0]['A_tilde'] / r.iterations[-1]['A_tilde']:.0f}x"
        for r in soliton_runs.values()
    ]
    assert report_line(
        10, "monitor behavior", n >= NEEDED,
        f"{n}/5 seeds with >=100x mismatch drop and bounded A, B (drops: {drops})",
    )


def test_criterion_11_q_sweep_shape(soliton_runs):
    # Known-red criterion: in float64 the nested (p, q) mean tends to a
    # sup-type value as q grows, so for spatially concentrated trained
    # errors the q = 50 value sits *above* the q = 2 endpoint.  The
    # reported decreasing-to-zero trend is reproducible only with
    # reduced-precision arithmetic (|error|^q underflows single precision
    # beyond q ~ 22 for errors of size 1e-2).  The check is kept verbatim.
    cfg = default_config("soliton", max_iters=3000)
    reference = cfg.reference()
    pairs = []

    def passes(report):
        arch = harness.architecture_from_config(cfg)
        params = network.NetworkParams.unflatten(arch, report.final_parameters)
        curve = dict((q, err) for q, _, err in q_error_curve(params, reference, cfg))
        pairs.append((curve[2.0], curve[50.0]))
        return curve[2.0] >= curve[50.0]

    n, _ = count_passes(soliton_runs, passes)
    shown = ", ".join(f"{a:.3e} vs {b:.3e}" for a, b in pairs)
    assert report_line(
        11, "q-sweep error shape", n >= NEEDED,
        f"{n}/5 seeds with error(q=2) >= error(q=50) (measured: {shown})",
    )


def test_criterion_12_oracle_cross_check(soliton_runs):
    cfg = default_config("soliton", max_iters=3000)

    def passes(report):
        arch = harness.architecture_from_config(cfg)
        params = network.NetworkParams.unflatten(arch, report.final_parameters)
        result = oracle_comparison(cfg, params)
        return result["network_vs_oracle"] <= 2.0 * result["network_vs_exact"]

    n, _ = count_passes(soliton_runs, passes)
    assert report_line(
        12, "split-step cross-check", n >= NEEDED,
        f"{n}/5 seeds within 2x of the closed-form distance",
    )
