"""Split-step integrator vs closed forms: accuracy, conservation, order."""

import numpy as np
import pytest

from nlspinn import solutions, splitstep
from nlspinn.errors import DomainError, NonFinite
from nlspinn.splitstep import SplitStepConfig, discrete_l2, splitstep_evolve


def soliton_error(dt, t_final=0.5, grid_size=1024, half_width=20.0):
    ref = solutions.make_soliton(1.0, 1.0)
    cfg = SplitStepConfig(half_width, grid_size, dt, 3.0)
    xs = splitstep.grid(cfg)
    u0, _ = ref.evaluate(np.zeros_like(xs), xs)
    evolved = splitstep_evolve(u0, cfg, t_final)
    exact, _ = ref.evaluate(np.full_like(xs, t_final), xs)
    return discrete_l2(evolved - exact, xs[1] - xs[0])


def test_zero_time_is_identity():
    cfg = SplitStepConfig(10.0, 64, 1e-3, 3.0)
    xs = splitstep.grid(cfg)
    u0 = np.exp(-(xs**2)) * (1 + 0.5j)
    assert np.array_equal(splitstep_evolve(u0, cfg, 0.0), u0)


def test_plane_wave_background_is_exact():
    cfg = SplitStepConfig(10.0, 64, 1e-3, 3.0)
    u0 = np.ones(64, dtype=complex)
    evolved = splitstep_evolve(u0, cfg, 1.0)
    assert np.max(np.abs(evolved - np.exp(1j * 1.0))) < 1e-8


def test_soliton_accuracy():
    assert soliton_error(1e-3) <= 1e-4


def test_second_order_in_dt():
    ratio = soliton_error(1e-3) / soliton_error(5e-4)
    assert 3.0 <= ratio <= 5.0


def test_backward_evolution():
    ref = solutions.make_soliton(1.0, 1.0)
    cfg = SplitStepConfig(20.0, 1024, 1e-3, 3.0)
    xs = splitstep.grid(cfg)
    u0, _ = ref.evaluate(np.zeros_like(xs), xs)
    evolved = splitstep_evolve(u0, cfg, -0.5)
    exact, _ = ref.evaluate(np.full_like(xs, -0.5), xs)
    assert discrete_l2(evolved - exact, xs[1] - xs[0]) <= 1e-4


def test_mass_conservation():
    ref = solutions.make_soliton(1.0, 1.0)
    cfg = SplitStepConfig(20.0, 1024, 1e-3, 3.0)
    xs = splitstep.grid(cfg)
    u0, _ = ref.evaluate(np.zeros_like(xs), xs)
    evolved = splitstep_evolve(u0, cfg, 0.5)
    mass0 = np.sum(np.abs(u0) ** 2)
    mass1 = np.sum(np.abs(evolved) ** 2)
    assert abs(mass1 - mass0) / mass0 <= 1e-8


def test_table_times():
    ref = solutions.make_kuznetsov_ma(0.75)
    cfg = SplitStepConfig(16.0, 256, 1e-3, 3.0)
    xs = splitstep.grid(cfg)
    u0, _ = ref.evaluate(np.zeros_like(xs), xs)
    times = np.array([-0.2, 0.0, 0.3])
    table = splitstep.splitstep_table(u0, cfg, times)
    assert table.shape == (3, 256)
    assert np.array_equal(table[1], u0)
    exact, _ = ref.evaluate(np.full_like(xs, 0.3), xs)
    assert discrete_l2(table[2] - exact, xs[1] - xs[0]) < 1e-3


def test_rejects_bad_configuration():
    with pytest.raises(DomainError):
        SplitStepConfig(20.0, 1000, 1e-3, 3.0)  # not a power of two
    with pytest.raises(DomainError):
        SplitStepConfig(20.0, 1024, -1e-3, 3.0)
    cfg = SplitStepConfig(20.0, 1024, 1e-3, 3.0)
    with pytest.raises(DomainError):
        splitstep_evolve(np.zeros(17, dtype=complex), cfg, 1.0)


def test_non_finite_input_is_reported():
    cfg = SplitStepConfig(10.0, 64, 1e-2, 3.0)
    u0 = np.ones(64, dtype=complex)
    u0[3] = np.nan
    with pytest.raises(NonFinite):
        splitstep_evolve(u0, cfg, 0.1)
