"""Closed-form solutions of i u_t + u_xx + |u|^(alpha-1) u = 0.

Four families: the traveling solitary wave, the Peregrine and Kuznetsov-Ma
breathers on a unit background (cubic case), and the standing wave for
general power.  Each is evaluated through jet arithmetic, so the reported
space derivative (and the u_t, u_xx used by residual checks) are exact
analytic values, not finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleError
from .jets import Jet, Jet2, cis, cos, exp, power, seed_input, sin

KM_POLE_TOLERANCE = 1e-12


def _sech(f):
    return 2.0 / (exp(f) + exp(-f))


def _soliton_jet(c, nu, tj, xj):
    moving = xj - nu * tj
    phase = (0.5 * nu) * xj - (0.25 * nu * nu - c) * tj
    amplitude = math.sqrt(2.0 * c) * _sech(math.sqrt(c) * moving)
    return cis(phase) * amplitude


def _peregrine_jet(tj, xj):
    denom = 1.0 + 4.0 * (tj * tj) + 2.0 * (xj * xj)
    bump = Jet2(Jet.constant(1.0), 2.0 * tj) * (4.0 / denom)
    return cis(tj) * (Jet2.constant(1.0) - bump)


def _km_jet(a, tj, xj):
    alpha_t = math.sqrt(8.0 * a * (2.0 * a - 1.0))
    beta_x = math.sqrt(2.0 * (2.0 * a - 1.0))
    ch = 0.5 * (exp(beta_x * xj) + exp(-(beta_x * xj)))
    denom = alpha_t * ch - (math.sqrt(2.0) * beta_x) * cos(alpha_t * tj)
    if np.min(np.abs(np.asarray(denom.v))) < KM_POLE_TOLERANCE:
        raise PoleError("Kuznetsov-Ma denominator within 1e-12 of zero")
    osc = Jet2(beta_x * beta_x * cos(alpha_t * tj), alpha_t * sin(alpha_t * tj))
    frac = (osc * (math.sqrt(2.0) * beta_x)) / denom
    return cis(tj) * (Jet2.constant(1.0) - frac)


def _standing_wave_jet(omega, alpha, tj, xj):
    profile = (0.5 * (alpha + 1.0) * omega) * power(
        _sech((0.5 * (alpha - 1.0) * math.sqrt(omega)) * xj), 2.0
    )
    amplitude = power(profile, 1.0 / (alpha - 1.0))
    return cis(omega * tj) * amplitude


@dataclass(frozen=True)
class ReferenceSolution:
    """A closed-form field with exact jet evaluation.

    ``evaluate`` returns (u, u_x) as complex values; ``evaluate_jet``
    returns the full second-order jet for residual verification.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def evaluate_jet(self, t, x):
        tj, xj = seed_input(t, x)
        if self.kind == "soliton":
            return _soliton_jet(self.params["c"], self.params["nu"], tj, xj)
        if self.kind == "peregrine":
            return _peregrine_jet(tj, xj)
        if self.kind == "kuznetsov_ma":
            return _km_jet(self.params["a"], tj, xj)
        if self.kind == "standing_wave":
            return _standing_wave_jet(self.params["omega"], self.params["alpha"], tj, xj)
        raise DomainError(f"unknown reference solution kind: {self.kind!r}")

    def evaluate(self, t, x):
        jet = self.evaluate_jet(t, x)
        return jet.u, jet.u_x

    @property
    def alpha(self):
        """Nonlinearity power this family solves (cubic unless standing wave)."""
        return self.params.get("alpha", 3.0)

    @property
    def modulus_period(self):
        """Temporal period of |u| for the Kuznetsov-Ma breather, else None."""
        if self.kind != "kuznetsov_ma":
            return None
        a = self.params["a"]
        return 2.0 * math.pi / math.sqrt(8.0 * a * (2.0 * a - 1.0))


def make_soliton(c, nu):
    if c <= 0:
        raise DomainError("soliton requires c > 0")
    return ReferenceSolution("soliton", {"c": float(c), "nu": float(nu)})


def make_peregrine():
    return ReferenceSolution("peregrine")


def make_kuznetsov_ma(a):
    if a <= 0.5:
        raise DomainError("Kuznetsov-Ma breather requires a > 1/2")
    return ReferenceSolution("kuznetsov_ma", {"a": float(a)})


def make_standing_wave(omega, alpha):
    if omega <= 0:
        raise DomainError("standing wave requires omega > 0")
    if not 1.0 < alpha < 5.0:
        raise DomainError("standing wave requires alpha in (1, 5)")
    return ReferenceSolution("standing_wave", {"omega": float(omega), "alpha": float(alpha)})


def soliton(c, nu, t, x):
    """Traveling solitary wave: value and exact space derivative."""
    return make_soliton(c, nu).evaluate(t, x)


def peregrine(t, x):
    """Peregrine breather on a unit background."""
    return make_peregrine().evaluate(t, x)


def kuznetsov_ma(a, t, x):
    """Kuznetsov-Ma breather, time-periodic in modulus."""
    return make_kuznetsov_ma(a).evaluate(t, x)


def standing_wave(omega, alpha, t, x):
    """Standing wave for nonlinearity power alpha in (1, 5)."""
    return make_standing_wave(omega, alpha).evaluate(t, x)
