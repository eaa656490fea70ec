"""Entropic speed, entropy production rate and efficiency along geodesics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError
from .geodesic import InitialConditions, geodesic_closed_form
from .infogeo import DEFAULT_CONVENTION, MetricConvention, fisher_analytic, path_divergence
from .scenario import ALL_KINDS, NATURAL, PhysicalConstants, ScenarioKind, ScenarioSpec, lambda_of_gamma

SEARCH_LABELS = {
    ScenarioKind.CONSTANT: "Grover-like",
    ScenarioKind.OSCILLATORY: "Grover-like",
    ScenarioKind.POWERLAW: "fixed-point-like",
    ScenarioKind.EXPONENTIAL: "fixed-point-like",
}

# qualitative columns of the published summary table
QUALITATIVE_SPEED = {
    ScenarioKind.CONSTANT: "higher",
    ScenarioKind.OSCILLATORY: "high",
    ScenarioKind.POWERLAW: "low",
    ScenarioKind.EXPONENTIAL: "lower",
}


def entropic_speed(spec: ScenarioSpec, convention: MetricConvention, ic: InitialConditions) -> float:
    """Constant metric speed ``kappa sqrt(F(theta0)) thetadot0`` of the geodesic through ``ic``."""
    return convention.kappa * math.sqrt(fisher_analytic(spec, ic.theta0)) * ic.thetadot0


def entropy_production_rate(spec: ScenarioSpec, convention: MetricConvention, ic: InitialConditions) -> float:
    """Closed-form rate ``r_E = v_E^2``."""
    return entropic_speed(spec, convention, ic) ** 2


def entropy_production_rate_literal(spec, convention, ic, tau, delta=1e-3) -> float:
    """``dI/dtau`` of the divergence accumulated along the geodesic.

    With ``I = tau * int_0^tau g theta'^2`` this equals ``2 tau v_E^2`` on a
    constant-speed path, twice the closed-form rate at ``tau = 1``.
    """
    if not tau > delta:
        raise ValueError("tau must exceed the difference step")
    geo = geodesic_closed_form(spec, ic)
    if ic.xi0 + tau + delta >= geo.validity[1]:
        raise DomainError("tau exceeds the validity interval of the geodesic")
    upper = path_divergence(spec, convention, geo, tau + delta, ic.xi0, rtol=1e-13)
    lower = path_divergence(spec, convention, geo, tau - delta, ic.xi0, rtol=1e-13)
    return (upper - lower) / (2.0 * delta)


def efficiency(rates):
    """Normalizer ``r = max ceil(r_E)`` and efficiencies ``1 - r_E / r``."""
    rates = [float(r) for r in rates]
    if not rates:
        raise ValueError("need at least one rate")
    if any(not r > 0 for r in rates):
        raise ValueError("rates must be strictly positive")
    r = max(math.ceil(x) for x in rates)
    return r, [1.0 - x / r for x in rates]


def _speed_factors(lam, theta0):
    x = lam * theta0
    return {
        ScenarioKind.CONSTANT: 1.0,
        ScenarioKind.OSCILLATORY: abs(math.cos(x)),
        ScenarioKind.POWERLAW: 1.0 / (1.0 + x) ** 2,
        ScenarioKind.EXPONENTIAL: math.exp(-x),
    }


def speed_ordering(lam: float, theta0: float, rtol=1e-14):
    """Scenarios ranked by entropic speed, slowest first; ties share a group."""
    factors = _speed_factors(lam, theta0)
    ranked = sorted(ALL_KINDS, key=lambda k: (factors[k], ALL_KINDS.index(k)))
    groups = [[ranked[0]]]
    for kind in ranked[1:]:
        last = factors[groups[-1][-1]]
        if abs(factors[kind] - last) <= rtol * max(abs(last), 1e-300):
            groups[-1].append(kind)
        else:
            groups.append([kind])
    return groups


def ordering_chain_holds(lam: float, theta0: float) -> bool:
    """Whether ``exp(-x) <= (1+x)^-2 <= |cos x| <= 1`` at ``x = lam theta0``."""
    f = _speed_factors(lam, theta0)
    return (
        0.0 <= f[ScenarioKind.EXPONENTIAL]
        <= f[ScenarioKind.POWERLAW]
        <= f[ScenarioKind.OSCILLATORY]
        <= f[ScenarioKind.CONSTANT]
    )


@dataclass(frozen=True)
class RegionSample:
    lam: float
    theta0: float
    f_p: float
    exponential_faster: bool


def region_function(lam, theta0):
    """``f_P = exp(lam theta0) / (1 + lam theta0)^2``."""
    x = np.asarray(lam, dtype=float) * np.asarray(theta0, dtype=float)
    out = np.exp(x) / (1.0 + x) ** 2
    return float(out) if out.ndim == 0 else out


def region_membership(lam: float, theta0: float) -> RegionSample:
    """Whether the exponential profile beats the power law in entropic speed."""
    if not (lam > 0 and theta0 > 0):
        raise DomainError("lam and theta0 must be positive")
    f_p = region_function(lam, theta0)
    by_predicate = f_p < 1.0
    x = lam * theta0
    by_speed = math.exp(-x) > 1.0 / (1.0 + x) ** 2
    if by_predicate != by_speed:
        raise AssertionError(f"region predicate and speed comparison disagree at lam={lam}, theta0={theta0}")
    return RegionSample(float(lam), float(theta0), f_p, by_predicate)


def region_boundary(tol=1e-13) -> float:
    """Nonzero root of ``exp(x) = (1 + x)^2``; region P is ``0 < lam theta0 < x*``."""
    return float(bisect(lambda x: x - 2.0 * math.log1p(x), 2.0, 3.0, xtol=tol, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class ScenarioRecord:
    kind: ScenarioKind
    speed: float
    rate: float
    efficiency: float
    search_label: str
    qualitative_speed: str


@dataclass(frozen=True)
class EntropicReport:
    records: tuple[ScenarioRecord, ...]
    normalizer: int
    convention: MetricConvention
    gamma_over_hbar: float
    lam: float
    theta0: float
    thetadot0: float
    coupled_lambda: bool = False

    def record(self, kind: ScenarioKind) -> ScenarioRecord:
        for rec in self.records:
            if rec.kind is kind:
                return rec
        raise KeyError(kind)


def scenario_report(
    gamma_over_hbar=0.5,
    lam=1.0 / math.pi,
    theta0=1.0,
    thetadot0=1.0,
    convention: MetricConvention = DEFAULT_CONVENTION,
    coupled_lambda=False,
    constants: PhysicalConstants = NATURAL,
    kinds=ALL_KINDS,
) -> EntropicReport:
    """Speeds, rates and efficiencies of the selected scenarios at shared parameters.

    With ``coupled_lambda`` the rate is derived from the field strength as
    ``lam = 4 G / h`` and the ``lam`` argument is ignored.
    """
    gamma = gamma_over_hbar * constants.hbar
    if coupled_lambda:
        lam = lambda_of_gamma(gamma, constants)
    ic = InitialConditions(theta0, thetadot0)
    speeds, rates = [], []
    for kind in kinds:
        spec = ScenarioSpec(kind, gamma, lam, constants=constants)
        speeds.append(entropic_speed(spec, convention, ic))
        rates.append(entropy_production_rate(spec, convention, ic))
    r, etas = efficiency(rates)
    records = tuple(
        ScenarioRecord(kind, v, rate, eta, SEARCH_LABELS[kind], QUALITATIVE_SPEED[kind])
        for kind, v, rate, eta in zip(kinds, speeds, rates, etas)
    )
    return EntropicReport(records, r, convention, gamma_over_hbar, lam, theta0, thetadot0, coupled_lambda)
