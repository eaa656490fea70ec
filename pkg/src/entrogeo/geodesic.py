"""Geodesics of the one-dimensional Fisher metric.

Along an affinely parametrized geodesic ``theta(xi)``::

    theta'' + Gamma(theta) theta'^2 = 0,   Gamma = F'(theta) / (2 F(theta))

which integrates once to ``sqrt(F(theta)) theta' = const``. The closed forms
below solve the initial value problem ``theta(xi0) = theta0``,
``theta'(xi0) = thetadot0`` for each scenario.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numerics
from .errors import DomainError, SingularityError
from .infogeo import MetricConvention, fisher_analytic, path_divergence, path_length
from .scenario import ScenarioKind, ScenarioSpec


@dataclass(frozen=True)
class InitialConditions:
    theta0: float
    thetadot0: float
    xi0: float = 0.0

    def __post_init__(self):
        if not self.theta0 > 0:
            raise DomainError(f"theta0 must be positive, got {self.theta0!r}")
        if not self.thetadot0 > 0:
            raise DomainError(f"thetadot0 must be positive, got {self.thetadot0!r}")
        if not self.xi0 >= 0:
            raise DomainError(f"xi0 must be non-negative, got {self.xi0!r}")


def connection_coefficient(spec: ScenarioSpec, theta):
    """``F'(theta) / (2 F(theta))`` for the scenario's Fisher information."""
    theta = np.asarray(theta, dtype=float)
    lam = spec.lam
    kind = spec.kind
    if kind is ScenarioKind.CONSTANT:
        out = np.zeros_like(theta)
    elif kind is ScenarioKind.OSCILLATORY:
        c = np.cos(lam * theta)
        if np.any(np.abs(c) < 1e-15):
            raise DomainError("Fisher information vanishes where cos(lam theta) = 0; connection is singular")
        out = -lam * np.tan(lam * theta)
    elif kind is ScenarioKind.POWERLAW:
        out = -2.0 * lam / (1.0 + lam * theta)
    else:
        out = np.full_like(theta, -lam)
    return float(out) if out.ndim == 0 else out


def _scalar_connection(spec: ScenarioSpec):
    lam = spec.lam
    if spec.kind is ScenarioKind.CONSTANT:
        return lambda theta: 0.0
    if spec.kind is ScenarioKind.OSCILLATORY:
        return lambda theta: -lam * math.tan(lam * theta)
    if spec.kind is ScenarioKind.POWERLAW:
        return lambda theta: -2.0 * lam / (1.0 + lam * theta)
    return lambda theta: -lam


@dataclass(frozen=True)
class GeodesicSolution:
    """Closed-form geodesic ``xi -> theta`` valid on the open interval ``validity``."""

    kind: ScenarioKind
    ic: InitialConditions
    validity: tuple[float, float]
    evaluator: Callable = field(repr=False)
    rate: Callable = field(repr=False)

    def _check(self, xi):
        xi = np.asarray(xi, dtype=float)
        lo, hi = self.validity
        if np.any(xi <= lo) or np.any(xi >= hi):
            raise DomainError(f"xi outside the validity interval ({lo:.6g}, {hi:.6g})")
        return xi

    def __call__(self, xi):
        out = self.evaluator(self._check(xi))
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, xi):
        out = self.rate(self._check(xi))
        return float(out) if np.ndim(out) == 0 else out


def geodesic_closed_form(spec: ScenarioSpec, ic: InitialConditions) -> GeodesicSolution:
    theta0, v0, xi0 = ic.theta0, ic.thetadot0, ic.xi0
    lam = spec.lam
    kind = spec.kind

    if kind is ScenarioKind.CONSTANT:
        return GeodesicSolution(
            kind,
            ic,
            (-math.inf, math.inf),
            lambda xi: theta0 + v0 * (xi - xi0),
            lambda xi: np.full_like(xi, v0),
        )

    if kind is ScenarioKind.OSCILLATORY:
        s0, c0 = math.sin(lam * theta0), math.cos(lam * theta0)
        if abs(s0) >= 1.0:
            raise DomainError("closed form needs |sin(lam theta0)| < 1")
        # stay on the arcsin branch that contains theta0
        branch = round(lam * theta0 / math.pi)
        sign = -1.0 if branch % 2 else 1.0
        slope = lam * v0 * c0
        a = (-1.0 - s0) / slope
        b = (1.0 - s0) / slope
        validity = (xi0 + min(a, b), xi0 + max(a, b))

        def osc(xi):
            return (branch * math.pi + sign * np.arcsin(s0 + slope * (xi - xi0))) / lam

        def osc_rate(xi):
            arg = s0 + slope * (xi - xi0)
            return sign * v0 * c0 / np.sqrt(1.0 - arg * arg)

        return GeodesicSolution(kind, ic, validity, osc, osc_rate)

    if kind is ScenarioKind.POWERLAW:
        a0 = 1.0 + lam * theta0
        t_sing = a0 / (lam * v0)

        def power(xi):
            s = xi - xi0
            return (a0 * a0 + lam * v0 * (s - t_sing)) / (lam * lam * v0 * (t_sing - s))

        def power_rate(xi):
            s = xi - xi0
            return v0 * a0 * a0 / (a0 - lam * v0 * s) ** 2

        return GeodesicSolution(kind, ic, (-math.inf, xi0 + t_sing), power, power_rate)

    t_sing = 1.0 / (lam * v0)

    def expo(xi):
        return theta0 - np.log1p(-lam * v0 * (xi - xi0)) / lam

    def expo_rate(xi):
        return v0 / (1.0 - lam * v0 * (xi - xi0))

    return GeodesicSolution(kind, ic, (-math.inf, xi0 + t_sing), expo, expo_rate)


def printed_variant_oscillatory(spec: ScenarioSpec, ic: InitialConditions) -> GeodesicSolution:
    """The oscillatory path written as ``theta0 + c [asin(lam xi) - asin(lam xi0)]``.

    Kept for comparison only: it does not satisfy the geodesic equation for
    generic initial conditions (see :func:`ode_residual`).
    """
    if spec.kind is not ScenarioKind.OSCILLATORY:
        raise ValueError("printed variant exists only for the oscillatory scenario")
    lam = spec.lam
    theta0, v0, xi0 = ic.theta0, ic.thetadot0, ic.xi0
    if lam * xi0 >= 1.0:
        raise DomainError("printed variant needs lam xi0 < 1")
    coef = math.sqrt(1.0 - (lam * xi0) ** 2) / lam * v0
    base = math.asin(lam * xi0)

    def variant(xi):
        return theta0 + coef * (np.arcsin(lam * xi) - base)

    def variant_rate(xi):
        return coef * lam / np.sqrt(1.0 - (lam * xi) ** 2)

    return GeodesicSolution(spec.kind, ic, (-1.0 / lam, 1.0 / lam), variant, variant_rate)


@dataclass(frozen=True)
class NumericPath:
    xi_grid: np.ndarray
    theta: np.ndarray
    thetadot: np.ndarray
    error_estimate: float = math.nan


def _rk4(spec, xi_grid, theta0, v0, validity):
    n = xi_grid.size
    theta = np.empty(n)
    rate = np.empty(n)
    theta[0], rate[0] = theta0, v0
    lo, hi = validity

    connection = _scalar_connection(spec)

    def accel(th, v):
        return -connection(th) * v * v

    y, v = theta0, v0
    for i in range(n - 1):
        x_next = xi_grid[i + 1]
        if not lo < x_next < hi:
            raise SingularityError(
                f"geodesic equation is singular at xi = {hi if x_next >= hi else lo:.6g}",
                last_valid_xi=float(xi_grid[i]),
                partial=NumericPath(xi_grid[: i + 1].copy(), theta[: i + 1].copy(), rate[: i + 1].copy()),
            )
        h = x_next - xi_grid[i]
        k1y, k1v = v, accel(y, v)
        k2y, k2v = v + 0.5 * h * k1v, accel(y + 0.5 * h * k1y, v + 0.5 * h * k1v)
        k3y, k3v = v + 0.5 * h * k2v, accel(y + 0.5 * h * k2y, v + 0.5 * h * k2v)
        k4y, k4v = v + h * k3v, accel(y + h * k3y, v + h * k3v)
        y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        theta[i + 1], rate[i + 1] = y, v
    return theta, rate


def geodesic_numeric(spec: ScenarioSpec, ic: InitialConditions, xi_grid, check_convergence=True) -> NumericPath:
    """Classical RK4 integration of the geodesic equation on ``xi_grid``.

    ``xi_grid`` must start at ``ic.xi0``. With ``check_convergence`` the run
    is repeated on every other grid point and the Richardson estimate
    ``|theta_h - theta_2h| / 15`` is stored as ``error_estimate``.
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    if xi_grid.size < 2 or np.any(np.diff(xi_grid) <= 0):
        raise ValueError("xi_grid must be strictly increasing with at least two points")
    if not math.isclose(xi_grid[0], ic.xi0, abs_tol=1e-14):
        raise ValueError("xi_grid must start at xi0")
    validity = geodesic_closed_form(spec, ic).validity
    theta, rate = _rk4(spec, xi_grid, ic.theta0, ic.thetadot0, validity)
    error = math.nan
    if check_convergence and xi_grid.size >= 5:
        coarse = xi_grid[::2]
        theta_2h, _ = _rk4(spec, coarse, ic.theta0, ic.thetadot0, validity)
        error = float(np.max(np.abs(theta[::2] - theta_2h)) / 15.0)
    return NumericPath(xi_grid, theta, rate, error)


def ode_residual(spec: ScenarioSpec, path, xi, h=3e-3):
    """Geodesic-equation residual ``theta'' + Gamma(theta) theta'^2`` at ``xi``.

    Callables are differentiated with fourth-order central stencils of
    spacing ``h`` (reduced near the ends of a closed form's validity
    interval); a :class:`NumericPath` uses its own uniform grid with a
    stride close to ``h``.
    """
    if isinstance(path, NumericPath):
        return _sampled_residual(spec, path, xi, h)
    xi = np.asarray(xi, dtype=float)
    if isinstance(path, GeodesicSolution):
        lo, hi = path.validity
        if np.any(xi <= lo) or np.any(xi >= hi):
            raise DomainError("xi outside the validity interval")
        # shrink the stencil near a singular end so it never straddles it
        h = np.minimum(h, 0.02 * np.minimum(xi - lo, hi - xi))
    first = numerics.central_derivative(path, xi, h)
    second = numerics.central_second_derivative(path, xi, h)
    out = second + connection_coefficient(spec, np.asarray(path(xi))) * first**2
    return float(out) if np.ndim(out) == 0 else out


def _sampled_residual(spec, path, xi, h):
    grid = path.xi_grid
    step = float(np.mean(np.diff(grid)))
    stride = max(1, int(round(h / step)))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    idx = np.rint((xi - grid[0]) / step).astype(int)
    if np.any(np.abs(grid[np.clip(idx, 0, grid.size - 1)] - xi) > 1e-9 * max(1.0, abs(step))):
        raise DomainError("xi must coincide with grid points of the numeric path")
    if np.any(idx - 2 * stride < 0) or np.any(idx + 2 * stride >= grid.size):
        raise DomainError("difference stencil leaves the sampled path")
    th = path.theta
    hs = stride * step
    m2, m1, p1, p2 = th[idx - 2 * stride], th[idx - stride], th[idx + stride], th[idx + 2 * stride]
    first = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * hs)
    second = (-m2 + 16 * m1 - 30 * th[idx] + 16 * p1 - p2) / (12 * hs * hs)
    out = second + connection_coefficient(spec, th[idx]) * first**2
    return float(out[0]) if out.size == 1 else out


def speed_along(spec: ScenarioSpec, convention: MetricConvention, theta, thetadot):
    """Metric speed ``kappa sqrt(F(theta)) |theta'|``."""
    return convention.kappa * np.sqrt(fisher_analytic(spec, theta)) * np.abs(thetadot)


def conserved_quantity(spec: ScenarioSpec, theta, thetadot):
    """First integral ``F(theta) theta'^2`` of the geodesic equation."""
    return fisher_analytic(spec, theta) * np.asarray(thetadot) ** 2


def action_of_path(spec, convention, path, tau, xi0=0.0, **kwargs):
    """``(L, I)`` of a path over ``[xi0, xi0 + tau]``."""
    return (
        path_length(spec, convention, path, tau, xi0, **kwargs),
        path_divergence(spec, convention, path, tau, xi0, **kwargs),
    )


class PerturbedPath:
    """Geodesic plus ``eps sin(k pi (xi - xi0) / tau)``; endpoints stay fixed."""

    def __init__(self, base: GeodesicSolution, tau: float, amplitude: float, mode: int):
        self.base = base
        self.xi0 = base.ic.xi0
        self.tau = tau
        self.amplitude = amplitude
        self.mode = mode
        self._w = mode * math.pi / tau

    def __call__(self, xi):
        return self.base(xi) + self.amplitude * np.sin(self._w * (np.asarray(xi) - self.xi0))

    def derivative(self, xi):
        return self.base.derivative(xi) + self.amplitude * self._w * np.cos(self._w * (np.asarray(xi) - self.xi0))


def perturbed_action(spec, convention, ic, tau, amplitude, mode, **kwargs):
    """Action of the endpoint-fixed sinusoidal perturbation of the geodesic."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    base = geodesic_closed_form(spec, ic)
    lo, hi = base.validity
    if not (lo < ic.xi0 and ic.xi0 + tau < hi):
        raise DomainError("geodesic is not valid over [xi0, xi0 + tau]")
    path = PerturbedPath(base, tau, amplitude, mode)
    probe = np.asarray(path(np.linspace(ic.xi0, ic.xi0 + tau, 2049)))
    if np.any(probe < 0):
        raise DomainError("perturbed path leaves theta >= 0")
    if spec.kind is ScenarioKind.OSCILLATORY:
        phase = spec.lam * probe
        if np.any(phase >= 0.5 * math.pi):
            raise DomainError("perturbed path crosses a zero of the oscillatory Fisher information")
    return action_of_path(spec, convention, path, tau, ic.xi0, **kwargs)
