"""Fisher metric on the one-parameter family ``p(theta) = (p_w, p_perp)``.

The metric used for lengths and speeds is ``g = kappa^2 F`` where ``F`` is the
Fisher information. ``kappa = 1/2`` reproduces the published entropic speeds;
``kappa = 1`` is the literal ``g = F`` reading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import numerics
from .errors import DomainError
from .quantum import (
    analytic_failure_probability,
    analytic_success_probability,
    phase_rate,
)
from .scenario import ScenarioKind, ScenarioSpec

ENDPOINT_EPS = 1e-12
_ALLOWED_KAPPA = (1.0, 0.5)


@dataclass(frozen=True)
class MetricConvention:
    kappa: float = 0.5

    def __post_init__(self):
        if float(self.kappa) not in _ALLOWED_KAPPA:
            raise ValueError(f"kappa must be 1 or 1/2, got {self.kappa!r}")

    @classmethod
    def _unchecked(cls, kappa: float) -> MetricConvention:
        # fault injection for the verification suite only
        obj = object.__new__(cls)
        object.__setattr__(obj, "kappa", float(kappa))
        return obj


DEFAULT_CONVENTION = MetricConvention(0.5)


@dataclass(frozen=True)
class ProbabilityPath:
    """Success/failure probabilities sampled on an increasing ``theta`` grid.

    ``spec`` records where the samples came from; it is only consulted for
    the analytic limit at points where ``p_w (1 - p_w)`` vanishes.
    """

    theta_grid: np.ndarray
    p_w: np.ndarray
    p_perp: np.ndarray
    spec: ScenarioSpec | None = None

    def __post_init__(self):
        theta = np.asarray(self.theta_grid, dtype=float)
        p_w = np.asarray(self.p_w, dtype=float)
        p_perp = np.asarray(self.p_perp, dtype=float)
        if not (theta.shape == p_w.shape == p_perp.shape) or theta.ndim != 1:
            raise ValueError("theta_grid, p_w and p_perp must be 1-D arrays of equal length")
        if theta.size >= 2 and np.any(np.diff(theta) <= 0):
            raise ValueError("theta_grid must be strictly increasing")
        if np.any(p_w < -1e-12) or np.any(p_w > 1 + 1e-12) or np.any(p_perp < -1e-12) or np.any(p_perp > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.max(np.abs(p_w + p_perp - 1.0), initial=0.0) > 1e-12:
            raise ValueError("p_w + p_perp must equal 1")
        object.__setattr__(self, "theta_grid", theta)
        object.__setattr__(self, "p_w", p_w)
        object.__setattr__(self, "p_perp", p_perp)


def probability_path(spec: ScenarioSpec, theta_grid) -> ProbabilityPath:
    theta = np.asarray(theta_grid, dtype=float)
    return ProbabilityPath(
        theta,
        np.asarray(analytic_success_probability(spec, theta)),
        np.asarray(analytic_failure_probability(spec, theta)),
        spec,
    )


def fisher_analytic(spec: ScenarioSpec, theta):
    """Closed-form Fisher information of the scenario's probability path."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(np.isnan(theta)):
        raise DomainError("theta must be non-negative")
    f0 = 4.0 * spec.gamma_over_hbar**2
    lam = spec.lam
    if spec.kind is ScenarioKind.CONSTANT:
        f = np.full_like(theta, f0)
    elif spec.kind is ScenarioKind.OSCILLATORY:
        f = f0 * np.cos(lam * theta) ** 2
    elif spec.kind is ScenarioKind.POWERLAW:
        f = f0 * (1.0 + lam * theta) ** -4
    else:
        f = f0 * np.exp(-2.0 * lam * theta)
    return float(f) if f.ndim == 0 else f


def score_variance(p, pdot):
    """Fisher information as the variance of the score over both outcomes."""
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    score_w = pdot / p
    score_perp = -pdot / q
    mean = p * score_w + q * score_perp
    return p * score_w**2 + q * score_perp**2 - mean**2


def fisher_numeric_series(path: ProbabilityPath) -> np.ndarray:
    """Finite-difference Fisher information ``(dp_w)^2 / (p_w p_perp)`` at every node.

    The derivative is taken of whichever of ``p_w``/``p_perp`` is smaller at
    each node; near ``p = 1`` the complement keeps full relative precision.
    """
    theta, p_w, p_perp = path.theta_grid, path.p_w, path.p_perp
    d_w = numerics.sampled_derivative(theta, p_w)
    d_perp = -numerics.sampled_derivative(theta, p_perp)
    pdot = np.where(p_w <= p_perp, d_w, d_perp)
    denom = p_w * p_perp
    singular = denom < ENDPOINT_EPS
    out = np.empty_like(theta)
    out[~singular] = pdot[~singular] ** 2 / denom[~singular]
    if np.any(singular):
        if path.spec is None:
            raise DomainError("probability path touches p_w in {0, 1} and carries no scenario for the analytic limit")
        out[singular] = 4.0 * np.asarray(phase_rate(path.spec, theta[singular])) ** 2
    return out


def fisher_numeric(path: ProbabilityPath, theta):
    """Fisher information at interior ``theta`` from sampled probabilities."""
    grid = path.theta_grid
    theta_arr = np.asarray(theta, dtype=float)
    if grid.size < 5:
        raise DomainError("grid too coarse for central differences")
    if np.any(theta_arr <= grid[0]) or np.any(theta_arr >= grid[-1]):
        raise DomainError("theta must lie strictly inside the sampled grid")
    values = np.interp(theta_arr, grid, fisher_numeric_series(path))
    return float(values) if values.ndim == 0 else values


def metric(convention: MetricConvention, spec: ScenarioSpec, theta):
    """Riemannian metric ``g = kappa^2 F``."""
    f = fisher_analytic(spec, theta)
    return convention.kappa**2 * f


@dataclass(frozen=True)
class PathFunctionals:
    length: float
    divergence: float
    tau: float


def _speed_squared_integrand(spec, convention, path, h):
    derivative = getattr(path, "derivative", None)

    def integrand(xi):
        theta = path(xi)
        if derivative is not None:
            rate = derivative(xi)
        else:
            rate = numerics.central_derivative(path, xi, h)
        return np.asarray(metric(convention, spec, theta)) * rate * rate

    return integrand


def _sampled(path, tau, xi0):
    xi, theta = (np.asarray(a, dtype=float) for a in path)
    if xi.size < 3:
        raise ValueError("a sampled path needs at least three points")
    if np.any(np.diff(xi) <= 0):
        raise ValueError("xi grid must be strictly increasing")
    if tau is not None and not (np.isclose(xi[0], xi0) and np.isclose(xi[-1], xi0 + tau)):
        raise ValueError("sampled xi grid must cover [xi0, xi0 + tau]")
    return xi, theta


def _sampled_integral(xi, y):
    return float(simpson(y, x=xi))


def path_length(spec, convention, path, tau=None, xi0=0.0, rtol=1e-10, h=1e-3) -> float:
    """Metric length ``int sqrt(theta' g theta') dxi`` over ``[xi0, xi0 + tau]``.

    ``path`` is either a vectorized callable ``xi -> theta`` (an optional
    ``derivative`` attribute is used when present) or an ``(xi, theta)``
    pair of sampled arrays.
    """
    if callable(path):
        if tau is None or tau < 0:
            raise ValueError("tau must be a non-negative number")
        integrand = _speed_squared_integrand(spec, convention, path, h)
        return numerics.simpson_richardson(lambda x: np.sqrt(integrand(x)), xi0, xi0 + tau, rtol=rtol)
    xi, theta = _sampled(path, tau, xi0)
    rate = numerics.sampled_derivative(xi, theta)
    return _sampled_integral(xi, np.sqrt(metric(convention, spec, theta) * rate * rate))


def path_divergence(spec, convention, path, tau=None, xi0=0.0, rtol=1e-10, h=1e-3) -> float:
    """Divergence ``tau * int theta' g theta' dxi`` over ``[xi0, xi0 + tau]``."""
    if callable(path):
        if tau is None or tau < 0:
            raise ValueError("tau must be a non-negative number")
        integrand = _speed_squared_integrand(spec, convention, path, h)
        return tau * numerics.simpson_richardson(integrand, xi0, xi0 + tau, rtol=rtol)
    xi, theta = _sampled(path, tau, xi0)
    rate = numerics.sampled_derivative(xi, theta)
    span = xi[-1] - xi[0]
    return span * _sampled_integral(xi, metric(convention, spec, theta) * rate * rate)


def path_functionals(spec, convention, path, tau=None, xi0=0.0, **kwargs) -> PathFunctionals:
    if not callable(path):
        xi = np.asarray(path[0], dtype=float)
        tau = float(xi[-1] - xi[0]) if tau is None else tau
        xi0 = float(xi[0])
    return PathFunctionals(
        path_length(spec, convention, path, tau, xi0, **kwargs),
        path_divergence(spec, convention, path, tau, xi0, **kwargs),
        tau,
    )
