"""Two-level dynamics under the resonant su(2) Hamiltonian.

The Hamiltonian is ``H = omega_x sx + omega_y sy + Omega sz`` in the basis
``|w> = (1, 0)``, ``|w_perp> = (0, 1)``. Evolution operators are written as
``U = [[alpha, beta], [-beta*, alpha*]]``, so ``alpha = U[0, 0]`` and
``beta = U[0, 1]``; the success probability from ``|w_perp>`` is ``|beta|^2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnitarityError
from .scenario import ScenarioKind, ScenarioSpec, profile

UNITARITY_TOL = 1e-9
DRIFT_LIMIT = 1e-6


def _check_theta(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(np.isnan(theta)):
        raise DomainError("theta must be non-negative")
    return theta


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def phase_integral(spec: ScenarioSpec, theta):
    """Accumulated rotation angle ``u(theta) = int_0^theta w_H(t)/hbar dt``."""
    theta = _check_theta(theta)
    ratio = spec.gamma_over_hbar
    lam = spec.lam
    kind = spec.kind
    if kind is ScenarioKind.CONSTANT:
        u = ratio * theta
    elif kind is ScenarioKind.OSCILLATORY:
        u = ratio / lam * np.sin(lam * theta)
    elif kind is ScenarioKind.POWERLAW:
        u = ratio / lam * (1.0 - 1.0 / (1.0 + lam * theta))
    else:
        u = ratio / lam * -np.expm1(-lam * theta)
    return _out(u)


def phase_rate(spec: ScenarioSpec, theta):
    """Derivative ``u'(theta) = w_H(theta) / hbar``."""
    theta = _check_theta(theta)
    return _out(profile(spec.kind, spec.gamma, spec.lam, theta) / spec.constants.hbar)


def analytic_success_probability(spec: ScenarioSpec, theta):
    """Closed-form ``p_w(theta) = sin^2(u(theta))`` on resonance."""
    return _out(np.sin(phase_integral(spec, theta)) ** 2)


def analytic_failure_probability(spec: ScenarioSpec, theta):
    return _out(np.cos(phase_integral(spec, theta)) ** 2)


def period(spec: ScenarioSpec) -> float | None:
    """Oscillation period of ``p_w``; ``None`` for the monotone profiles."""
    if spec.kind is ScenarioKind.CONSTANT:
        return math.pi * spec.constants.hbar / spec.gamma
    if spec.kind is ScenarioKind.OSCILLATORY:
        return math.pi / spec.lam
    return None


@dataclass(frozen=True)
class TwoLevelAmplitudes:
    alpha: complex
    beta: complex

    @classmethod
    def from_unitary(cls, u) -> TwoLevelAmplitudes:
        return cls(complex(u[0, 0]), complex(u[0, 1]))

    @property
    def norm(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class PropagationResult:
    time_grid: np.ndarray
    unitaries: np.ndarray
    success_probability: np.ndarray

    @property
    def max_unitarity_deviation(self) -> float:
        return float(max(unitarity_deviation(u) for u in self.unitaries))

    def amplitudes(self, index=-1) -> TwoLevelAmplitudes:
        return TwoLevelAmplitudes.from_unitary(self.unitaries[index])


def unitarity_deviation(u) -> float:
    """Max-norm of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(2))))


def step_exponentials(spec: ScenarioSpec, t_mid, dt):
    """``exp(-i H(t_mid) dt / hbar)`` for each midpoint, via the Pauli closed form."""
    hbar = spec.constants.hbar
    w_h = profile(spec.kind, spec.gamma, spec.lam, t_mid)
    phi = spec.omega0 * t_mid + spec.phase_origin
    hx = w_h * np.cos(phi)
    hy = -w_h * np.sin(phi)
    hz = np.full_like(t_mid, spec.longitudinal_field)
    norm = np.sqrt(hx * hx + hy * hy + hz * hz)
    angle = norm * dt / hbar
    safe = np.where(norm > 0, norm, 1.0)
    nx, ny, nz = hx / safe, hy / safe, hz / safe
    c, s = np.cos(angle), np.sin(angle)
    out = np.empty((t_mid.size, 2, 2), dtype=complex)
    out[:, 0, 0] = c - 1j * s * nz
    out[:, 0, 1] = -1j * s * (nx - 1j * ny)
    out[:, 1, 0] = -1j * s * (nx + 1j * ny)
    out[:, 1, 1] = c + 1j * s * nz
    return out


def propagate_schrodinger(spec: ScenarioSpec, t_final: float, steps: int) -> PropagationResult:
    """Time-ordered product of midpoint exponentials from ``t = 0`` to ``t_final``.

    The Hamiltonian is frozen at each step midpoint, which makes every step
    exactly unitary and the scheme second order in the step size.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if t_final < 0:
        raise DomainError("t_final must be non-negative")
    if t_final > spec.positivity_limit * (1 + 1e-14):
        warnings.warn(
            "propagating the oscillatory profile past t = pi/(2 lam), outside its physical window",
            RuntimeWarning,
            stacklevel=2,
        )
    grid = np.linspace(0.0, t_final, steps + 1)
    dt = t_final / steps
    factors = step_exponentials(spec, 0.5 * (grid[:-1] + grid[1:]), dt)
    unitaries = np.empty((steps + 1, 2, 2), dtype=complex)
    unitaries[0] = np.eye(2)
    a, b, c, d = 1.0 + 0j, 0j, 0j, 1.0 + 0j
    for i, f in enumerate(factors):
        f00, f01, f10, f11 = f[0, 0], f[0, 1], f[1, 0], f[1, 1]
        a, b, c, d = f00 * a + f01 * c, f00 * b + f01 * d, f10 * a + f11 * c, f10 * b + f11 * d
        unitaries[i + 1] = ((a, b), (c, d))
    deviation = np.max(np.abs(np.einsum("kji,kjl->kil", unitaries.conj(), unitaries) - np.eye(2)))
    if deviation > DRIFT_LIMIT:
        raise UnitarityError(f"propagator drifted from unitarity by {deviation:.3e}")
    success = np.abs(unitaries[:, 0, 1]) ** 2
    return PropagationResult(grid, unitaries, success)


def transition_probability_general(u, overlap: float) -> float:
    """Probability that ``|s> = x|w> + sqrt(1-x^2)|w_perp>`` ends in ``|w>``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if unitarity_deviation(u) > UNITARITY_TOL:
        raise UnitarityError("evolution operator is not unitary")
    if not 0.0 <= overlap <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1], got {overlap!r}")
    alpha, beta = u[0, 0], u[0, 1]
    x = overlap
    y = math.sqrt(1.0 - x * x)
    cross = (alpha * beta.conjugate() + alpha.conjugate() * beta).real
    return float(abs(alpha) ** 2 * x * x + abs(beta) ** 2 * y * y + cross * x * y)
