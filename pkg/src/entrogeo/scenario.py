"""Driving-field scenarios for a spin-1/2 in a resonant magnetic field.

Four transverse intensity profiles are supported::

    constant     w_H(t) = G
    oscillatory  w_H(t) = G cos(lam t)          (0 <= t <= pi / (2 lam))
    powerlaw     w_H(t) = G / (1 + lam t)^2
    exponential  w_H(t) = G exp(-lam t)

The transverse phase advances as ``phi(t) = omega0 t + phi(0)`` and the
longitudinal field is locked to ``-hbar omega0 / 2`` so that the
generalized Rabi (resonance) condition holds identically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """Unit system used by every field and probability formula.

    ``bohr_magneton`` follows the Gaussian-style ``e hbar / (2 m c)``;
    with the MKSA preset this is what yields ``lambda ~ 37`` for a 0.2 T field.
    """

    hbar: float
    electron_mass: float
    elementary_charge: float
    light_speed: float
    name: str = "custom"

    def __post_init__(self):
        for attr in ("hbar", "electron_mass", "elementary_charge", "light_speed"):
            value = getattr(self, attr)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{attr} must be a positive finite number, got {value!r}")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def bohr_magneton(self) -> float:
        return self.elementary_charge * self.hbar / (2.0 * self.electron_mass * self.light_speed)


NATURAL = PhysicalConstants(hbar=1.0, electron_mass=1.0, elementary_charge=1.0, light_speed=1.0, name="natural")

# CODATA 2018
MKSA = PhysicalConstants(
    hbar=1.054571817e-34,
    electron_mass=9.1093837015e-31,
    elementary_charge=1.602176634e-19,
    light_speed=299792458.0,
    name="mksa",
)

UNIT_PRESETS = {"natural": NATURAL, "mksa": MKSA}


class ScenarioKind(enum.Enum):
    CONSTANT = "constant"
    OSCILLATORY = "oscillatory"
    POWERLAW = "powerlaw"
    EXPONENTIAL = "exponential"

    @property
    def monotone(self) -> bool:
        return self in (ScenarioKind.POWERLAW, ScenarioKind.EXPONENTIAL)


ALL_KINDS = tuple(ScenarioKind)


@dataclass(frozen=True)
class ScenarioSpec:
    """One driving scenario together with its physical parameters.

    ``gamma`` is the peak transverse intensity (an energy), ``lam`` the decay
    or oscillation rate and ``omega0`` the (negative) transverse phase rate.
    ``longitudinal`` overrides the resonance-locked longitudinal field; it
    exists only to exercise :func:`rabi_condition_residual` off resonance.
    """

    kind: ScenarioKind
    gamma: float
    lam: float = 1.0
    omega0: float = -1.0
    constants: PhysicalConstants = field(default=NATURAL)
    phase_origin: float = 0.0
    longitudinal: float | None = None

    def __post_init__(self):
        if not isinstance(self.kind, ScenarioKind):
            object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if self.kind is not ScenarioKind.CONSTANT and not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be positive for {self.kind.value}, got {self.lam!r}")
        if not self.omega0 < 0:
            raise ValueError(f"omega0 must be negative, got {self.omega0!r}")

    @classmethod
    def from_ratio(cls, kind, gamma_over_hbar, lam=1.0, **kwargs) -> ScenarioSpec:
        """Build a spec from ``G / hbar`` instead of ``G``."""
        constants = kwargs.get("constants", NATURAL)
        return cls(kind, gamma_over_hbar * constants.hbar, lam, **kwargs)

    @classmethod
    def unit_success(cls, kind, lam, **kwargs) -> ScenarioSpec:
        """Spec with ``G = (h/4) lam``, the choice that drives ``p_w`` up to one."""
        constants = kwargs.get("constants", NATURAL)
        return cls(kind, gamma_of_lambda(lam, constants), lam, **kwargs)

    @property
    def gamma_over_hbar(self) -> float:
        return self.gamma / self.constants.hbar

    @property
    def is_unit_success(self) -> bool:
        target = self.constants.h * self.lam / 4.0
        return abs(self.gamma - target) <= 1e-12 * target

    @property
    def longitudinal_field(self) -> float:
        if self.longitudinal is not None:
            return self.longitudinal
        return -0.5 * self.constants.hbar * self.omega0

    @property
    def positivity_limit(self) -> float:
        """Largest time at which the transverse intensity is still non-negative."""
        if self.kind is ScenarioKind.OSCILLATORY:
            return 0.5 * math.pi / self.lam
        return math.inf


def lambda_of_gamma(gamma: float, constants: PhysicalConstants = NATURAL) -> float:
    """Rate coupled to the field strength, ``lam = 4 G / h``."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    return 4.0 * gamma / constants.h


def gamma_of_lambda(lam: float, constants: PhysicalConstants = NATURAL) -> float:
    """Inverse of :func:`lambda_of_gamma`."""
    if not lam > 0:
        raise DomainError(f"lam must be positive, got {lam!r}")
    return lam * constants.h / 4.0


def profile(kind: ScenarioKind, gamma, lam, t):
    """Transverse intensity without any domain checks."""
    t = np.asarray(t, dtype=float)
    if kind is ScenarioKind.CONSTANT:
        return np.full_like(t, gamma)
    if kind is ScenarioKind.OSCILLATORY:
        return gamma * np.cos(lam * t)
    if kind is ScenarioKind.POWERLAW:
        return gamma / (1.0 + lam * t) ** 2
    return gamma * np.exp(-lam * t)


def _check_time(spec: ScenarioSpec, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise DomainError("time must be non-negative")
    limit = spec.positivity_limit
    if np.any(t > limit * (1.0 + 1e-14)):
        raise DomainError(
            f"time exceeds the positivity window t <= pi/(2 lam) = {limit:.6g} of the oscillatory profile"
        )
    return t


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def transverse_intensity(spec: ScenarioSpec, t):
    t = _check_time(spec, t)
    return _scalar_or_array(profile(spec.kind, spec.gamma, spec.lam, t))


def transverse_phase(spec: ScenarioSpec, t):
    return spec.omega0 * np.asarray(t, dtype=float) + spec.phase_origin


def field_components(spec: ScenarioSpec, t):
    """Return ``(omega_x, omega_y, Omega)`` with ``omega_x - i omega_y = w_H e^{i phi}``."""
    t = _check_time(spec, t)
    w_h = profile(spec.kind, spec.gamma, spec.lam, t)
    phi = transverse_phase(spec, t)
    omega_x = w_h * np.cos(phi)
    omega_y = -w_h * np.sin(phi)
    big_omega = np.full_like(t, spec.longitudinal_field)
    return _scalar_or_array(omega_x), _scalar_or_array(omega_y), _scalar_or_array(big_omega)


@dataclass(frozen=True)
class MagneticField:
    bx: np.ndarray | float
    by: np.ndarray | float
    bz: np.ndarray | float
    b_perp: np.ndarray | float
    b_par: np.ndarray | float


def magnetic_field(spec: ScenarioSpec, t) -> MagneticField:
    """Laboratory field producing the Hamiltonian, ``B = -(omega_x, omega_y, Omega) / mu_Bohr``."""
    t = _check_time(spec, t)
    mu = spec.constants.bohr_magneton
    w_h = profile(spec.kind, spec.gamma, spec.lam, t)
    phi = transverse_phase(spec, t)
    big_omega = np.full_like(t, spec.longitudinal_field)
    return MagneticField(
        bx=_scalar_or_array(-w_h * np.cos(phi) / mu),
        by=_scalar_or_array(w_h * np.sin(phi) / mu),
        bz=_scalar_or_array(-big_omega / mu),
        b_perp=_scalar_or_array(w_h / mu),
        b_par=_scalar_or_array(np.abs(big_omega) / mu),
    )


def gamma_of_field(b_perp: float, constants: PhysicalConstants = MKSA) -> float:
    """Peak transverse intensity produced by a field of strength ``b_perp``."""
    return constants.bohr_magneton * b_perp


def rabi_condition_residual(spec: ScenarioSpec, t=0.0):
    """``dphi/dt + (2/hbar) Omega``; identically zero for the built-in fields."""
    t = np.asarray(t, dtype=float)
    value = spec.omega0 + 2.0 * spec.longitudinal_field / spec.constants.hbar
    return _scalar_or_array(np.full_like(t, value))
