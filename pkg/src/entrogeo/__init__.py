"""Information geometry of resonant two-level quantum search."""

from .entropic import entropic_speed, entropy_production_rate, scenario_report
from .errors import DomainError, QuadratureError, SingularityError, UnitarityError
from .geodesic import InitialConditions, geodesic_closed_form, geodesic_numeric
from .infogeo import DEFAULT_CONVENTION, MetricConvention, fisher_analytic, fisher_numeric
from .quantum import analytic_success_probability, propagate_schrodinger
from .scenario import ALL_KINDS, MKSA, NATURAL, ScenarioKind, ScenarioSpec

__version__ = "0.1.0"

__all__ = [
    "ALL_KINDS",
    "DEFAULT_CONVENTION",
    "MKSA",
    "NATURAL",
    "DomainError",
    "InitialConditions",
    "MetricConvention",
    "QuadratureError",
    "ScenarioKind",
    "ScenarioSpec",
    "SingularityError",
    "UnitarityError",
    "analytic_success_probability",
    "entropic_speed",
    "entropy_production_rate",
    "fisher_analytic",
    "fisher_numeric",
    "geodesic_closed_form",
    "geodesic_numeric",
    "propagate_schrodinger",
    "scenario_report",
]
