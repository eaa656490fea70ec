"""Run configuration and serialized outputs (CSV tables, JSON documents)."""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

SCHEMA_VERSION = "1.0"
SCENARIO_CHOICES = ("all", "constant", "oscillatory", "powerlaw", "exponential")


_ALIASES = {"lambda": "lam"}


def normalize_keys(data: dict) -> dict:
    """Accept hyphenated keys and ``lambda`` as spellings of the field names."""
    return {_ALIASES.get(k, k.replace("-", "_")): v for k, v in data.items()}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name
        self.message = message


@dataclass
class RunConfig:
    # defaults follow the headline comparison: G/(hbar lam) = pi/2, lam = 1/pi
    scenario: str = "all"
    gamma_over_hbar: float = 0.5
    lam: float = 1.0 / math.pi
    omega0: float = -1.0
    theta0: float = 1.0
    thetadot0: float = 1.0
    xi0: float = 0.0
    tau: float = 1.0
    kappa: float = 0.5
    units: str = "natural"
    unit_success: bool = False
    coupled_lambda: bool = False
    samples: int = 1001
    steps: int = 4000
    step_size: float = 1e-4
    theta_max: float = 5.0
    grid: int = 100
    lambda_max: float = 5.0
    format: str = "csv"
    output: str | None = None
    precision: int = 12

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        data = normalize_keys(data)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown configuration field")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> RunConfig:
        if self.scenario not in SCENARIO_CHOICES:
            raise ConfigError("scenario", f"must be one of {', '.join(SCENARIO_CHOICES)}")
        for name in ("gamma_over_hbar", "lam", "tau", "step_size", "theta_max", "lambda_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not (value > 0 and math.isfinite(value)):
                raise ConfigError(name, f"must be a positive finite number, got {value!r}")
        for name in ("theta0", "thetadot0", "xi0"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(name, f"must be a finite number, got {value!r}")
        if not (isinstance(self.omega0, (int, float)) and self.omega0 < 0):
            raise ConfigError("omega0", f"must be negative, got {self.omega0!r}")
        if self.kappa not in (1, 1.0, 0.5):
            raise ConfigError("kappa", f"must be 1 or 0.5, got {self.kappa!r}")
        if self.units not in ("natural", "mksa"):
            raise ConfigError("units", "must be 'natural' or 'mksa'")
        for name in ("unit_success", "coupled_lambda"):
            if not isinstance(getattr(self, name), bool):
                raise ConfigError(name, "must be a boolean")
        for name, low in (("samples", 3), ("steps", 1), ("grid", 2)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < low:
                raise ConfigError(name, f"must be an integer >= {low}, got {value!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be 'csv' or 'json'")
        if isinstance(self.precision, bool) or not isinstance(self.precision, int) or not 6 <= self.precision <= 17:
            raise ConfigError("precision", f"must be an integer in [6, 17], got {self.precision!r}")
        return self


def round_sig(value, precision: int):
    """Round a float to ``precision`` significant digits (non-floats pass through)."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{precision}g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: round_sig(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, precision) for v in value]
    return value


def format_cell(value, precision: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return "nan"
        return f"{value:.{precision}g}"
    return str(value)


@dataclass
class Table:
    """Column-oriented series with optional metadata and trailing notes."""

    columns: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_csv(self, precision: int) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_cell(v, precision) for v in row) + "\n")
        for key in sorted(self.meta):
            buf.write(f"# {key}={format_cell(self.meta[key], precision)}\n")
        for note in self.notes:
            buf.write(f"# {note}\n")
        return buf.getvalue()


@dataclass
class ReportDocument:
    """JSON document emitted by every command in ``--format json`` mode."""

    command: str
    config: dict
    body: dict
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            **self.body,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        data = json.loads(text)
        version = data.pop("schema_version")
        command = data.pop("command")
        config = data.pop("config")
        return cls(command, config, data, version)

    @classmethod
    def from_table(cls, command: str, config: RunConfig, table: Table) -> ReportDocument:
        p = config.precision
        body = {
            "columns": list(table.columns),
            "rows": [round_sig(list(row), p) for row in table.rows],
            "meta": round_sig(dict(table.meta), p),
            "notes": list(table.notes),
        }
        return cls(command, config.to_dict(), body)
