"""Command-line front end.

    entrogeo probabilities --scenario exponential --lambda 1 --unit-success
    entrogeo compare --format json
    entrogeo verify

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 domain violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import entropic, geodesic, infogeo, quantum, verification
from .errors import DomainError
from .report import ConfigError, ReportDocument, RunConfig, Table, normalize_keys, round_sig
from .scenario import (
    ALL_KINDS,
    UNIT_PRESETS,
    ScenarioKind,
    ScenarioSpec,
    gamma_of_lambda,
    lambda_of_gamma,
    magnetic_field,
)

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3

COMMANDS = ("probabilities", "fisher", "geodesic", "compare", "region", "verify", "fields")

# fraction of the distance to a singular end of a geodesic that is emitted
GEODESIC_REACH = 0.9


def resolved_parameters(config: RunConfig):
    """``(constants, G/hbar, lam)`` after applying the coupling flags."""
    constants = UNIT_PRESETS[config.units]
    ratio, lam = config.gamma_over_hbar, config.lam
    if config.coupled_lambda:
        lam = lambda_of_gamma(ratio * constants.hbar, constants)
    elif config.unit_success:
        ratio = gamma_of_lambda(lam, constants) / constants.hbar
    return constants, ratio, lam


def selected_kinds(config: RunConfig):
    if config.scenario == "all":
        return list(ALL_KINDS)
    return [ScenarioKind(config.scenario)]


def build_spec(config: RunConfig, kind: ScenarioKind) -> ScenarioSpec:
    constants, ratio, lam = resolved_parameters(config)
    return ScenarioSpec(kind, ratio * constants.hbar, lam, config.omega0, constants)


def _with_scenario_column(config, columns):
    return ["scenario", *columns] if config.scenario == "all" else list(columns)


def _rows(config, kind, block):
    prefix = [kind.value] if config.scenario == "all" else []
    return [prefix + list(values) for values in zip(*block)]


def cmd_probabilities(config: RunConfig) -> Table:
    theta = np.linspace(0.0, config.theta_max, config.samples)
    table = Table(_with_scenario_column(config, ["theta", "p_w", "p_perp"]), [])
    for kind in selected_kinds(config):
        spec = build_spec(config, kind)
        p_w = np.asarray(quantum.analytic_success_probability(spec, theta))
        p_perp = np.asarray(quantum.analytic_failure_probability(spec, theta))
        table.rows += _rows(config, kind, (theta, p_w, p_perp))
        if config.theta_max > spec.positivity_limit:
            table.notes.append(
                f"{kind.value}: theta beyond {spec.positivity_limit!r} lies outside the physical window of the profile"
            )
        period = quantum.period(spec)
        if period is not None:
            table.notes.append(f"{kind.value}: p_w period = {period!r}")
    return table


def _fine_grid(theta_max, samples, spacing=1e-3):
    """Output grid and a refined, slightly extended grid that contains it."""
    out = np.linspace(0.0, theta_max, samples)
    step = theta_max / (samples - 1)
    refine = max(1, math.ceil(step / spacing))
    h = step / refine
    fine = h * np.arange((samples - 1) * refine + 1 + 4)
    return out, fine, refine


def cmd_fisher(config: RunConfig) -> Table:
    theta, fine, refine = _fine_grid(config.theta_max, config.samples)
    columns = ["theta", "fisher_analytic", "fisher_numeric", "abs_deviation"]
    table = Table(_with_scenario_column(config, columns), [])
    for kind in selected_kinds(config):
        spec = build_spec(config, kind)
        path = infogeo.probability_path(spec, fine)
        numeric = infogeo.fisher_numeric_series(path)[: fine.size - 4 : refine]
        exact = np.asarray(infogeo.fisher_analytic(spec, theta))
        table.rows += _rows(config, kind, (theta, exact, numeric, np.abs(numeric - exact)))
        table.meta[f"{kind.value}_max_abs_deviation"] = float(np.max(np.abs(numeric - exact)))
    return table


def cmd_geodesic(config: RunConfig) -> Table:
    ic = geodesic.InitialConditions(config.theta0, config.thetadot0, config.xi0)
    convention = infogeo.MetricConvention(config.kappa)
    columns = ["xi", "theta_closed", "theta_numeric", "speed", "ode_residual"]
    table = Table(_with_scenario_column(config, columns), [])
    for kind in selected_kinds(config):
        spec = build_spec(config, kind)
        closed = geodesic.geodesic_closed_form(spec, ic)
        hi = closed.validity[1]
        span = config.tau
        if ic.xi0 + span >= ic.xi0 + GEODESIC_REACH * (hi - ic.xi0):
            span = GEODESIC_REACH * (hi - ic.xi0)
            table.notes.append(
                f"{kind.value}: series truncated at xi = {ic.xi0 + span!r}; geodesic is singular at xi = {hi!r}"
            )
        n_steps = max(2, int(round(span / config.step_size)))
        n_steps += n_steps % 2
        grid = ic.xi0 + span * np.arange(n_steps + 1) / n_steps
        numeric = geodesic.geodesic_numeric(spec, ic, grid)
        pick = np.unique(np.rint(np.linspace(0, n_steps, config.samples)).astype(int))
        xi = grid[pick]
        theta_closed = closed(xi)
        theta_num = numeric.theta[pick]
        speed = geodesic.speed_along(spec, convention, theta_num, numeric.thetadot[pick])
        residual = geodesic.ode_residual(spec, closed, xi)
        table.rows += _rows(config, kind, (xi, theta_closed, theta_num, speed, residual))
        table.meta[f"{kind.value}_max_gap"] = float(np.max(np.abs(theta_closed - theta_num)))
        table.meta[f"{kind.value}_speed_spread"] = float(np.std(speed) / np.mean(speed))
    return table


def compare_document(config: RunConfig) -> dict:
    constants, ratio, lam = resolved_parameters(config)
    report = entropic.scenario_report(
        ratio,
        lam,
        config.theta0,
        config.thetadot0,
        infogeo.MetricConvention(config.kappa),
        coupled_lambda=False,
        constants=constants,
        kinds=selected_kinds(config),
    )
    scenarios = {
        rec.kind.value: {
            "speed": rec.speed,
            "rate": rec.rate,
            "efficiency": rec.efficiency,
            "search_label": rec.search_label,
            "qualitative_speed": rec.qualitative_speed,
        }
        for rec in report.records
    }
    ordering = entropic.speed_ordering(lam, config.theta0)
    return {
        "parameters": {
            "gamma_over_hbar": ratio,
            "lambda": lam,
            "theta0": config.theta0,
            "thetadot0": config.thetadot0,
            "kappa": config.kappa,
            "coupled_lambda": config.coupled_lambda,
        },
        "scenarios": scenarios,
        "normalizer": report.normalizer,
        "speed_ordering": [[k.value for k in group] for group in ordering],
        "ordering_chain_holds": entropic.ordering_chain_holds(lam, config.theta0),
    }


def compare_table(doc: dict) -> Table:
    table = Table(["scenario", "speed", "rate", "efficiency", "search_label"], [])
    for name, rec in doc["scenarios"].items():
        table.rows.append([name, rec["speed"], rec["rate"], rec["efficiency"], rec["search_label"]])
    table.meta["normalizer"] = doc["normalizer"]
    return table


def cmd_region(config: RunConfig) -> Table:
    n = config.grid
    lams = config.lambda_max * np.arange(1, n + 1) / n
    thetas = config.theta_max * np.arange(1, n + 1) / n
    table = Table(["lambda", "theta0", "f_P", "exponential_faster"], [])
    for lam in lams:
        for theta0 in thetas:
            sample = entropic.region_membership(float(lam), float(theta0))
            table.rows.append([sample.lam, sample.theta0, sample.f_p, sample.exponential_faster])
    table.meta["x_star"] = entropic.region_boundary()
    return table


def cmd_fields(config: RunConfig) -> Table:
    t_max = config.theta_max
    table = Table(_with_scenario_column(config, ["t", "b_x", "b_y", "b_z", "b_perp", "b_par"]), [])
    for kind in selected_kinds(config):
        spec = build_spec(config, kind)
        t = np.linspace(0.0, min(t_max, spec.positivity_limit), config.samples)
        b = magnetic_field(spec, t)
        table.rows += _rows(config, kind, (t, b.bx, b.by, b.bz, b.b_perp, b.b_par))
    return table


def cmd_verify(config: RunConfig, inject_kappa=None):
    constants, ratio, lam = resolved_parameters(config)
    checks = verification.run_all(
        ratio,
        lam,
        config.theta0,
        config.thetadot0,
        config.xi0,
        config.kappa,
        config.steps,
        config.step_size,
        inject_kappa=inject_kappa,
    )
    return checks


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entrogeo", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scenario")
    parser.add_argument("--gamma-over-hbar", dest="gamma_over_hbar", type=float)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--omega0", type=float)
    parser.add_argument("--theta0", type=float)
    parser.add_argument("--thetadot0", type=float)
    parser.add_argument("--xi0", type=float)
    parser.add_argument("--tau", type=float)
    parser.add_argument("--kappa", type=float, choices=(1.0, 0.5))
    parser.add_argument("--units", choices=("natural", "mksa"))
    parser.add_argument("--unit-success", dest="unit_success", action="store_const", const=True)
    parser.add_argument("--coupled-lambda", dest="coupled_lambda", action="store_const", const=True)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--step-size", dest="step_size", type=float)
    parser.add_argument("--theta-max", dest="theta_max", type=float)
    parser.add_argument("--grid", type=int)
    parser.add_argument("--lambda-max", dest="lambda_max", type=float)
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--output")
    parser.add_argument("--precision", type=int)
    parser.add_argument("--config", dest="config_path")
    parser.add_argument("--inject-kappa", dest="inject_kappa", type=float, help=argparse.SUPPRESS)
    return parser


def load_config(args) -> RunConfig:
    """Defaults, then the JSON config file, then command-line flags."""
    data = RunConfig().to_dict()
    if args.config_path:
        try:
            with open(args.config_path, encoding="utf-8") as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {args.config_path}: {exc}") from exc
        if not isinstance(from_file, dict):
            raise ConfigError("config", "configuration file must hold a JSON object")
        data.update(normalize_keys(from_file))
    for key in data:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return RunConfig.from_dict(data).validate()


def _emit(text: str, config: RunConfig):
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def render(command: str, config: RunConfig, table: Table) -> str:
    if config.format == "json":
        return ReportDocument.from_table(command, config, table).to_json()
    return table.to_csv(config.precision)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as exc:
        print(f"entrogeo: invalid configuration: field '{exc.field}': {exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    except TypeError as exc:
        print(f"entrogeo: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    command = args.command
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if command == "verify":
                return _run_verify(config, args.inject_kappa)
            if command == "compare":
                doc = compare_document(config)
                if config.format == "json":
                    body = round_sig(doc, config.precision)
                    _emit(ReportDocument(command, config.to_dict(), body).to_json(), config)
                else:
                    _emit(compare_table(doc).to_csv(config.precision), config)
                return EXIT_OK
            handler = {
                "probabilities": cmd_probabilities,
                "fisher": cmd_fisher,
                "geodesic": cmd_geodesic,
                "region": cmd_region,
                "fields": cmd_fields,
            }[command]
            _emit(render(command, config, handler(config)), config)
            return EXIT_OK
    except (DomainError, ValueError) as exc:
        print(f"entrogeo: domain violation: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def _run_verify(config: RunConfig, inject_kappa) -> int:
    checks = cmd_verify(config, inject_kappa)
    failed = [c.name for c in checks if not c.passed]
    body = {
        "checks": [round_sig(c.to_dict(), config.precision) for c in checks],
        "passed": not failed,
        "failed": failed,
    }
    if config.format == "json":
        _emit(ReportDocument("verify", config.to_dict(), body).to_json(), config)
    else:
        table = Table(["check", "passed", "max_deviation", "tolerance"], [])
        for c in checks:
            table.rows.append([c.name, c.passed, c.max_deviation, c.tolerance])
        _emit(table.to_csv(config.precision), config)
    for name in failed:
        print(f"entrogeo: verification check failed: {name}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
