import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from entrogeo.errors import DomainError
from entrogeo.infogeo import (
    DEFAULT_CONVENTION,
    MetricConvention,
    ProbabilityPath,
    fisher_analytic,
    fisher_numeric,
    fisher_numeric_series,
    metric,
    path_divergence,
    path_functionals,
    path_length,
    probability_path,
    score_variance,
)
from entrogeo.quantum import phase_rate
from entrogeo.scenario import ScenarioKind, ScenarioSpec

UNIT = MetricConvention(1.0)
HALF = MetricConvention(0.5)


def constant_spec(ratio=0.5):
    return ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, ratio)


class TestConvention:
    def test_default_is_half(self):
        assert DEFAULT_CONVENTION.kappa == 0.5

    def test_rejects_other_values(self):
        with pytest.raises(ValueError):
            MetricConvention(0.7)

    def test_metric_scaling(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.POWERLAW, 0.5, 1.0)
        theta = np.linspace(0, 4, 41)
        assert np.array_equal(metric(UNIT, spec, theta), fisher_analytic(spec, theta))
        assert metric(HALF, constant_spec(), 3.0) == pytest.approx(0.25)

    @pytest.mark.parametrize("kind", list(ScenarioKind))
    def test_extrema_coincide(self, kind):
        spec = ScenarioSpec.from_ratio(kind, 0.5, 1 / math.pi)
        theta = np.linspace(0, 4.9, 500)
        f = fisher_analytic(spec, theta)
        for conv in (UNIT, HALF):
            g = metric(conv, spec, theta)
            assert np.argmin(g) == np.argmin(f) and np.argmax(g) == np.argmax(f)


class TestFisherAnalytic:
    def test_constant(self):
        assert np.all(fisher_analytic(constant_spec(), np.linspace(0, 10, 11)) == 1.0)

    def test_oscillatory_value(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.OSCILLATORY, 0.5, 1 / math.pi)
        assert fisher_analytic(spec, 1.0) == pytest.approx(math.cos(1 / math.pi) ** 2, rel=1e-15)
        # the quoted five-digit value 0.90206 is rounded up from 0.9020549
        assert fisher_analytic(spec, 1.0) == pytest.approx(0.90206, abs=1e-5)

    def test_exponential_decays(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.EXPONENTIAL, 0.5, 1.0)
        assert fisher_analytic(spec, 400.0) < 1e-300

    @settings(max_examples=50, deadline=None)
    @given(theta=st.floats(0.0, 4.9), kind=st.sampled_from(list(ScenarioKind)))
    def test_unified_identity(self, theta, kind):
        spec = ScenarioSpec.from_ratio(kind, 0.5, 1 / math.pi)
        f = fisher_analytic(spec, theta)
        assert abs(4 * phase_rate(spec, theta) ** 2 - f) <= 1e-12 * max(f, 1e-300)


class TestFisherNumeric:
    def test_constant_on_fine_grid(self):
        spec = constant_spec()
        grid = np.arange(0.0, 5.0 + 1e-12, 1e-4)
        path = probability_path(spec, grid)
        probe = np.linspace(0.1, 4.9, 97)
        assert np.max(np.abs(fisher_numeric(path, probe) - 1.0)) < 1e-6

    @pytest.mark.parametrize("kind", list(ScenarioKind))
    def test_finite_difference_oracle(self, kind):
        # oracle: plain second-order differences of p_w at a tiny step, evaluated pointwise
        spec = ScenarioSpec.unit_success(kind, 1 / math.pi) if kind is not ScenarioKind.CONSTANT else constant_spec()
        grid = np.linspace(0.0, 5.0, 5001)
        path = probability_path(spec, grid)
        from entrogeo.quantum import analytic_success_probability as p

        for theta in (0.37, 1.0, 2.2, 3.9):
            h = 1e-5
            pdot = (p(spec, theta + h) - p(spec, theta - h)) / (2 * h)
            pw = p(spec, theta)
            oracle = pdot**2 / (pw * (1 - pw))
            assert fisher_numeric(path, theta) == pytest.approx(oracle, rel=1e-6)

    def test_endpoint_uses_analytic_limit(self):
        spec = constant_spec(0.5)
        grid = np.linspace(0.0, 2 * math.pi, 2001)
        series = fisher_numeric_series(probability_path(spec, grid))
        assert series[0] == pytest.approx(1.0, rel=1e-12)
        assert np.all(np.isfinite(series))

    def test_symmetric_point(self):
        pdot = 0.37
        assert score_variance(0.5, pdot) == pytest.approx(4 * pdot**2)

    @settings(max_examples=100, deadline=None)
    @given(p=st.floats(0.01, 0.99), pdot=st.floats(-5, 5))
    def test_score_variance_identity(self, p, pdot):
        direct = pdot**2 / (p * (1 - p))
        assert score_variance(p, pdot) == pytest.approx(direct, rel=1e-10, abs=1e-12)

    def test_rejects_boundary_theta(self):
        path = probability_path(constant_spec(), np.linspace(0, 1, 11))
        with pytest.raises(DomainError):
            fisher_numeric(path, 0.0)
        with pytest.raises(DomainError):
            fisher_numeric(path, 1.0)

    def test_rejects_coarse_grid(self):
        path = probability_path(constant_spec(), np.linspace(0, 1, 4))
        with pytest.raises(DomainError):
            fisher_numeric(path, 0.5)

    def test_path_without_spec_at_endpoint(self):
        grid = np.linspace(0, 1, 11)
        p_w = np.sin(0.5 * grid) ** 2
        path = ProbabilityPath(grid, p_w, 1 - p_w)
        with pytest.raises(DomainError):
            fisher_numeric_series(path)


class TestProbabilityPath:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            ProbabilityPath(np.array([0.0, 1.0]), np.array([0.2, 0.3]), np.array([0.7, 0.6]))

    def test_rejects_decreasing_grid(self):
        with pytest.raises(ValueError):
            ProbabilityPath(np.array([1.0, 0.0]), np.array([0.2, 0.3]), np.array([0.8, 0.7]))


class TestPathFunctionals:
    def test_straight_line(self):
        spec = constant_spec()
        g0 = metric(HALF, spec, 0.0)
        line = lambda xi: 1.0 + 2.0 * np.asarray(xi)
        length = path_length(spec, HALF, line, tau=1.5)
        assert length == pytest.approx(math.sqrt(g0) * 2.0 * 1.5, rel=1e-10)
        div = path_divergence(spec, HALF, line, tau=1.5)
        assert div == pytest.approx(1.5**2 * g0 * 4.0, rel=1e-10)

    def test_equality_at_unit_tau(self):
        spec = constant_spec()
        line = lambda xi: 0.5 + 0.8 * np.asarray(xi)
        fun = path_functionals(spec, HALF, line, tau=1.0)
        assert fun.divergence == pytest.approx(fun.length**2, rel=1e-12)

    def test_quadratic_path(self):
        spec = constant_spec(0.5)
        square = lambda xi: np.asarray(xi) ** 2
        assert path_length(spec, UNIT, square, tau=1.0) == pytest.approx(1.0, rel=1e-10)
        assert path_divergence(spec, UNIT, square, tau=1.0) == pytest.approx(4 / 3, rel=1e-10)

    def test_sampled_quadratic_path(self):
        spec = constant_spec(0.5)
        xi = np.linspace(0, 1, 2001)
        fun = path_functionals(spec, UNIT, (xi, xi**2))
        assert fun.length == pytest.approx(1.0, rel=1e-8)
        assert fun.divergence == pytest.approx(4 / 3, rel=1e-8)

    def test_matches_quadrature_oracle(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.POWERLAW, 0.5, 1.0)
        curve = lambda xi: 0.3 + xi + 0.2 * np.sin(3 * xi)
        rate = lambda xi: 1 + 0.6 * math.cos(3 * xi)
        oracle = quad(lambda x: math.sqrt(float(metric(HALF, spec, curve(x)))) * abs(rate(x)), 0, 2, epsabs=1e-14)[0]
        assert path_length(spec, HALF, curve, tau=2.0) == pytest.approx(oracle, rel=1e-9)

    def test_reparametrization_invariance(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.EXPONENTIAL, 0.5, 1.0)
        curve = lambda s: 0.2 + 2.0 * s + 0.1 * s * s
        reparam = lambda xi: curve(np.asarray(xi) ** 2)
        a = path_length(spec, HALF, curve, tau=1.0)
        b = path_length(spec, HALF, reparam, tau=1.0)
        assert a == pytest.approx(b, rel=1e-6)

    def test_constant_path_has_zero_action(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.OSCILLATORY, 0.5, 1 / math.pi)
        frozen = lambda xi: np.full_like(np.asarray(xi, dtype=float), 1.0)
        fun = path_functionals(spec, HALF, frozen, tau=1.0)
        assert fun.length == 0.0 and fun.divergence == 0.0

    def test_rejects_missing_tau(self):
        with pytest.raises(ValueError):
            path_length(constant_spec(), HALF, lambda xi: xi)

    @settings(max_examples=25, deadline=None)
    @given(
        a=st.floats(0.1, 1.5),
        c1=st.floats(-0.2, 0.2),
        c2=st.floats(-0.1, 0.1),
        kind=st.sampled_from(list(ScenarioKind)),
    )
    def test_cauchy_schwarz(self, a, c1, c2, kind):
        spec = ScenarioSpec.from_ratio(kind, 0.5, 1 / math.pi)
        curve = lambda xi: 1.0 + a * xi + c1 * np.sin(math.pi * xi) + c2 * np.sin(2 * math.pi * xi)
        fun = path_functionals(spec, HALF, curve, tau=1.0)
        assert fun.divergence >= fun.length**2 - 1e-9
