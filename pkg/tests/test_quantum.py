import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad, solve_ivp
from scipy.stats import unitary_group

from entrogeo.errors import DomainError, UnitarityError
from entrogeo.quantum import (
    analytic_failure_probability,
    analytic_success_probability,
    period,
    phase_integral,
    phase_rate,
    propagate_schrodinger,
    transition_probability_general,
    unitarity_deviation,
)
from entrogeo.scenario import ScenarioKind, ScenarioSpec, profile


def schrodinger_oracle(spec, t_final):
    """Adaptive RK integration of i psi' = H psi from |w_perp>, independent of the product formula."""

    def rhs(t, y):
        w = profile(spec.kind, spec.gamma, spec.lam, t)
        phi = spec.omega0 * t + spec.phase_origin
        hx, hy, hz = w * math.cos(phi), -w * math.sin(phi), spec.longitudinal_field
        a, b = complex(y[0], y[1]), complex(y[2], y[3])
        da = -1j * (hz * a + (hx - 1j * hy) * b)
        db = -1j * ((hx + 1j * hy) * a - hz * b)
        return [da.real, da.imag, db.real, db.imag]

    sol = solve_ivp(rhs, (0.0, t_final), [0.0, 0.0, 1.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-13)
    y = sol.y[:, -1]
    return y[0] ** 2 + y[1] ** 2


class TestClosedForms:
    def test_constant_reaches_one(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 1.0)
        assert analytic_success_probability(spec, math.pi / 2) == pytest.approx(1.0, abs=1e-15)

    def test_oscillatory_maximum_under_unit_success(self):
        lam = 0.7
        spec = ScenarioSpec.unit_success(ScenarioKind.OSCILLATORY, lam)
        assert analytic_success_probability(spec, math.pi / (2 * lam)) == pytest.approx(1.0, abs=1e-15)

    def test_exponential_fig2_value(self):
        spec = ScenarioSpec.unit_success(ScenarioKind.EXPONENTIAL, 1 / math.pi)
        expected = math.sin(math.pi / 2 * (1 - math.exp(-1 / math.pi))) ** 2
        assert analytic_success_probability(spec, 1.0) == pytest.approx(expected, rel=1e-14)
        # direct evaluation of the stated expression gives 0.17245, not the quoted 0.1800
        assert expected == pytest.approx(0.172445450915, abs=1e-12)

    def test_phase_integral_constant(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)
        assert phase_integral(spec, math.pi) == pytest.approx(math.pi / 2)

    def test_powerlaw_asymptote(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.POWERLAW, 0.8, 0.4)
        assert phase_integral(spec, 1e12) == pytest.approx(0.8 / 0.4, rel=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(theta=st.floats(0.0, 8.0), kind=st.sampled_from(list(ScenarioKind)), lam=st.floats(0.1, 2.0))
    def test_phase_integral_matches_quadrature(self, theta, kind, lam):
        spec = ScenarioSpec.from_ratio(kind, 0.9, lam)
        if kind is ScenarioKind.OSCILLATORY:
            theta = min(theta, spec.positivity_limit)
        oracle = quad(lambda t: profile(kind, spec.gamma, lam, t), 0.0, theta, epsabs=1e-14, epsrel=1e-13)[0]
        assert phase_integral(spec, theta) == pytest.approx(oracle, rel=1e-10, abs=1e-12)

    def test_phase_rate_is_intensity(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.EXPONENTIAL, 0.5, 1.0)
        assert phase_rate(spec, 2.0) == pytest.approx(0.5 * math.exp(-2))

    @pytest.mark.parametrize("kind", list(ScenarioKind))
    def test_probabilities_sum_to_one(self, kind):
        spec = ScenarioSpec.from_ratio(kind, 0.5, 1 / math.pi)
        theta = np.linspace(0, 4.9, 300)
        total = analytic_success_probability(spec, theta) + analytic_failure_probability(spec, theta)
        assert np.max(np.abs(total - 1)) < 1e-15

    def test_negative_theta_rejected(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)
        with pytest.raises(DomainError):
            phase_integral(spec, -1.0)


class TestPeriod:
    def test_constant(self):
        assert period(ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)) == pytest.approx(2 * math.pi)

    def test_oscillatory(self):
        assert period(ScenarioSpec.from_ratio(ScenarioKind.OSCILLATORY, 0.5, 1 / math.pi)) == pytest.approx(math.pi**2)

    @pytest.mark.parametrize("kind", [ScenarioKind.POWERLAW, ScenarioKind.EXPONENTIAL])
    def test_monotone_has_none(self, kind):
        assert period(ScenarioSpec.from_ratio(kind, 0.5, 1.0)) is None


class TestPropagation:
    def test_rabi_maximum(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)
        result = propagate_schrodinger(spec, math.pi, 2000)
        assert result.success_probability[-1] == pytest.approx(1.0, abs=1e-6)

    def test_zero_time_is_identity(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.POWERLAW, 0.5, 1.0)
        result = propagate_schrodinger(spec, 0.0, 10)
        assert np.allclose(result.unitaries, np.eye(2))
        assert result.success_probability[0] == 0.0

    def test_grid_has_steps_plus_one_points(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)
        result = propagate_schrodinger(spec, 1.0, 37)
        assert result.time_grid.shape == (38,)
        assert result.unitaries.shape == (38, 2, 2)

    def test_exponential_matches_closed_form(self):
        spec = ScenarioSpec.unit_success(ScenarioKind.EXPONENTIAL, 1 / math.pi)
        result = propagate_schrodinger(spec, 1.0, 4000)
        assert abs(result.success_probability[-1] - analytic_success_probability(spec, 1.0)) < 1e-6

    @pytest.mark.parametrize("kind", list(ScenarioKind))
    def test_matches_adaptive_oracle(self, kind):
        spec = ScenarioSpec.from_ratio(kind, 0.5, 1 / math.pi, omega0=-2.0)
        t_final = 1.5
        result = propagate_schrodinger(spec, t_final, 4000)
        assert abs(result.success_probability[-1] - schrodinger_oracle(spec, t_final)) < 1e-6

    def test_second_order_convergence(self):
        spec = ScenarioSpec.unit_success(ScenarioKind.POWERLAW, 1 / math.pi)
        exact = analytic_success_probability(spec, 5.0)
        errors = [abs(propagate_schrodinger(spec, 5.0, n).success_probability[-1] - exact) for n in (100, 200)]
        assert errors[0] / errors[1] >= 3.5

    @pytest.mark.parametrize("origin", [0.0, 1.1, -2.5])
    def test_phase_origin_independence(self, origin):
        spec = ScenarioSpec.unit_success(ScenarioKind.EXPONENTIAL, 1 / math.pi, phase_origin=origin)
        result = propagate_schrodinger(spec, 5.0, 4000)
        exact = np.asarray(analytic_success_probability(spec, result.time_grid))
        assert np.max(np.abs(result.success_probability - exact)) < 1e-6

    def test_unitarity_preserved(self):
        spec = ScenarioSpec.unit_success(ScenarioKind.OSCILLATORY, 1 / math.pi)
        result = propagate_schrodinger(spec, 4.0, 4000)
        assert result.max_unitarity_deviation < 1e-9
        assert result.amplitudes().norm == pytest.approx(1.0, abs=1e-12)

    def test_warns_past_oscillatory_window(self):
        spec = ScenarioSpec.unit_success(ScenarioKind.OSCILLATORY, 1.0)
        with pytest.warns(RuntimeWarning):
            propagate_schrodinger(spec, 2.0, 100)

    def test_rejects_bad_arguments(self):
        spec = ScenarioSpec.from_ratio(ScenarioKind.CONSTANT, 0.5)
        with pytest.raises(ValueError):
            propagate_schrodinger(spec, 1.0, 0)
        with pytest.raises(DomainError):
            propagate_schrodinger(spec, -1.0, 10)


class TestGeneralTransition:
    def test_identity(self):
        for x in (0.0, 0.3, 1.0):
            assert transition_probability_general(np.eye(2), x) == pytest.approx(x * x)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_pure_sources(self, seed):
        u = unitary_group.rvs(2, random_state=seed)
        assert transition_probability_general(u, 0.0) == pytest.approx(abs(u[0, 1]) ** 2, abs=1e-12)
        assert transition_probability_general(u, 1.0) == pytest.approx(abs(u[0, 0]) ** 2, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), x=st.floats(0.0, 1.0))
    def test_matches_state_vector_oracle(self, seed, x):
        u = unitary_group.rvs(2, random_state=seed)
        source = np.array([x, math.sqrt(1 - x * x)])
        assert transition_probability_general(u, x) == pytest.approx(abs((u @ source)[0]) ** 2, abs=1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(UnitarityError):
            transition_probability_general(np.array([[1.0, 0.1], [0.0, 1.0]]), 0.5)

    def test_rejects_bad_overlap(self):
        with pytest.raises(DomainError):
            transition_probability_general(np.eye(2), 1.5)

    def test_unitarity_deviation_of_rotation(self):
        c, s = math.cos(0.3), math.sin(0.3)
        assert unitarity_deviation(np.array([[c, -s], [s, c]])) < 1e-15
