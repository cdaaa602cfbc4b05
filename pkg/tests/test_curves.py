import csv
import math

import numpy as np
import pytest

from logsurf.curves import (
    SANDWICH_HALF_WIDTH,
    CurveKind,
    Quadrant,
    TraceConfig,
    Window,
    curve_A_derivative,
    derivative_bound,
    sandwich_check,
    trace_arg_level,
    trace_g_level,
    trace_mod_level,
)
from logsurf.errors import ParameterError, PreconditionError, WindowExitError
from logsurf.gamma import find_x0, gamma, phase_A


@pytest.fixture(scope="module")
def seed_curve():
    return trace_mod_level(abs(gamma(2 + 1j)), 2, 8)


class TestModLevel:
    def test_passes_through_seed(self, seed_curve):
        assert seed_curve.x[0] == 2
        assert abs(seed_curve.y[0] - 1) < 1e-10

    def test_residuals_and_modulus(self, seed_curve):
        assert seed_curve.residual.max() < 1e-10
        r = abs(gamma(2 + 1j))
        assert np.allclose(np.abs(gamma(seed_curve.points)), r, rtol=1e-10, atol=0)

    def test_positive_slopes(self, seed_curve):
        assert np.all(seed_curve.slopes() > 0)
        assert np.all(np.diff(seed_curve.x) > 0)

    def test_derivative_bound(self):
        c = trace_mod_level(abs(gamma(5 + 2j)), 5, 12)
        check = curve_A_derivative(c)
        assert check.ok
        assert np.all(check.derivative > 0)

    def test_just_above_three(self):
        c = trace_mod_level(abs(gamma(3.01 + 1j)), 3.01, 3.5, TraceConfig(x_step=0.01))
        check = curve_A_derivative(c)
        assert check.bound[0] == pytest.approx(2 * (math.log(3) - 1) ** 2)
        assert check.bound[0] == pytest.approx(0.019449, abs=1e-6)
        assert check.derivative[0] > check.bound[0]

    def test_bound_vacuous_below_three(self):
        assert np.isnan(derivative_bound([2.9])[0])
        assert derivative_bound([4.5])[0] == pytest.approx(2 * (math.log(4) - 1) ** 2)

    def test_no_horizontal_asymptote(self):
        x0 = find_x0()
        c = trace_mod_level(1.0, x0 + 1, 30, TraceConfig(x_step=0.25))
        assert c.y[-1] - c.y[0] > 20

    def test_reseeding_invariance(self):
        r = abs(gamma(2 + 1j))
        a = trace_mod_level(r, 2, 6, TraceConfig(x_step=0.1))
        b = trace_mod_level(r, 2, 6, TraceConfig(x_step=0.05))
        assert np.max(np.abs(a.y - b.y[::2])) < 10 * 1e-10

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            trace_mod_level(0.5, 1.0, 3.0)
        with pytest.raises(ParameterError):
            trace_mod_level(-1.0, 2.0, 3.0)

    def test_window_exit_reports_x(self):
        with pytest.raises(WindowExitError) as info:
            trace_mod_level(abs(gamma(2 + 1j)), 2, 8, y_max=3.0)
        assert info.value.x is not None and 2 < info.value.x <= 8

    def test_level_above_real_value_has_no_crossing(self):
        with pytest.raises(WindowExitError):
            trace_mod_level(2.0, 2.0, 3.0)

    def test_csv(self, seed_curve, tmp_path):
        path = tmp_path / "curve.csv"
        seed_curve.write_csv(path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y", "residual", "A", "|Gamma|"]
        assert len(rows) == len(seed_curve) + 1
        assert float(rows[1][4]) == pytest.approx(abs(gamma(2 + 1j)), rel=1e-10)

    def test_derivative_needs_mod_curve(self):
        c = trace_arg_level(1.0, "upper-right", Window(3, 4, 0.0, 50))
        with pytest.raises(PreconditionError):
            curve_A_derivative(c)


class TestArgLevel:
    def test_recovers_seed(self):
        theta = phase_A(3 + 2j)
        c = trace_arg_level(theta, Quadrant.UPPER_RIGHT, Window(3, 12, 0.0, 100))
        assert abs(c.y[0] - 2) < 1e-10
        assert c.residual.max() < 1e-10
        s = c.slopes()
        assert np.all(s < 0)
        assert np.all(np.diff(np.abs(s)) < 0)

    def test_upper_left_full_extent(self):
        c = trace_arg_level(0.0, Quadrant.UPPER_LEFT, Window(-20, -5, 2, 200))
        assert c.x[0] == -20 and c.x[-1] == -5
        assert np.all(c.y > 2)
        assert np.all(c.slopes() < 0)
        assert c.kind is CurveKind.ARG_LEVEL

    def test_disjoint_levels(self):
        win = Window(-20, -5, 2, 200)
        a = trace_arg_level(0.0, "upper-left", win)
        b = trace_arg_level(0.5, "upper-left", win)
        assert np.min(np.abs(a.points[:, None] - b.points[None, :])) > math.sqrt(1e-10)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            trace_arg_level(-1.0, "upper-right", Window(3, 5, 0, 10))
        with pytest.raises(PreconditionError):
            trace_arg_level(1.0, "upper-right", Window(1, 5, 0, 10))
        with pytest.raises(PreconditionError):
            trace_arg_level(1.0, "upper-left", Window(-10, -5, 1, 10))

    def test_window_validation(self):
        with pytest.raises(ParameterError):
            Window(1, 1)
        with pytest.raises(ParameterError):
            TraceConfig(x_step=0)


class TestSandwich:
    @pytest.mark.parametrize("theta", [0.0, 2 * math.pi])
    def test_band(self, theta):
        rep = sandwich_check(theta, Window(-20, -5, 2, 200))
        assert rep.ok
        assert rep.max_deviation <= SANDWICH_HALF_WIDTH
        assert SANDWICH_HALF_WIDTH == pytest.approx(6.97e-6, rel=1e-3)

    def test_window_below_two(self):
        with pytest.raises(PreconditionError):
            sandwich_check(0.0, Window(-20, -5, 1.0, 200))

    def test_g_level_close_to_arg_level(self):
        win = Window(-12, -6, 2, 200)
        g = trace_g_level(2 * math.pi, win)
        a = trace_arg_level(2 * math.pi, "upper-left", win)
        assert np.max(np.abs(g.y - a.y)) < 1e-6
