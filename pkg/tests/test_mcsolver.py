import math

import numpy as np
import pytest

from conftest import ml_oracle
from wrightfde.catalog import PRESETS, get_preset
from wrightfde.errors import DomainError
from wrightfde.mcsolver import compare, ode_solution, solve_closed_form, solve_mc
from wrightfde.odeint import eval_at
from wrightfde.problems import Forcing, LinearFdeProblem, TimeGrid
from wrightfde.specfun import transform_series

ALL = list(PRESETS)


def test_rc_half():
    est = solve_mc(get_preset("rc").problem(0.5), TimeGrid((1.0,)), 100_000, seed=0)[0]
    ref = float(ml_oracle(-1.0, 0.5, 1.0))
    assert ref == pytest.approx(0.4275835762, abs=1e-10)
    assert abs(est.mean - ref) <= 4 * est.stderr


def test_lc_sin_half():
    est = solve_mc(get_preset("lc-sin").problem(0.5), TimeGrid((1.0,)), 100_000, seed=0)[0]
    ref = float(ml_oracle(-1.0, 1.0, 1.5))
    assert get_preset("lc-sin").closed_form(0.5, 1.0) == pytest.approx(ref, rel=1e-12)
    assert abs(est.mean - ref) <= 4 * est.stderr


@pytest.mark.parametrize("name", ALL)
def test_beta_one_is_ode(name):
    prob = get_preset(name).problem(1.0)
    grid = TimeGrid((0.5, 1.0, 2.0))
    est = solve_mc(prob, grid, 10, seed=0)
    ref = eval_at(ode_solution(prob, 2.0), grid.as_array())[:, 0]
    for e, r in zip(est, ref):
        assert e.mean == pytest.approx(r, rel=1e-12, abs=1e-14)
        assert e.stderr <= 1e-12 * max(1.0, abs(r))


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("beta", [0.7, 0.9])
def test_origin_exact(name, beta):
    prob = get_preset(name).problem(beta)
    est = solve_mc(prob, TimeGrid((0.0, 1e-6)), 1000, seed=0)
    assert est[0].mean == prob.initial_conditions[0] and est[0].stderr == 0.0
    assert abs(est[1].mean - prob.initial_conditions[0]) <= 1e-3


@pytest.mark.parametrize("name", ALL)
def test_origin_first_order(name):
    # y(t) = z(0) + z'(0) t^b / G(1+b) + O(t^2b); at b = 1/2 the linear term alone is ~1.1e-3 z'(0)
    b, t = 0.5, 1e-6
    prob = get_preset(name).problem(b)
    z = prob.initial_conditions
    slope = z[1] if len(z) > 1 else -prob.coefficients[1] / prob.coefficients[0] * z[0] + prob.forcing(0.0) / prob.coefficients[0]
    est = solve_mc(prob, TimeGrid((t,)), 20_000, seed=0)[0]
    pred = z[0] + slope * t ** b / math.gamma(1 + b)
    assert abs(est.mean - pred) <= 4 * est.stderr + 1e-4


def test_stderr_scaling():
    prob = get_preset("rc").problem(0.5)
    a = solve_mc(prob, TimeGrid((1.0,)), 10_000, seed=2)[0].stderr
    b = solve_mc(prob, TimeGrid((1.0,)), 40_000, seed=2)[0].stderr
    assert 0.4 <= b / a <= 0.6


def test_thread_determinism():
    prob = get_preset("lc-cos").problem(0.7)
    grid = TimeGrid.uniform(3.0, 12)
    one = solve_mc(prob, grid, 5000, seed=9, threads=1)
    four = solve_mc(prob, grid, 5000, seed=9, threads=4)
    assert one == four


def test_seed_changes_result():
    prob = get_preset("rc").problem(0.5)
    assert solve_mc(prob, TimeGrid((1.0,)), 1000, seed=1) != solve_mc(prob, TimeGrid((1.0,)), 1000, seed=2)


def test_coupled():
    prob = get_preset("rc").problem(0.5)
    grid = TimeGrid.uniform(2.0, 10)
    a = solve_mc(prob, grid, 20_000, seed=3, coupled=True)
    assert a == solve_mc(prob, grid, 20_000, seed=3, coupled=True, threads=3)
    means = np.array([e.mean for e in a])
    assert np.all(np.diff(means) < 0)  # shared base gives a monotone curve for a decreasing z
    tab = compare(a, solve_closed_form(prob, grid))
    assert np.all(tab.abs_err <= 4 * tab.mc_stderr + 1e-3)


def test_transform_series_crosscheck():
    # lc-sin with omega = 1 has z = sin t
    prob = get_preset("lc-sin").problem(0.6)
    coeffs = [[0, 1, 0, -1][n % 4] for n in range(150)]
    for est in solve_mc(prob, TimeGrid((0.2, 0.5, 0.9)), 50_000, seed=4):
        ref = transform_series(coeffs, 0.6, est.t)
        assert abs(est.mean - ref) <= 4 * est.stderr + 1e-12


def test_needs_replicates():
    with pytest.raises(DomainError):
        solve_mc(get_preset("rc").problem(0.5), TimeGrid((1.0,)), 1, seed=0)


def test_bad_seed():
    with pytest.raises(DomainError):
        solve_mc(get_preset("rc").problem(0.5), TimeGrid((1.0,)), 10, seed=-1)


class TestClosedForm:
    def test_custom_forcing_has_none(self):
        prob = LinearFdeProblem((1.0, 1.0), (1.0,), 0.5, Forcing("custom", func=np.sin))
        assert solve_closed_form(prob, TimeGrid((1.0,))) is None

    def test_generic_first_order(self):
        prob = LinearFdeProblem((2.0, 1.0), (3.0,), 0.5)
        cf = solve_closed_form(prob, TimeGrid((1.0,)))
        assert cf[0] == pytest.approx(3.0 * float(ml_oracle(-0.5, 0.5, 1.0)), rel=1e-12)

    def test_generic_second_order_vs_mc(self):
        prob = LinearFdeProblem((3.0, 1.0, 2.0), (1.0, -0.5), 0.6)
        grid = TimeGrid((0.5, 1.5))
        tab = compare(solve_mc(prob, grid, 50_000, seed=6), solve_closed_form(prob, grid))
        assert np.all(tab.err_within_k_se)

    def test_third_order_has_none(self):
        prob = LinearFdeProblem((0.0, 0.0, 1.0, 1.0), (1.0, 0.0, 0.0), 0.5)
        assert solve_closed_form(prob, TimeGrid((1.0,))) is None

    def test_preset_without_formula(self):
        assert solve_closed_form(get_preset("cubic-ffnn").problem(0.5), TimeGrid((1.0,))) is None


class TestCompare:
    def test_identical(self):
        est = solve_mc(get_preset("rc").problem(0.5), TimeGrid((0.5, 1.0)), 100, seed=0)
        tab = compare(est, [e.mean for e in est])
        assert np.all(tab.abs_err == 0) and tab.fraction_within() == 1.0
        assert len(tab.rows()) == 2 and len(tab.rows()[0]) == 5

    def test_mismatch(self):
        est = solve_mc(get_preset("rc").problem(0.5), TimeGrid((0.5, 1.0)), 100, seed=0)
        with pytest.raises(DomainError):
            compare(est, [1.0])

    def test_missing_closed_form(self):
        est = solve_mc(get_preset("rc").problem(0.5), TimeGrid((1.0,)), 100, seed=0)
        tab = compare(est, None)
        assert math.isnan(tab.closed_form[0]) and math.isnan(tab.fraction_within())
