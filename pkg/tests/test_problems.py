import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from arcweno.problems import (
    BURGERS_BREAK_TIME,
    LAX,
    PROBLEMS,
    SOD,
    VacuumError,
    exact_burgers,
    exact_riemann_euler,
    get_problem,
    sin4_cell_averages,
    star_state,
)
from arcweno.solver import Grid1D


def test_registry_and_lookup():
    assert set(PROBLEMS) == {"advection-sin4", "burgers-smooth", "sod", "lax", "riemann2d", "implosion", "explosion"}
    with pytest.raises(ValueError, match="valid"):
        get_problem("nope")


def test_sin4_averages_match_quadrature():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.uniform(-1, 1)
        h = rng.uniform(1e-3, 0.2)
        ref = quad(lambda x: math.sin(math.pi * x) ** 4, a, a + h, epsabs=1e-15)[0] / h
        assert sin4_cell_averages(a, a + h) == pytest.approx(ref, abs=1e-13)


def test_sod_star_state():
    p, u = star_state(*SOD)
    assert p == pytest.approx(0.30313, abs=1e-5)
    assert u == pytest.approx(0.92745, abs=1e-5)


def _wave_curve(p, state, g=1.4):
    # velocity change across a shock or rarefaction connecting state to pressure p
    r, _, pk = state
    if p > pk:
        return (p - pk) * math.sqrt(2 / ((g + 1) * r) / (p + (g - 1) / (g + 1) * pk))
    c = math.sqrt(g * pk / r)
    return 2 * c / (g - 1) * ((p / pk) ** ((g - 1) / (2 * g)) - 1)


@pytest.mark.parametrize("left,right", [SOD, LAX])
def test_star_pressure_matches_bracketing_solve(left, right):
    du = right[1] - left[1]
    ref = brentq(lambda p: _wave_curve(p, left) + _wave_curve(p, right) + du, 1e-8, 100.0, xtol=1e-15, rtol=1e-15)
    p, u = star_state(left, right)
    assert p == pytest.approx(ref, rel=1e-11)
    assert u == pytest.approx(0.5 * (left[1] + right[1]) + 0.5 * (_wave_curve(ref, right) - _wave_curve(ref, left)), rel=1e-10)


def test_vacuum_detected():
    with pytest.raises(VacuumError):
        star_state((1.0, -20.0, 1.0), (1.0, 20.0, 1.0))


def test_sod_shock_satisfies_rankine_hugoniot():
    g = 1.4
    ps, us = star_state(*SOD)
    rr, ur, pr = SOD[1]
    xi = np.linspace(-2, 2, 40001)
    rho, vel, p = exact_riemann_euler(SOD[0], SOD[1], g, xi)
    # shock is the right-most jump in density
    k = np.nonzero(np.abs(np.diff(rho)) > 1e-3)[0][-1]
    s = 0.5 * (xi[k] + xi[k + 1])
    rl_, ul_, pl_ = rho[k], vel[k], p[k]

    def cons(r, u, pp):
        return np.array([r, r * u, pp / (g - 1) + 0.5 * r * u * u])

    def flux(r, u, pp):
        e = pp / (g - 1) + 0.5 * r * u * u
        return np.array([r * u, r * u * u + pp, u * (e + pp)])

    jump_u = cons(rl_, ul_, pl_) - cons(rr, ur, pr)
    jump_f = flux(rl_, ul_, pl_) - flux(rr, ur, pr)
    assert jump_f == pytest.approx(s * jump_u, rel=2e-4, abs=2e-4)
    assert pl_ == pytest.approx(ps)


def test_exact_riemann_far_field():
    rho, vel, p = exact_riemann_euler(SOD[0], SOD[1], 1.4, np.array([-5.0, 5.0]))
    assert (rho[0], p[0]) == (1.0, 1.0)
    assert (rho[1], p[1]) == (0.125, 0.1)


def test_exact_burgers_satisfies_characteristics():
    x = np.linspace(-1, 1, 101)
    t = 0.2
    u = exact_burgers(x, t)
    assert u == pytest.approx(1 + 0.5 * np.sin(np.pi * (x - u * t)), abs=1e-13)


def test_exact_burgers_refuses_after_breaking():
    with pytest.raises(ValueError):
        exact_burgers(0.0, BURGERS_BREAK_TIME * 1.01)


def test_2d_initial_data_symmetric():
    for name in ("riemann2d", "implosion", "explosion"):
        p = get_problem(name)
        u = p.initial(p.grid(40))
        assert np.array_equal(u[0], u[0].T)
        assert np.array_equal(u[1], u[2].T)
        assert np.array_equal(u[3], u[3].T)


def test_problem_grids():
    g = get_problem("sod").grid(50)
    assert isinstance(g, Grid1D) and g.dx == pytest.approx(0.02)
    assert get_problem("implosion").grid(10).shape == (10, 10)
