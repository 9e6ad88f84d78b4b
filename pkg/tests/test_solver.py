import numpy as np
import pytest

from arcweno.flux import Burgers, Euler, InadmissibleStateError, LinearAdvection
from arcweno.problems import get_problem
from arcweno.solver import BoundaryKind, Grid1D, Grid2D, apply_bc, run, run_1d, run_2d
from arcweno.timestep import TimeControls

P, T, R = BoundaryKind.PERIODIC, BoundaryKind.TRANSMISSIVE, BoundaryKind.REFLECTING


def test_grid1d_geometry():
    g = Grid1D(4, -1.0, 1.0)
    assert g.dx == 0.5
    assert g.centers == pytest.approx([-0.75, -0.25, 0.25, 0.75])
    assert g.edges[[0, -1]] == pytest.approx([-1.0, 1.0])
    with pytest.raises(ValueError):
        Grid1D(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Grid1D(4, 1.0, 0.0)
    with pytest.raises(ValueError):
        Grid1D(4, 0.0, 1.0, ghost=2)


def test_grid2d_geometry():
    g = Grid2D(4, 2, 0.0, 1.0, 0.0, 2.0)
    x, y = g.mesh()
    assert x.shape == (4, 2)
    assert g.cell_volume == pytest.approx(0.25)
    assert y[0] == pytest.approx([0.5, 1.5])


def test_periodic_ghosts():
    u = np.arange(6.0)[None]
    p = apply_bc(u, P)
    assert p[0].tolist() == [3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2]


def test_transmissive_ghosts():
    p = apply_bc(np.arange(1.0, 5.0)[None], T)
    assert p[0].tolist() == [1, 1, 1, 1, 2, 3, 4, 4, 4, 4]


def test_reflecting_ghosts_negate_normal_momentum():
    u = np.array([[1.0, 2.0, 3.0, 4.0], [10.0, 20.0, 30.0, 40.0], [5.0, 6.0, 7.0, 8.0]])
    p = apply_bc(u, R, momentum=(1,))
    assert p[0].tolist() == [3, 2, 1, 1, 2, 3, 4, 4, 3, 2]
    assert p[1].tolist() == [-30, -20, -10, 10, 20, 30, 40, -40, -30, -20]
    assert p[2, :3].tolist() == [7, 6, 5]


def test_reflecting_2d_negates_only_its_component():
    m = Euler(1.4, 2)
    g = Grid2D(4, 4, 0, 1, 0, 1)
    u = m.conserved(np.ones(g.shape), [np.full(g.shape, 0.3), np.full(g.shape, -0.2)], np.ones(g.shape))
    p = apply_bc(u, R, 3, (1, 2))
    assert p.shape == (4, 10, 10)
    assert p[1, 0, 5] == pytest.approx(-0.3) and p[2, 0, 5] == pytest.approx(-0.2)
    assert p[1, 5, 0] == pytest.approx(0.3) and p[2, 5, 0] == pytest.approx(0.2)


def test_bc_kind_count_checked():
    with pytest.raises(ValueError):
        apply_bc(np.ones((1, 5)), (P, P, P))


def test_run_rejects_wrong_shape():
    with pytest.raises(ValueError):
        run(Burgers(), "eno3", Grid1D(10, 0, 1), P, np.ones((1, 9)), TimeControls(0.1))
    with pytest.raises(TypeError):
        run_1d(Burgers(), "eno3", Grid2D(8, 8, 0, 1, 0, 1), P, np.ones((1, 8, 8)), TimeControls(0.1))


@pytest.mark.parametrize("scheme", ["eno3", "eno3-l", "weno5-js", "weno5-z", "weno5-l", "weno5-zl"])
def test_periodic_conservation(scheme):
    g = Grid1D(64, -1, 1)
    u0 = (1 + 0.5 * np.sin(np.pi * g.centers) + (g.centers > 0.2))[None]
    res = run(Burgers(), scheme, g, P, u0, TimeControls(0.3))
    assert abs(res.final_total[0] - res.initial_total[0]) <= 1e-12
    assert res.t == 0.3


def test_transmissive_ledger_balances():
    p = get_problem("sod")
    res = run(p.model, "weno5-l", p.grid(100), p.boundary, p.initial, TimeControls(0.25))
    # waves have reached the boundaries, so mass leaves and the ledger must account for it
    assert np.max(np.abs(res.boundary_outflow)) > 1e-6
    assert np.max(np.abs(res.conservation_defect)) <= 1e-12


def test_admissibility_failure_reports_time():
    m = Euler(1.4, 1)
    g = Grid1D(20, 0, 1)
    # strong expansion into near-vacuum with a huge CFL-breaking fixed step
    u0 = m.conserved(np.full(20, 1e-3), [np.where(g.centers < 0.5, -50.0, 50.0)], np.full(20, 1e-6))
    with pytest.raises((InadmissibleStateError, FloatingPointError)) as info:
        run(m, "weno5-js", g, T, u0, TimeControls(1.0, cfl=1.0))
    assert str(info.value).startswith("t=")


def test_on_step_sees_every_step():
    seen = []
    res = run(LinearAdvection(1.0), "eno3", Grid1D(20, 0, 1), P, np.ones((1, 20)), TimeControls(0.1),
              on_step=lambda t, u: seen.append(t))
    assert len(seen) == res.steps and seen[-1] == 0.1


def test_run_2d_default_model():
    p = get_problem("riemann2d")
    res = run_2d("eno3", p.grid(16), p.boundary, p.initial, TimeControls(0.02))
    assert res.u.shape == (4, 16, 16)
    assert res.min_density > 0 and res.min_pressure > 0
