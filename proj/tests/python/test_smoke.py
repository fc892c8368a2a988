import numpy as np
import pytest

import patmg


@pytest.fixture(scope="module")
def setup():
    g = patmg.Grid(dims=[32, 32], spacing=2e-4, pml_thickness=6, dt=2e-8, nt=40)
    med = patmg.uniform_medium(g, 1500.0, 1000.0, 0.0)
    ex = g.interior_extent(0)  # sensor coordinates live in the interior box
    sens = patmg.make_arc_sensors(8, 0.35 * ex, [0.5 * ex, 0.5 * ex], 0.0, 315.0)
    op = patmg.ForwardOperator(g, med, sens)
    return g, med, sens, op


def interior_blob(g, rng):
    n = g.interior_dims()
    x = np.zeros(n)
    i, j = np.meshgrid(np.arange(n[0]), np.arange(n[1]), indexing="ij")
    x += np.exp(-(((i - n[0] / 2) ** 2 + (j - n[1] / 2) ** 2) / (2 * 3.0**2)))
    return x


def test_grid_properties(setup):
    g = setup[0]
    assert g.rank == 2
    assert g.dims == [32, 32]
    assert g.interior_dims() == [20, 20]
    assert g.interior_extent(0) == pytest.approx(20 * 2e-4)


def test_forward_shape_and_adjoint_dot(setup):
    g, _, sens, op = setup
    rng = np.random.default_rng(0)
    x = rng.standard_normal(g.interior_dims())
    d = op.forward(x)
    assert d.shape == (8, 40)
    y = rng.standard_normal(d.shape)
    lhs = np.vdot(op.forward(x).ravel(), y.ravel())
    rhs = np.vdot(x.ravel(), op.adjoint(y).ravel())
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


def test_time_reversal_recovers_blob(setup):
    g, _, _, op = setup
    x = interior_blob(g, None)
    tr = op.time_reversal(op.forward(x))
    assert patmg.relative_error_percent(tr, x) < 100.0


def test_prox_tv_fixed_point_and_nonneg(setup):
    rng = np.random.default_rng(1)
    z = rng.standard_normal((12, 12))
    # weight 0 with nonneg is plain projection
    p = patmg.prox_tv(z, 0.0, iters=5, nonneg=True)
    assert np.allclose(p, np.maximum(z, 0.0))
    # a constant nonnegative image is already TV-minimal
    c = np.full((10, 10), 2.5)
    assert np.allclose(patmg.prox_tv(c, 0.3, iters=50), c)
    # heavy weight flattens toward the (clipped) mean
    q = patmg.prox_tv(z, 100.0, iters=200)
    assert patmg.tv_value(q) < patmg.tv_value(np.maximum(z, 0.0))


def test_transfers_adjoint_identity():
    rng = np.random.default_rng(2)
    xc = rng.standard_normal((8, 8))
    yf = rng.standard_normal((16, 16))
    lhs = np.vdot(patmg.prolong(xc).ravel(), yf.ravel())
    rhs = 4.0 * np.vdot(xc.ravel(), patmg.restrict(yf).ravel())
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_solve_decreases_objective(setup):
    g, _, _, op = setup
    x = interior_blob(g, None)
    data = op.forward(x)
    out = patmg.solve(op, data, algo="fista", lam=1e-3, max_iters=6, eps_d=0.0)
    recs = out["records"]
    assert len(recs) == 6
    assert out["stop_reason"] == "max-iters"
    assert recs[-1]["F"] < out["f_initial"]
    assert out["image"].min() >= -1e-12
    re = patmg.relative_error_percent(out["image"], x)
    assert np.isfinite(re)


def test_mg_solve_runs(setup):
    g, _, _, op = setup
    x = interior_blob(g, None)
    data = op.forward(x)
    out = patmg.solve(op, data, algo="mg-fista", lam=1e-3, max_iters=4, eps_d=0.0,
                      kappa=0.05, q_c=4)
    assert out["min_iterate"] >= -1e-12
    assert len(out["records"]) >= 1


def test_field_io_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    x = rng.standard_normal((7, 9))
    p = tmp_path / "x.fld"
    patmg.write_field(p, x)
    assert np.array_equal(patmg.read_field(p), x)


def test_power_law_helper():
    w = 2 * np.pi * 2e6
    a = patmg.absorption_np_per_m(0.75, 1.5, w)
    assert a == pytest.approx(24.4226, rel=1e-4)
