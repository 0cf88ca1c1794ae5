import numpy as np
import pytest

from periodic_ssq import curve, experiments, ssq
from periodic_ssq.exceptions import DegenerateCurveError

from conftest import starfish_exact


@pytest.mark.parametrize("m", [1, 2, 3])
def test_interior_reference_uses_derivative_of_order_m_minus_1(starfish_geom, m):
    """Residue form 2 pi i sigma^{(m-1)}(z)/(m-1)! checked by brute-force quadrature."""
    z = starfish_exact(1 + 0.2j)
    sigma = experiments.power_density(curve.INTERIOR)
    oracle = experiments.power_quad_reference(starfish_geom, sigma, z, m)
    ref = experiments.power_reference(z, m, curve.INTERIOR)
    assert abs(ref - oracle) <= 1e-10 * max(1, abs(oracle))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_exterior_reference_carries_sign(starfish_geom, m):
    """Exterior form 2 pi i (-z)^{-m}: the (-1)^m factor is needed."""
    z = 1.5 + 0.2j
    sigma = experiments.power_density(curve.EXTERIOR)
    oracle = experiments.power_quad_reference(starfish_geom, sigma, z, m)
    ref = experiments.power_reference(z, m, curve.EXTERIOR)
    assert abs(ref - oracle) <= 1e-10 * max(1, abs(oracle))
    if m % 2:
        assert abs(2j * np.pi * z**(-m) - oracle) > 0.1 * abs(oracle)


def test_target_preimages():
    ts = experiments.target_preimages(0.02, curve.INTERIOR)
    assert len(ts) == 100
    np.testing.assert_allclose(ts.imag, 0.02)
    np.testing.assert_allclose(np.diff(ts.real), 2 * np.pi / 100)
    assert ts.real[0] == pytest.approx(np.pi / 100)
    ext = experiments.target_preimages(0.02, curve.EXTERIOR, jitter_seed=1)
    np.testing.assert_allclose(ext.imag, -0.02)
    again = experiments.target_preimages(0.02, curve.EXTERIOR, jitter_seed=1)
    np.testing.assert_array_equal(ext, again)


def test_fit_rate():
    n = np.arange(50, 600, 50)
    assert experiments.fit_rate(n, 3 * np.exp(-0.02 * n)) == pytest.approx(0.02)
    with pytest.raises(ValueError):
        experiments.fit_rate([1, 2], [1.0, 1.0])


def test_geometry_factory():
    assert experiments.make_geometry("ellipse", a=2, b=1).fun(0.0) == 2
    with pytest.raises(ValueError):
        experiments.make_geometry("square")
    with pytest.raises(DegenerateCurveError):
        experiments.starfish(amplitude=1.0)


def test_log_reference_circle():
    g = experiments.circle()
    val = experiments.log_reference(g, 2.0, density=lambda t: np.ones_like(t))
    assert val == pytest.approx(2 * np.pi * np.log(2), rel=1e-13)


def test_convergence_row_cauchy():
    row = experiments.convergence_row(experiments.starfish(), "cauchy", curve.INTERIOR, 0.02, 400)
    assert row["err_ssq"] <= 1e-10
    assert row["err_trapz"] > 1e-5
    assert row["flags"] == ""


def test_convergence_table_order():
    rows = experiments.convergence_table(experiments.circle(), "cauchy",
                                         [curve.INTERIOR, curve.EXTERIOR], [40, 80], [0.1])
    assert [(r["side"], r["N"]) for r in rows] == [
        ("interior", 40), ("interior", 80), ("exterior", 40), ("exterior", 80)]
    assert all(r["err_ssq"] <= 1e-12 for r in rows)


def test_decay_circle_single_mode():
    k, chat, fhat = experiments.decay_data(experiments.circle(), 1 + 0.05j, 65, "one")
    assert np.sum(fhat > 1e-13) == 1
    assert np.sum(chat > 1e-3) > 10


def test_decay_slope_matches_distance(starfish_geom):
    k, chat, _ = experiments.decay_data(starfish_geom, 1 + 0.05j, 401)
    mask = (k < 0) & (chat > 1e-13 * chat.max())
    slope = np.polyfit(np.abs(k[mask]), np.log(chat[mask]), 1)[0]
    assert slope == pytest.approx(-0.05, rel=0.1)


def test_laplace_demo_small():
    res = experiments.laplace_demo(n=100, grid=40)
    assert res["abs_error"].shape == res["x"].shape
    assert np.all(np.isin(res["method"], [ssq.SSQ, ssq.TRAPEZOIDAL]))
    assert res["solution"].relative_residual <= 1e-12
