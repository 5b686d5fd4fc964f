import numpy as np
import pytest

from gpvortex.barycenter_diag import (NegativeDensity, NotConcentrated, ZeroDensity, ball_masses,
                                      best_center, concentration_ratio, intrinsic_barycenter,
                                      intrinsic_barycenter_report, smallest_mu)
from gpvortex.torus_grid import TorusGrid


def blob(grid, center, width):
    d = grid.displacement_field(center)
    return np.exp(-np.sum(d * d, axis=0) / width ** 2)


def test_point_mass_concentration():
    g = TorusGrid.cube(32, 1.0)
    rho = np.zeros(g.shape)
    rho[10, 11, 12] = 1.0
    c = g.node_point((10, 11, 12))
    assert concentration_ratio(g, rho, c, 0.05) == 1.0
    assert concentration_ratio(g, rho, g.wrap(c + 0.3), 0.05) == 0.0
    rep = best_center(g, rho, 0.05)
    assert rep.passed
    _, dist = g.min_image(rep.center, c)
    assert dist <= 0.05


def test_uniform_density_ratio_is_ball_fraction():
    g = TorusGrid.cube(32, 1.0)
    rho = np.ones(g.shape)
    R = 0.2
    m = ball_masses(g, rho, R)
    assert np.allclose(m, m.flat[0])
    assert concentration_ratio(g, rho, (0.5, 0.5, 0.5), R) == pytest.approx(m.flat[0], rel=1e-12)
    assert m.flat[0] == pytest.approx(4 / 3 * np.pi * R ** 3, rel=0.05)


def test_barycenter_across_the_seam():
    g = TorusGrid.cube(32, 1.0)
    rho = blob(g, (0.0, 0.5, 0.5), 0.05)
    p = intrinsic_barycenter(g, rho, 0.1)
    _, dist = g.min_image(p, np.array([0.0, 0.5, 0.5]))
    assert dist < g.hmax / 5


def test_barycenter_of_translated_blob_translates():
    g = TorusGrid.cube(32, 1.0)
    c = np.array([0.3, 0.6, 0.2])
    p0 = intrinsic_barycenter(g, blob(g, c, 0.05), 0.1)
    shift = 5 * g.h
    p1 = intrinsic_barycenter(g, blob(g, g.wrap(c + shift), 0.05), 0.1)
    d, _ = g.min_image(p0, p1)
    assert np.allclose(d, shift, atol=1e-9)


def test_spread_density_is_not_concentrated():
    g = TorusGrid.cube(32, 1.0)
    rho = blob(g, (0.25, 0.5, 0.5), 0.05) + blob(g, (0.75, 0.5, 0.5), 0.05)
    with pytest.raises(NotConcentrated):
        intrinsic_barycenter_report(g, rho, 0.1, eta=0.9)
    assert not best_center(g, rho, 0.1).passed


def test_bad_densities():
    g = TorusGrid.cube(16, 1.0)
    with pytest.raises(ZeroDensity):
        concentration_ratio(g, np.zeros(g.shape), (0.5, 0.5, 0.5), 0.1)
    rho = np.ones(g.shape)
    rho[0, 0, 0] = -1.0
    with pytest.raises(NegativeDensity):
        best_center(g, rho, 0.1)


def test_smallest_mu_scales_with_blob():
    g = TorusGrid.cube(32, 1.0)
    rho = blob(g, (0.5, 0.5, 0.5), 0.04)
    mu = smallest_mu(g, rho, 0.01)
    assert mu is not None
    assert ball_masses(g, rho, mu * 0.1).max() / g.integrate(rho) > 0.9
    assert smallest_mu(g, np.ones(g.shape), 0.01) is None
