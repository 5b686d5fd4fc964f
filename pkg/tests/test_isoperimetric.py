import numpy as np
import pytest

from gpvortex.isoperimetric import (DegenerateEdge, HypothesisViolated, LoopConfig, LoopError,
                                    VortexLoop, circle_loop, ellipse_loop, fit_power_law,
                                    flux_gradient, loop_flux, loop_mass, minimize_loop,
                                    random_series_rows, resample, restore_flux, series_check,
                                    series_suite, splitting_penalty, subadd_check, subadd_suite)
from gpvortex.torus_grid import TorusGrid
from gpvortex.vector_field import UniformField, two_bumps


def test_regular_polygon_mass_and_flux():
    n, R = 64, 0.3
    loop = circle_loop((0.1, 0.2, 0.3), (0, 0, 1), R, n)
    assert loop_mass(loop) == pytest.approx(2 * n * R * np.sin(np.pi / n), rel=1e-13)
    X = UniformField((0.0, 0.0, 1.0))
    # the midpoint rule is exact for the linear potential, giving the polygon area
    assert loop_flux(loop, X) == pytest.approx(0.5 * n * R * R * np.sin(2 * np.pi / n), rel=1e-13)
    assert loop_flux(loop.reversed(), X) == pytest.approx(-loop_flux(loop, X), rel=1e-13)


def test_flux_of_periodic_field_is_translation_consistent():
    g = TorusGrid.cube(32, 1.0)
    X = two_bumps(g, (0.25, 0.5, 0.5), (0.75, 0.5, 0.5), 0.1)
    p = X.sigma.component_points(0)[0]
    loop = circle_loop(p, X.sample_X(p[None, :])[0], 0.02, 64, g.L)
    f0 = loop_flux(loop, X)
    assert f0 > 0
    assert loop_flux(loop.translated((1.0, 0.0, -1.0)), X) == pytest.approx(f0, rel=1e-12)


def test_flux_gradient_matches_finite_differences():
    g = TorusGrid.cube(32, 1.0)
    X = two_bumps(g, (0.25, 0.5, 0.5), (0.75, 0.5, 0.5), 0.1)
    loop = ellipse_loop((0.27, 0.49, 0.52), (0.1, 0.2, 1.0), 0.08, 0.05, 32, g.L)
    G = flux_gradient(loop, X)
    rng = np.random.default_rng(0)
    v = rng.normal(size=loop.vertices.shape)
    e = 1e-6
    fd = (loop_flux(loop.with_vertices(loop.vertices + e * v), X)
          - loop_flux(loop.with_vertices(loop.vertices - e * v), X)) / (2 * e)
    assert np.sum(G * v) == pytest.approx(fd, rel=1e-6)


def test_degenerate_loops():
    with pytest.raises(LoopError):
        VortexLoop(np.zeros((4, 3)))
    v = circle_loop((0, 0, 0), (0, 0, 1), 0.1, 16).vertices
    v[3] = v[2]
    with pytest.raises(DegenerateEdge):
        loop_mass(VortexLoop(v))


def test_resample_and_restore_flux():
    X = UniformField((0.0, 0.0, 1.0))
    loop = ellipse_loop((0, 0, 0), (0, 0, 1), 0.3, 0.1, 48)
    r = resample(loop, 48)
    edges = np.linalg.norm(r.edges(), axis=1)
    assert edges.max() / edges.min() < 1.05
    target = 0.05
    fixed = restore_flux(loop, target, X)
    assert loop_flux(fixed, X) == pytest.approx(target, rel=1e-11)


def test_ellipse_relaxes_to_circle():
    X = UniformField((0.0, 0.0, 1.0))
    phi = 0.01
    n = 64
    res = minimize_loop(ellipse_loop((0, 0, 0), (0.2, 0.1, 1.0), 0.09, 0.035, n), phi, X)
    assert res.converged
    assert res.flux == pytest.approx(phi, rel=1e-10)
    # optimal n-gon: area phi, perimeter 2 n R sin(pi/n) with phi = n R^2 sin(2 pi/n)/2
    R = np.sqrt(2 * phi / (n * np.sin(2 * np.pi / n)))
    assert res.mass == pytest.approx(2 * n * R * np.sin(np.pi / n), rel=1e-6)
    c = res.loop.vertices - res.loop.vertices.mean(axis=0)
    radii = np.linalg.norm(c, axis=1)
    assert radii.std() / radii.mean() < 1e-3


def test_splitting_quarter_penalty_for_constant_field():
    X = UniformField()
    pen = splitting_penalty(0.01, 0.25, X, n_vertices=48)
    assert pen == pytest.approx(np.sqrt(0.25) + np.sqrt(0.75) - 1, rel=0.01)
    with pytest.raises(LoopError):
        splitting_penalty(0.01, 1.0, X)


def test_power_law_fit_recovers_square_root():
    phis = np.array([1e-2, 5e-3, 2.5e-3, 1e-3])
    e, C = fit_power_law(phis, 3.5 * np.sqrt(phis))
    assert e == pytest.approx(0.5, abs=1e-12)
    assert C == pytest.approx(3.5, rel=1e-12)


def test_subadd_worked_example():
    ok, slack = subadd_check(0.5, 0.5, 0.5, 0.5)
    assert ok
    assert slack == pytest.approx(np.sqrt(2) - 1.0625, abs=1e-15)
    assert slack == pytest.approx(0.3517, abs=1e-4)


def test_subadd_hypotheses():
    with pytest.raises(HypothesisViolated):
        subadd_check(0.5, 0.5, 1.0, 0.5)
    with pytest.raises(HypothesisViolated):
        subadd_check(0.1, 0.9, 0.5, 0.2)
    with pytest.raises(HypothesisViolated):
        subadd_check(0.0, 1.0, 0.5, 0.1)


def test_series_uniform_splits():
    for k in (2, 3, 7):
        res = series_check([np.full(k, 1.0 / k)] * 3, 0.5, 0.5, 1.0, 1.5)
        assert res.holds and res.witness is None
        rhs = 1 + 0.25 * 1.5 ** -1.5 * 0.25
        assert res.slack_min == pytest.approx(np.sqrt(k) - rhs, rel=1e-12)


def test_series_single_entry_violates_hypothesis():
    with pytest.raises(HypothesisViolated):
        series_check([[1.0]], 0.5, 0.5, 1.0, 1.5)


def test_series_reports_witness_below_unit_mass():
    # a single entry c_- < 1 satisfies the hypotheses yet misses the bound
    res = series_check([[0.5, 0.5], [0.3]], 0.5, 0.1, 0.3, 1.2)
    assert not res.holds and res.witness == 1


def test_random_rows_are_admissible():
    rng = np.random.default_rng(3)
    for r in random_series_rows(rng, 200, 0.3, 1.0, 2.0):
        assert np.all(r >= 0) and r.max() <= 0.7 + 1e-12
        assert 1.0 - 1e-12 <= r.sum() <= 2.0 + 1e-12


def test_small_randomized_suites():
    assert subadd_suite(np.random.default_rng(0), 2000).passed
    assert series_suite(np.random.default_rng(1), 500).passed
