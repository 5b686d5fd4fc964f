"""Energy concentration, intrinsic barycenters and the Sigma-valued barycenter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields_energy as fe
from .torus_grid import TorusGrid
from .vector_field import SigmaSet, nearest_sigma_point


class DiagnosticError(ValueError):
    pass


class ZeroDensity(DiagnosticError):
    pass


class NegativeDensity(DiagnosticError):
    pass


class NotConcentrated(DiagnosticError):
    pass


@dataclass(frozen=True)
class ConcentrationReport:
    center: np.ndarray
    radius: float
    ratio: float
    eta_threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {"center": [float(v) for v in self.center], "radius": self.radius,
                "ratio": self.ratio, "eta_threshold": self.eta_threshold, "passed": self.passed}


def _check_density(grid: TorusGrid, density: np.ndarray) -> float:
    density = np.asarray(density, dtype=float)
    if density.shape != grid.shape:
        raise DiagnosticError("density must live on the grid")
    scale = np.abs(density).max() if density.size else 0.0
    if density.min() < -1e-12 * max(scale, 1e-300):
        raise NegativeDensity(f"density has negative values (min {density.min():.3e})")
    total = float(grid.integrate(np.maximum(density, 0.0)))
    if not total > 0:
        raise ZeroDensity("density integrates to zero")
    return total


def concentration_ratio(grid: TorusGrid, density: np.ndarray, center, radius: float) -> float:
    total = _check_density(grid, density)
    inside = grid.ball_integral(np.maximum(density, 0.0), center, radius)
    return float(min(1.0, max(0.0, inside / total)))


def ball_masses(grid: TorusGrid, density: np.ndarray, radius: float) -> np.ndarray:
    """Mass of the closed ball of the given radius centred at every node (periodic convolution)."""
    kernel = grid.ball_mask(np.zeros(3), radius).astype(float)
    F = np.fft.rfftn(np.maximum(density, 0.0)) * np.conj(np.fft.rfftn(kernel))
    return np.fft.irfftn(F, s=grid.shape, axes=(0, 1, 2)) * grid.cell_volume


def best_center(grid: TorusGrid, density: np.ndarray, radius: float, eta: float = 0.9) -> ConcentrationReport:
    """Node maximizing the ball mass; ties go to the first node in array order."""
    _check_density(grid, density)
    masses = ball_masses(grid, density, radius)
    i = np.unravel_index(int(np.argmax(masses)), grid.shape)
    c = grid.node_point(i)
    ratio = concentration_ratio(grid, density, c, radius)
    return ConcentrationReport(c, float(radius), ratio, float(eta), bool(ratio >= eta))


def eta_centers(grid: TorusGrid, density: np.ndarray, radius: float, eta: float) -> np.ndarray:
    """All nodes whose radius-ball holds more than eta of the mass."""
    total = _check_density(grid, density)
    masses = ball_masses(grid, density, radius) / total
    return grid.coords().reshape(3, -1).T[(masses > eta).ravel()]


@dataclass(frozen=True)
class Barycenter:
    point: np.ndarray
    iterations: int
    start: np.ndarray
    max_center_distance: float
    guarantee_ok: bool


def intrinsic_barycenter_report(grid: TorusGrid, density: np.ndarray, r: float, eta: float = 0.9,
                                max_iter: int = 50) -> Barycenter:
    total = _check_density(grid, density)
    rho = np.maximum(density, 0.0)
    masses = ball_masses(grid, rho, r) / total
    k = int(np.argmax(masses))
    if not masses.ravel()[k] > eta:
        raise NotConcentrated(f"best ball of radius {r:.4g} holds {masses.ravel()[k]:.4f} <= eta = {eta}")
    p0 = grid.node_point(np.unravel_index(k, grid.shape))
    p = p0.copy()
    it = 0
    for it in range(1, max_iter + 1):
        d = grid.displacement_field(p)
        dist = np.sqrt(np.sum(d * d, axis=0))
        w = np.where(dist <= 2 * r, rho, 0.0)
        ws = w.sum()
        shift = np.array([np.sum(w * d[a]) for a in range(3)]) / ws
        p = grid.wrap(p + shift)
        if np.linalg.norm(shift) < grid.hmax / 10:
            break
    centers = grid.coords().reshape(3, -1).T[(masses > eta).ravel()]
    _, dc = grid.min_image(p[None, :], centers)
    far = float(dc.max())
    return Barycenter(p, it, p0, far, bool(far <= 2 * r))


def intrinsic_barycenter(grid: TorusGrid, density: np.ndarray, r: float, eta: float = 0.9) -> np.ndarray:
    """Weighted min-image mean of the density inside B(p, 2r), iterated from the best r-ball."""
    return intrinsic_barycenter_report(grid, density, r, eta).point


def beta(grid: TorusGrid, u: np.ndarray, eps: float, pot, sigma: SigmaSet, r: float,
         eta: float = 0.9) -> np.ndarray:
    """Nearest Sigma point to the intrinsic barycenter of the energy density of u."""
    dens = fe.energy_density(grid, u, eps, pot)
    return nearest_sigma_point(intrinsic_barycenter(grid, dens, r, eta), sigma)


def homotopy_threshold(grid: TorusGrid, sigma: SigmaSet) -> float:
    """rho* = min(r0, delta) / 2 with r0 = min(L)/4."""
    return 0.5 * min(grid.min_side / 4, sigma.delta)


def homotopy_gap(grid: TorusGrid, p, u: np.ndarray, eps: float, pot, sigma: SigmaSet, r: float,
                 eta: float = 0.9) -> float:
    b = beta(grid, u, eps, pot, sigma, r, eta)
    _, d = grid.min_image(np.asarray(p, dtype=float), b)
    return float(d)


def smallest_mu(grid: TorusGrid, density: np.ndarray, phi: float, eta: float = 0.9,
                mus=None) -> float | None:
    """Smallest mu in the scan for which some ball of radius mu*sqrt(phi) holds > eta of the mass."""
    if mus is None:
        mus = np.linspace(0.1, 4.0, 40)
    total = _check_density(grid, density)
    for mu in mus:
        R = mu * np.sqrt(phi)
        if R >= grid.min_side / 2:
            break
        if ball_masses(grid, density, R).max() / total > eta:
            return float(mu)
    return None
