"""Vortex-ring trial fields ("photographs") attached to points of the torus.

For a point p and a momentum target phi the ring sits on the boundary of
the flat disk through p orthogonal to X(p) whose X-flux equals phi.  The
phase is a vortex/antivortex dipole in the meridian half-plane, corrected
by a harmonic term so that the field is identically 1 on the sphere of
radius 2r, and the modulus is cut off linearly inside a tube of radius eps
around the vortex circle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import fields_energy as fe
from .torus_grid import TorusGrid


class PhotographyError(ValueError):
    pass


class RadiusTooLarge(PhotographyError):
    pass


class FluxTooLarge(PhotographyError):
    pass


class Singular(PhotographyError):
    pass


class SupportOverflow(PhotographyError):
    pass


class DegenerateCorrector(PhotographyError):
    pass


GAMMA_2 = 2.0 * np.sqrt(np.pi)


# -- disks and fluxes -------------------------------------------------------

def orthonormal_frame(e1) -> np.ndarray:
    """Rows (e1, e2, e3): a right-handed frame completing the unit vector e1."""
    e1 = np.asarray(e1, dtype=float)
    e1 = e1 / np.linalg.norm(e1)
    helper = np.eye(3)[int(np.argmin(np.abs(e1)))]
    e2 = np.cross(e1, helper)
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    return np.array([e1, e2, e3])


def field_frame(p, X) -> np.ndarray:
    Xp = np.asarray(X.sample_X(np.asarray(p, dtype=float)[None, :]))[0]
    nrm = np.linalg.norm(Xp)
    if not nrm > 1e-14:
        raise PhotographyError("X vanishes at p; no disk normal")
    return orthonormal_frame(Xp / nrm)


def _max_radius(X) -> float:
    grid = getattr(X, "grid", None)
    return np.inf if grid is None else grid.min_side / 4


def disk_flux(p, r: float, X, n_radial: int = 64, n_angular: int = 128, frame=None) -> float:
    """Flux of X through the flat disk of radius r centred at p, normal X(p)/|X(p)|.

    Gauss-Legendre in the radius (weight rho) times the trapezoid rule in the
    angle; X is sampled by the field's own interpolant (periodic cubic
    splines for grid fields), so the rule converges spectrally.
    """
    if not r < _max_radius(X):
        raise RadiusTooLarge(f"radius {r} must be < min(L)/4 = {_max_radius(X)}")
    if r <= 0:
        return 0.0
    F = field_frame(p, X) if frame is None else np.asarray(frame)
    s, ws = np.polynomial.legendre.leggauss(n_radial)
    rr = 0.5 * (s + 1.0) * r
    wr = 0.5 * ws * r
    t = 2 * np.pi * np.arange(n_angular) / n_angular
    dirs = np.cos(t)[:, None] * F[1] + np.sin(t)[:, None] * F[2]
    pts = np.asarray(p, dtype=float) + rr[:, None, None] * dirs[None, :, :]
    normal = np.asarray(X.sample_X(pts.reshape(-1, 3))) @ F[0]
    normal = normal.reshape(n_radial, n_angular)
    return float(np.sum(normal * (rr * wr)[:, None]) * 2 * np.pi / n_angular)


def disk_normal_range(p, r: float, X, n_radial: int = 64, n_angular: int = 128) -> tuple[float, float]:
    """Min and max of X . nu over the quadrature nodes of the disk."""
    F = field_frame(p, X)
    s, _ = np.polynomial.legendre.leggauss(n_radial)
    rr = 0.5 * (s + 1.0) * r
    t = 2 * np.pi * np.arange(n_angular) / n_angular
    dirs = np.cos(t)[:, None] * F[1] + np.sin(t)[:, None] * F[2]
    pts = np.asarray(p, dtype=float) + rr[:, None, None] * dirs[None, :, :]
    v = np.asarray(X.sample_X(pts.reshape(-1, 3))) @ F[0]
    return float(v.min()), float(v.max())


def _radius_at(p, phi, X, r_hi, nr, nt, frame):
    flux = lambda r: disk_flux(p, r, X, nr, nt, frame) - phi  # noqa: E731
    r = brentq(flux, 0.0, r_hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    return r, abs(flux(r))


def disk_radius(p, phi: float, X, n_radial: int = 64, n_angular: int = 128,
                max_doublings: int = 2) -> float:
    """Smallest r with disk_flux(p, r) = phi.

    The flux is scanned outward on a coarse radius grid to bracket the first
    crossing, which is then refined by bracketing root finding.  The angular
    and radial resolution doubles until r changes by at most 1e-8.
    """
    if not phi > 0:
        raise FluxTooLarge("phi must be positive")
    F = field_frame(p, X)
    r_max = _max_radius(X)
    if np.isfinite(r_max):
        r_top = r_max * (1 - 1e-9)
    else:
        r_top = 2.0 * np.sqrt(phi / np.pi) + 1.0
    grid_r = np.linspace(0.0, r_top, 33)[1:]
    vals = np.array([disk_flux(p, r, X, n_radial, n_angular, F) for r in grid_r])
    above = np.nonzero(vals >= phi)[0]
    if len(above) == 0:
        raise FluxTooLarge(f"phi {phi} exceeds the largest disk flux {vals.max():.6g}")
    r_hi = grid_r[above[0]]
    r, _ = _radius_at(p, phi, X, r_hi, n_radial, n_angular, F)
    for _ in range(max_doublings):
        n_radial, n_angular = 2 * n_radial, 2 * n_angular
        r_new, _ = _radius_at(p, phi, X, min(r_top, 1.5 * r_hi), n_radial, n_angular, F)
        done = abs(r_new - r) <= 1e-8
        r = r_new
        if done:
            break
    return float(r)


def radius_bounds(p, phi: float, X, r: float) -> tuple[float, float]:
    """Sandwich sqrt(phi / (pi max)) <= r <= sqrt(phi / (pi min)) from X . nu on the disk."""
    lo, hi = disk_normal_range(p, r, X)
    if lo <= 0:
        return float(np.sqrt(phi / (np.pi * hi))), float("inf")
    return float(np.sqrt(phi / (np.pi * hi))), float(np.sqrt(phi / (np.pi * lo)))


def radius_constant(p, phi: float, X, r: float) -> float:
    """Smallest C with sqrt(phi)/C <= r <= C sqrt(phi)."""
    q = r / np.sqrt(phi)
    return float(max(q, 1.0 / q))


# -- dipole map -------------------------------------------------------------

def _unit(z):
    a = np.abs(z)
    return z / a


def dipole_core(z, R: float):
    """Vortex at iR times antivortex at -iR: even under z -> conj(z)."""
    z = np.asarray(z, dtype=complex)
    a = z - 1j * R
    b = np.conj(z + 1j * R)
    if np.any(np.abs(a) == 0) or np.any(np.abs(b) == 0):
        raise Singular("dipole map is singular at z = +-iR")
    return _unit(a) * _unit(b)


def dipole_phase(R: float, modes: int = 64, support: float | None = None) -> np.ndarray:
    """Fourier coefficients (FFT order) of minus the core phase on |zeta| = support.

    ``support`` defaults to 2R.  The harmonic extension of these boundary
    values makes the full map equal to 1 on the support circle.
    """
    if modes < 32:
        raise PhotographyError("need at least 32 modes")
    S = 2.0 * R if support is None else float(support)
    t = 2 * np.pi * np.arange(modes) / modes
    zeta = S * np.exp(1j * t)
    beta = -np.angle(dipole_core(zeta, R))
    return np.fft.fft(beta) / modes


def harmonic_theta(z, theta: np.ndarray, support: float) -> np.ndarray:
    """theta(z) = sum_k c_k (|z|/S)^|k| e^{ik arg z}, evaluated by Horner on z/S."""
    z = np.asarray(z, dtype=complex)
    M = len(theta)
    w = z / support
    acc = np.zeros_like(w)
    half = M // 2
    for k in range(half, 0, -1):
        ck = theta[k] if k == half and M % 2 == 0 else 2.0 * theta[k]
        acc = (acc + ck) * w
    return np.real(acc) + np.real(theta[0])


def dipole_map(z, R: float, theta: np.ndarray, support: float | None = None):
    S = 2.0 * R if support is None else float(support)
    return dipole_core(z, R) * np.exp(1j * harmonic_theta(z, theta, S))


def winding_number(f, center: complex, radius: float, samples: int = 1024) -> float:
    t = 2 * np.pi * np.arange(samples + 1) / samples
    vals = f(center + radius * np.exp(1j * t))
    dphase = np.angle(vals[1:] / vals[:-1])
    return float(np.sum(dphase) / (2 * np.pi))


# -- ansatz -----------------------------------------------------------------

@dataclass(frozen=True)
class AnsatzSpec:
    p: tuple[float, float, float]
    phi: float
    eps: float
    r: float
    frame: np.ndarray
    theta_modes: np.ndarray
    ring_radius: float
    correction: float = 0.0

    @property
    def support(self) -> float:
        return 2.0 * self.r


def make_spec(p, phi: float, eps: float, X, modes: int = 64, r: float | None = None,
              ring_radius: float | None = None) -> AnsatzSpec:
    p = tuple(float(v) for v in p)
    if r is None:
        r = disk_radius(p, phi, X)
    R = r if ring_radius is None else float(ring_radius)
    if not (0 < eps < r / 2):
        raise PhotographyError(f"need 0 < eps < r/2 = {r / 2}, got {eps}")
    if not (0 < R and R + eps < 2 * r):
        raise PhotographyError("ring radius must leave the tube inside the support ball")
    return AnsatzSpec(p, float(phi), float(eps), float(r), field_frame(p, X),
                      dipole_phase(R, modes, 2 * r), R)


def with_ring_radius(spec: AnsatzSpec, R: float) -> AnsatzSpec:
    return replace(spec, ring_radius=float(R),
                   theta_modes=dipole_phase(R, len(spec.theta_modes), spec.support))


def meridian_coordinate(grid: TorusGrid, spec: AnsatzSpec) -> np.ndarray:
    """z = x + i rho with x along e1 and rho the distance to the axis through p."""
    d = grid.displacement_field(spec.p)
    x = np.tensordot(spec.frame[0], d, axes=1)
    rho = np.sqrt(np.maximum(np.sum(d * d, axis=0) - x * x, 0.0))
    return x + 1j * rho


def profile(z, spec: AnsatzSpec):
    """The ansatz as a function of the meridian coordinate (|z| < 2r)."""
    z = np.asarray(z, dtype=complex)
    R, eps = spec.ring_radius, spec.eps
    out = np.ones(z.shape, dtype=complex)
    a = np.abs(z - 1j * R)
    inside = np.abs(z) < spec.support
    out[inside & (a == 0)] = 0.0
    live = inside & (a > 0)
    om = dipole_map(z[live], R, spec.theta_modes, spec.support)
    out[live] = np.where(a[live] < eps, a[live] / eps, 1.0) * om
    return out


def ansatz_raw(spec: AnsatzSpec, grid: TorusGrid, X=None) -> np.ndarray:
    if not (0 < spec.eps < spec.r / 2):
        raise PhotographyError("eps must lie in (0, r/2)")
    if not 2 * spec.r + spec.eps < grid.min_side / 2 - 2 * grid.hmax:
        raise SupportOverflow(f"support 2r + eps = {2 * spec.r + spec.eps:.4g} does not fit "
                              f"in min(L)/2 - 2h = {grid.min_side / 2 - 2 * grid.hmax:.4g}")
    z = meridian_coordinate(grid, spec)
    u = np.ones(grid.shape, dtype=complex)
    inside = np.abs(z) < spec.support
    u[inside] = profile(z[inside], spec)
    return u


def flux_corrector(p, eps0: float, grid: TorusGrid, X) -> np.ndarray:
    """Mean-zero tau with lap tau = -div((eps0 - |x - p|)_+ X)."""
    if not eps0 < grid.min_side / 4:
        raise PhotographyError("corrector bump radius must be < min(L)/4")
    bump = np.maximum(eps0 - grid.distance_field(p), 0.0)
    rhs = -grid.divergence(bump[None] * X.X)
    return grid.poisson_solve(rhs)


def corrector_pairing(grid: TorusGrid, u: np.ndarray, tau: np.ndarray, X, exact: bool = True) -> float:
    """d/ds of momentum(e^{i s tau} u) at s = 0.

    ``exact=True`` differentiates the discrete momentum; otherwise the
    continuum expression (1/2pi) int |u|^2 grad tau . X is evaluated.
    """
    if exact:
        Dtu = grid.gradient(tau * u)
        Du = grid.gradient(u)
        dj = np.real(np.conj(u)[None] * Dtu) - tau[None] * np.real(np.conj(u)[None] * Du)
        return float(grid.integrate(np.sum(dj * X.X, axis=0)) / (2 * np.pi))
    Dt = grid.gradient(tau)
    return float(grid.integrate(np.abs(u) ** 2 * np.sum(Dt * X.X, axis=0)) / (2 * np.pi))


def solve_phase_amplitude(grid: TorusGrid, u: np.ndarray, tau: np.ndarray, X, phi: float,
                          tol: float = 1e-12, max_iter: int = 30) -> float:
    """s with momentum(e^{i s tau} u) = phi.

    First step is the affine formula (phi - momentum(u)) / pairing; the
    remaining discrete nonlinearity is removed by Newton steps with the
    exact discrete derivative.
    """
    m0 = fe.momentum(grid, u, X)
    if abs(m0 - phi) <= tol:
        return 0.0
    s = 0.0
    for _ in range(max_iter):
        us = np.exp(1j * s * tau) * u
        m = fe.momentum(grid, us, X)
        if abs(m - phi) <= tol:
            return s
        d = corrector_pairing(grid, us, tau, X)
        if abs(d) < 1e-12:
            raise DegenerateCorrector(f"phase pairing {d:.3e} is below 1e-12")
        s += (phi - m) / d
    raise DegenerateCorrector("phase amplitude solve did not converge")


def calibrate_ring_radius(spec: AnsatzSpec, grid: TorusGrid, X, tol: float = 1e-13) -> float:
    """Ring radius R for which the uncorrected field carries momentum phi.

    On a grid whose spacing is comparable to eps the core is under-resolved
    and the discrete momentum of the ring at R = r falls short of phi.
    Varying R inside the fixed support ball restores the target.
    """
    def gap(R):
        return fe.momentum(grid, ansatz_raw(with_ring_radius(spec, R), grid, X), X) - spec.phi

    lo = spec.eps * 1.01
    hi = 2 * spec.r - spec.eps * 1.01
    g0 = gap(spec.r)
    if g0 == 0:
        return spec.r
    # the momentum grows with the ring radius; bracket outward from r
    if g0 < 0:
        a, b = spec.r, spec.r
        while gap(b) < 0:
            a, b = b, min(hi, b + 0.1 * spec.r)
            if b >= hi and gap(b) < 0:
                raise DegenerateCorrector("no ring radius inside the support reaches phi")
    else:
        a, b = spec.r, spec.r
        while gap(a) > 0:
            b, a = a, max(lo, a - 0.1 * spec.r)
            if a <= lo and gap(a) > 0:
                raise DegenerateCorrector("no ring radius inside the support matches phi")
    return float(brentq(gap, a, b, xtol=tol * spec.r, rtol=1e-15, maxiter=200))


@dataclass(frozen=True)
class AnsatzResult:
    u: np.ndarray
    spec: AnsatzSpec
    c: float
    raw_momentum: float
    momentum: float


def ansatz(spec: AnsatzSpec, grid: TorusGrid, X, calibrate: bool = True,
           corrector_radius: float | None = None) -> AnsatzResult:
    """Photograph with momentum exactly phi.

    The ring radius is first tuned so the discrete momentum is phi up to the
    root-finder tolerance, then a phase factor e^{i c tau_p} with tau_p from
    :func:`flux_corrector` removes the remainder.
    """
    if calibrate:
        spec = with_ring_radius(spec, calibrate_ring_radius(spec, grid, X))
    f = ansatz_raw(spec, grid, X)
    m0 = fe.momentum(grid, f, X)
    if abs(m0 - spec.phi) <= 1e-14:
        return AnsatzResult(f, replace(spec, correction=0.0), 0.0, m0, m0)
    eps0 = spec.r if corrector_radius is None else corrector_radius
    tau = flux_corrector(spec.p, eps0, grid, X)
    pair = corrector_pairing(grid, f, tau, X)
    if abs(pair) < 1e-12:
        raise DegenerateCorrector(f"phase pairing {pair:.3e} is below 1e-12")
    c = solve_phase_amplitude(grid, f, tau, X, spec.phi)
    u = np.exp(1j * c * tau) * f
    return AnsatzResult(u, replace(spec, correction=c), float(c), m0, fe.momentum(grid, u, X))


# -- sublevels and expansions -------------------------------------------------

@dataclass(frozen=True)
class SublevelCurve:
    alpha: float
    gamma: float = GAMMA_2

    def __post_init__(self):
        if not self.alpha > 0:
            raise PhotographyError("alpha must be positive")

    def __call__(self, phi):
        return sublevel_c(phi, self.alpha)


def sublevel_c(phi, alpha: float):
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0):
        raise PhotographyError("phi must be positive")
    out = GAMMA_2 * np.sqrt(phi) + alpha * phi
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ExpansionRow:
    phi: float
    r: float
    v_p: float
    boundary_length: float


@dataclass(frozen=True)
class ExpansionTable:
    rows: list
    upsilon: float
    fit_residual: float


def fit_upsilon(phis, lengths) -> tuple[float, float]:
    phis = np.asarray(phis, dtype=float)
    y = np.asarray(lengths, dtype=float) - GAMMA_2 * np.sqrt(phis)
    ups = float(np.dot(phis, y) / np.dot(phis, phis))
    return ups, float(np.sqrt(np.mean((y - ups * phis) ** 2)))


def expansion_table(p, phi_list, X) -> ExpansionTable:
    phis = [float(v) for v in phi_list]
    if any(b >= a for a, b in zip(phis, phis[1:])):
        raise PhotographyError("phi_list must be strictly decreasing")
    rows = []
    for phi in phis:
        r = disk_radius(p, phi, X)
        rows.append(ExpansionRow(phi, r, np.pi * r * r, 2 * np.pi * r))
    ups, res = fit_upsilon([rw.phi for rw in rows], [rw.boundary_length for rw in rows])
    return ExpansionTable(rows, ups, res)


# -- continuum reference -----------------------------------------------------

def profile_energy(spec: AnsatzSpec, cells_per_r: int = 800, potential=None) -> float:
    """Continuum energy of the axisymmetric profile by quadrature in the meridian half-plane.

    Uses the constant field approximation of a flat torus (the profile does
    not depend on X), cell-centred differences and the 2 pi rho volume
    factor.  Serves as the grid-independent reference for the ansatz energy.
    """
    from .potentials import quartic_potential

    pot = quartic_potential() if potential is None else potential
    S = spec.support
    hx = spec.r / cells_per_r
    nx = int(np.ceil(S / hx))
    x_nodes = np.arange(-nx, nx + 1) * hx
    rho_nodes = np.arange(0, nx + 1) * hx
    grad_part = 0.0
    pot_part = 0.0
    chunk = max(1, 2_000_000 // len(rho_nodes))
    for i0 in range(0, len(x_nodes) - 1, chunk):
        xs = x_nodes[i0:i0 + chunk + 1]
        Z = xs[:, None] + 1j * rho_nodes[None, :]
        U = np.where(np.abs(Z) < S, profile(Z, spec), 1.0)
        ux = (U[1:, :] - U[:-1, :]) / hx
        ux = 0.5 * (ux[:, 1:] + ux[:, :-1])
        ur = (U[:, 1:] - U[:, :-1]) / hx
        ur = 0.5 * (ur[1:, :] + ur[:-1, :])
        Uc = 0.25 * (U[1:, 1:] + U[:-1, :-1] + U[1:, :-1] + U[:-1, 1:])
        rc = 0.5 * (rho_nodes[1:] + rho_nodes[:-1])[None, :]
        grad_part += np.sum(0.5 * (np.abs(ux) ** 2 + np.abs(ur) ** 2) * 2 * np.pi * rc) * hx * hx
        pot_part += np.sum(pot.value(Uc) / spec.eps ** 2 * 2 * np.pi * rc) * hx * hx
    return float((grad_part + pot_part) / (np.pi * abs(np.log(spec.eps))))
