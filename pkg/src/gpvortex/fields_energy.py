"""Energy, momentum, Jacobian and their exact discrete gradients.

All functionals are the discrete ones built from :class:`TorusGrid`
differences and Riemann sums.  The Dirichlet term uses forward differences
(nearest-neighbour links); currents, the Jacobian and the transport term use
central differences; the gradients are obtained by differentiating
those sums exactly, so finite-difference checks agree to roundoff.
Gradients are taken with respect to the h-weighted real inner product
``grid.inner`` (complex values treated as points of R^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potentials import Potential
from .torus_grid import TorusGrid


class EpsOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class EnergyBreakdown:
    total: float
    gradient_part: float
    potential_part: float
    epsilon: float

    def as_dict(self) -> dict:
        return {"total": self.total, "gradient_part": self.gradient_part,
                "potential_part": self.potential_part, "epsilon": self.epsilon}


def _prefactor(eps: float) -> float:
    if not (0.0 < eps < 1.0):
        raise EpsOutOfRange(f"eps must lie in (0, 1), got {eps}")
    return 1.0 / (np.pi * abs(np.log(eps)))


def _X(X) -> np.ndarray:
    return X.X if hasattr(X, "X") else np.asarray(X)


def prejacobian(grid: TorusGrid, u: np.ndarray) -> np.ndarray:
    """j(u) = u1 grad u2 - u2 grad u1 = Im(conj(u) grad u)."""
    Du = grid.gradient(u)
    return np.imag(np.conj(u)[None] * Du)


def jacobian_vector(grid: TorusGrid, u: np.ndarray) -> np.ndarray:
    """Vector form of the Jacobian 2-form: curl(j(u)) / 2."""
    return 0.5 * grid.curl(prejacobian(grid, u))


def _grad_sq(grid: TorusGrid, u: np.ndarray) -> np.ndarray:
    # Forward differences: the central difference is blind to the staggered
    # (+-1 alternating) modes, which would then carry momentum for free.
    out = np.zeros(grid.shape)
    for a in range(3):
        d = grid.forward_diff(u, a)
        out += d.real ** 2 + d.imag ** 2
    return out


def energy_density(grid: TorusGrid, u: np.ndarray, eps: float, pot: Potential) -> np.ndarray:
    c = _prefactor(eps)
    return c * (0.5 * _grad_sq(grid, u) + pot.value(u) / eps ** 2)


def energy(grid: TorusGrid, u: np.ndarray, eps: float, pot: Potential) -> EnergyBreakdown:
    c = _prefactor(eps)
    g = c * grid.integrate(0.5 * _grad_sq(grid, u))
    w = c * grid.integrate(pot.value(u)) / eps ** 2
    return EnergyBreakdown(float(g + w), float(g), float(w), float(eps))


def momentum(grid: TorusGrid, u: np.ndarray, X) -> float:
    """(1/2pi) * integral of j(u) . X."""
    j = prejacobian(grid, u)
    return float(grid.integrate(np.sum(j * _X(X), axis=0)) / (2 * np.pi))


def momentum_via_jacobian(grid: TorusGrid, u: np.ndarray, field) -> float:
    """(1/pi) * integral of jacobian_vector(u) . A for X = curl A.

    Equal to :func:`momentum` up to roundoff because the discrete curl is
    self-adjoint on the periodic grid.
    """
    J = jacobian_vector(grid, u)
    return float(grid.integrate(np.sum(J * field.A, axis=0)) / np.pi)


def transport(grid: TorusGrid, u: np.ndarray, X) -> np.ndarray:
    """Skew-symmetric discretization of X . grad u: (X.Du + div(u X)) / 2.

    Coincides with X . grad u in the continuum when div X = 0; the discrete
    form is exactly the operator whose quadratic form is the momentum.
    """
    X = _X(X)
    Du = grid.gradient(u)
    adv = np.sum(X * Du, axis=0)
    return 0.5 * (adv + grid.divergence(u[None] * X))


def grad_energy(grid: TorusGrid, u: np.ndarray, eps: float, pot: Potential) -> np.ndarray:
    c = _prefactor(eps)
    return c * (-grid.laplacian_compact(u) + pot.grad(u) / eps ** 2)


def grad_momentum(grid: TorusGrid, u: np.ndarray, X) -> np.ndarray:
    return (-1j / np.pi) * transport(grid, u, X)


@dataclass(frozen=True)
class Residual:
    magnitude: np.ndarray
    l2_norm: float
    best_lambda: float
    best_l2_norm: float
    reference_norm: float

    @property
    def relative(self) -> float:
        """Residual at best_lambda relative to the Laplacian term."""
        return self.best_l2_norm / max(self.reference_norm, 1e-300)


def gp_residual(grid: TorusGrid, u: np.ndarray, lam: float, eps: float, X, pot: Potential) -> Residual:
    """R(lam) = lap u - grad W(u)/eps^2 - i lam |log eps| (X . grad u).

    ``lap`` is the compact Laplacian matching the Dirichlet term of
    :func:`energy`.

    With the transport term discretized skew-symmetrically,
    R(lam) = -pi |log eps| (grad_energy - lam grad_momentum), so the
    least-squares lam coincides with the projection multiplier at a
    discrete critical point.
    """
    _prefactor(eps)
    lap = grid.laplacian_compact(u)
    a = lap - pot.grad(u) / eps ** 2
    b = 1j * abs(np.log(eps)) * transport(grid, u, X)
    bb = grid.inner(b, b)
    best = grid.inner(b, a) / bb if bb > 0 else 0.0
    R = a - lam * b
    Rb = a - best * b
    return Residual(np.abs(R), float(np.sqrt(grid.inner(R, R))), float(best),
                    float(np.sqrt(grid.inner(Rb, Rb))), float(np.sqrt(grid.inner(lap, lap))))


@dataclass(frozen=True)
class GradientCheck:
    energy_rel_error: float
    momentum_rel_error: float


def gradient_check(grid: TorusGrid, u: np.ndarray, eps: float, X, pot: Potential, rng,
                   n_dirs: int = 4, step: float = 1e-5) -> GradientCheck:
    """Worst relative error between <grad, v> and central differences along random v."""
    gE = grad_energy(grid, u, eps, pot)
    gP = grad_momentum(grid, u, X)
    errs_e, errs_p = [], []
    for _ in range(n_dirs):
        v = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
        fd_e = (energy(grid, u + step * v, eps, pot).total
                - energy(grid, u - step * v, eps, pot).total) / (2 * step)
        # the momentum is quadratic, so its central difference is exact up to roundoff
        fd_p = (momentum(grid, u + step * v, X) - momentum(grid, u - step * v, X)) / (2 * step)
        an_e, an_p = grid.inner(gE, v), grid.inner(gP, v)
        errs_e.append(abs(fd_e - an_e) / max(abs(an_e), 1e-300))
        errs_p.append(abs(fd_p - an_p) / max(abs(an_p), 1e-300))
    return GradientCheck(float(max(errs_e)), float(max(errs_p)))
