"""Momentum-constrained energy minimization by projected gradient descent.

Each iteration moves along the component of -grad E orthogonal to
grad Phi, with a Barzilai-Borwein trial step refined by Armijo
backtracking, and then restores the constraint Phi(u) = phi exactly.
Everything is deterministic: no random numbers and fixed reduction order.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import fields_energy as fe
from .potentials import Potential, validate_assumptions
from .torus_grid import TorusGrid


class SolverError(RuntimeError):
    pass


class DegenerateConstraint(SolverError):
    pass


class DegeneratePairing(SolverError):
    pass


class LineSearchStalled(SolverError):
    pass


class MaxIters(SolverError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    eps: float
    phi: float
    max_iters: int = 5000
    tol_res: float = 1e-5
    c1: float = 1e-4
    backtrack: float = 0.5
    step0: float = 1.0
    restore_every: int = 1
    restore: str = "gradient"
    history_every: int = 10
    raise_on_max_iters: bool = False

    def __post_init__(self):
        if not self.tol_res > 0:
            raise ValueError("tol_res must be positive")
        if not (0 < self.eps < 1):
            raise ValueError("eps must lie in (0, 1)")
        if not self.phi >= 0:
            raise ValueError("phi must be nonnegative")
        if self.restore not in ("gradient", "phase"):
            raise ValueError("restore must be 'gradient' or 'phase'")
        if self.max_iters < 0 or self.restore_every < 1:
            raise ValueError("bad iteration counts")


@dataclass
class SolverReport:
    iterations: int
    energy_history: list
    final_energy: float
    lambda_tilde: float
    best_lambda: float
    residual_rel: float
    projected_gradient_rel: float
    constraint_drift_max: float
    converged: bool
    final_momentum: float = 0.0
    restorations: int = 0
    refused: bool = False
    wall_time: float = field(default=0.0, compare=False)

    def as_dict(self, include_time: bool = False) -> dict:
        d = asdict(self)
        if not include_time:
            d.pop("wall_time")
        return d


def project_direction(grid: TorusGrid, u: np.ndarray, eps: float, X, pot: Potential,
                      gE: np.ndarray | None = None, gP: np.ndarray | None = None):
    """Steepest descent direction tangent to the momentum level set.

    Returns (d, lambda_tilde, grad E, grad Phi) with
    lambda_tilde = <gE, gP>/<gP, gP> and d = -(gE - lambda_tilde gP).
    """
    if gE is None:
        gE = fe.grad_energy(grid, u, eps, pot)
    if gP is None:
        gP = fe.grad_momentum(grid, u, X)
    pp = grid.inner(gP, gP)
    if not np.sqrt(pp) > 1e-14:
        raise DegenerateConstraint("grad Phi vanishes; no tangent projection")
    lam = grid.inner(gE, gP) / pp
    d = -(gE - lam * gP)
    # one re-orthogonalization pass keeps <d, gP> at roundoff level
    d = d - (grid.inner(d, gP) / pp) * gP
    return d, float(lam), gE, gP


def restore_constraint(grid: TorusGrid, u: np.ndarray, tau0: np.ndarray, phi: float, X,
                       tol: float = 1e-12) -> np.ndarray:
    """Pure phase change u -> e^{i s tau0} u with momentum phi.

    The first Newton step is the affine formula
    s = (phi - Phi(u)) / (d/ds Phi(e^{i s tau0} u) at 0); later steps
    absorb the discrete nonlinearity.
    """
    from .photography import DegenerateCorrector, solve_phase_amplitude

    try:
        s = solve_phase_amplitude(grid, u, tau0, X, phi, tol=tol)
    except DegenerateCorrector as exc:
        raise DegeneratePairing(str(exc)) from exc
    return np.exp(1j * s * tau0) * u if s != 0.0 else u


def restore_along_gradient(grid: TorusGrid, u: np.ndarray, phi: float, X,
                           gP: np.ndarray | None = None) -> np.ndarray:
    """u + sigma grad Phi(u) with sigma the root of the exact quadratic.

    Phi is a quadratic form, so Phi(u + sigma g) = Phi(u) + sigma <g, g> +
    sigma^2 Phi(g) holds exactly; the root of smallest modulus is taken.
    """
    if gP is None:
        gP = fe.grad_momentum(grid, u, X)
    m = fe.momentum(grid, u, X)
    b = grid.inner(gP, gP)
    if not b > 0:
        raise DegeneratePairing("grad Phi vanishes")
    a = fe.momentum(grid, gP, X)
    c = m - phi
    if c == 0:
        return u
    if abs(a) * abs(c) < 1e-8 * b * b:
        sig = -c / b
        sig = sig - a * sig * sig / b
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            raise DegeneratePairing("momentum target not reachable along grad Phi")
        sig = (-2 * c) / (b + np.sqrt(disc))
    return u + sig * gP


def _restore(grid, u, cfg, X, tau0):
    if cfg.restore == "phase":
        return restore_constraint(grid, u, tau0, cfg.phi, X)
    v = restore_along_gradient(grid, u, cfg.phi, X)
    # one more pass removes the roundoff of the first
    if abs(fe.momentum(grid, v, X) - cfg.phi) > 1e-13:
        v = restore_along_gradient(grid, v, cfg.phi, X)
    return v


_VALIDATED: dict = {}


def potential_flags(pot: Potential) -> list:
    """Flags of the sampled assumption checks, cached per potential."""
    key = (pot.coeffs, pot.growth_p, pot.C_sc1, pot.C_sc2, pot.alpha_c, pot.R_c)
    if key not in _VALIDATED:
        _VALIDATED[key] = list(validate_assumptions(pot).flags)
    return _VALIDATED[key]


def minimize(grid: TorusGrid, u0: np.ndarray, cfg: SolverConfig, X, pot: Potential,
             tau0: np.ndarray | None = None, callback=None, allow_flagged: bool = False):
    """Minimize E_eps on {Phi = phi} starting from u0.

    Returns (u, SolverReport).  ``tau0`` is the phase corrector used when
    ``cfg.restore == 'phase'``.  A potential whose assumption checks raise
    flags is refused with a warning (u0 is returned unchanged and the report
    has ``refused = True``) unless ``allow_flagged`` is set.
    """
    t_start = time.perf_counter()
    u = np.array(u0, dtype=complex, copy=True)
    flags = potential_flags(pot)
    if flags and not allow_flagged:
        warnings.warn(f"potential {pot.name!r} fails assumption checks {flags}; not minimizing",
                      stacklevel=2)
        E = fe.energy(grid, u, cfg.eps, pot).total
        mom = fe.momentum(grid, u, X) if cfg.phi > 0 else 0.0
        return u, SolverReport(0, [float(E)], float(E), 0.0, 0.0, float("nan"), float("nan"),
                               0.0, False, float(mom), 0, True, time.perf_counter() - t_start)
    constrained = cfg.phi > 0
    if cfg.restore == "phase" and constrained and tau0 is None:
        raise ValueError("phase restoration needs tau0")
    drift_max = 0.0
    restorations = 0
    if constrained:
        drift = abs(fe.momentum(grid, u, X) - cfg.phi)
        if drift > 1e-6:
            u = _restore(grid, u, cfg, X, tau0)
            restorations += 1

    E = fe.energy(grid, u, cfg.eps, pot).total
    history = [E]
    gE = fe.grad_energy(grid, u, cfg.eps, pot)
    lam = 0.0
    if constrained:
        d, lam, gE, gP = project_direction(grid, u, cfg.eps, X, pot, gE=gE)
    else:
        d = -gE
    converged = False
    step = cfg.step0
    prev = None
    it = 0
    rel = np.inf
    # without a constraint d = -grad E, so progress is measured against the start
    gn0 = np.sqrt(grid.inner(gE, gE))
    for it in range(cfg.max_iters + 1):
        dn = np.sqrt(grid.inner(d, d))
        gn = np.sqrt(grid.inner(gE, gE)) if constrained else gn0
        rel = dn / max(gn, 1e-300)
        if dn <= 1e-300 or rel <= cfg.tol_res:
            converged = True
            break
        if it == cfg.max_iters:
            break
        if prev is not None:
            du, dd = u - prev[0], d - prev[1]
            # both directions are negative gradients, so the curvature pairing has sign -
            denom = -grid.inner(du, dd)
            if denom > 0:
                step = grid.inner(du, du) / denom
        dd2 = dn * dn
        t = step
        while True:
            trial = u + t * d
            if constrained and (it + 1) % cfg.restore_every == 0:
                trial = _restore(grid, trial, cfg, X, tau0)
            Et = fe.energy(grid, trial, cfg.eps, pot).total
            if Et <= E - cfg.c1 * t * dd2:
                break
            t *= cfg.backtrack
            if t < 1e-14:
                raise LineSearchStalled(f"step fell below 1e-14 at iteration {it}")
        if constrained and (it + 1) % cfg.restore_every == 0:
            restorations += 1
        prev = (u, d)
        u, E = trial, Et
        if constrained:
            drift_max = max(drift_max, abs(fe.momentum(grid, u, X) - cfg.phi))
        gE = fe.grad_energy(grid, u, cfg.eps, pot)
        if constrained:
            d, lam, gE, gP = project_direction(grid, u, cfg.eps, X, pot, gE=gE)
        else:
            d = -gE
        if (it + 1) % cfg.history_every == 0:
            history.append(E)
        if callback is not None:
            callback(it, u, E, rel)
    if history[-1] != E:
        history.append(E)
    if cfg.raise_on_max_iters and not converged:
        raise MaxIters(f"no convergence in {cfg.max_iters} iterations (rel {rel:.3e})")
    if constrained:
        res = fe.gp_residual(grid, u, lam, cfg.eps, X, pot)
        best, res_rel = res.best_lambda, res.relative
        mom = fe.momentum(grid, u, X)
    else:
        lap = grid.laplacian_compact(u)
        R = lap - pot.grad(u) / cfg.eps ** 2
        best = 0.0
        res_rel = float(np.sqrt(grid.inner(R, R)) / max(np.sqrt(grid.inner(lap, lap)), 1e-300))
        if not np.isfinite(res_rel) or np.sqrt(grid.inner(lap, lap)) == 0:
            res_rel = float(np.sqrt(grid.inner(R, R)))
        mom = 0.0
    report = SolverReport(
        iterations=it, energy_history=[float(v) for v in history], final_energy=float(E),
        lambda_tilde=float(lam), best_lambda=float(best), residual_rel=float(res_rel),
        projected_gradient_rel=float(rel if np.isfinite(rel) else 0.0),
        constraint_drift_max=float(drift_max), converged=converged,
        final_momentum=float(mom), restorations=restorations,
        wall_time=time.perf_counter() - t_start)
    return u, report
