"""Closed polygonal vortex loops, their length and flux, and length minimization at fixed flux.

The flux of a loop is the circulation of the vector potential A along it,
which for X = curl A equals the flux of X through any surface it bounds.
Also holds the two elementary subadditivity inequalities used to show that
splitting a loop into pieces costs extra length.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

GAMMA_2 = 2.0 * np.sqrt(np.pi)


class LoopError(ValueError):
    pass


class DegenerateEdge(LoopError):
    pass


class FluxUnreachable(LoopError):
    pass


class MaxIters(LoopError):
    pass


class HypothesisViolated(ValueError):
    pass


# -- loops ------------------------------------------------------------------

@dataclass(frozen=True)
class VortexLoop:
    """Closed polygon; the last vertex connects back to the first.

    ``L`` gives the torus periods (edges are min-image segments); None means
    flat R^3.
    """

    vertices: np.ndarray
    L: tuple | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 8:
            raise LoopError("a loop needs at least 8 vertices in 3D")
        object.__setattr__(self, "vertices", v)
        if self.L is not None:
            object.__setattr__(self, "L", tuple(float(x) for x in self.L))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> np.ndarray:
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        if self.L is not None:
            L = np.array(self.L)
            d = d - L * np.floor(d / L + 0.5)
        return d

    def unwrapped(self) -> np.ndarray:
        """Vertices made continuous by accumulating min-image edges (closing edge excluded)."""
        d = self.edges()[:-1]
        return self.vertices[0] + np.vstack([np.zeros(3), np.cumsum(d, axis=0)])

    def centroid(self) -> np.ndarray:
        c = self.unwrapped().mean(axis=0)
        return c if self.L is None else np.mod(c, np.array(self.L))

    def reversed(self) -> "VortexLoop":
        return VortexLoop(self.vertices[::-1].copy(), self.L)

    def translated(self, shift) -> "VortexLoop":
        return VortexLoop(self.vertices + np.asarray(shift, dtype=float), self.L)

    def with_vertices(self, v) -> "VortexLoop":
        return VortexLoop(v, self.L)


def _check_edges(loop: VortexLoop, d: np.ndarray) -> np.ndarray:
    lengths = np.sqrt(np.sum(d * d, axis=1))
    if np.any(lengths <= 1e-9):
        raise DegenerateEdge("loop has a repeated consecutive vertex")
    if loop.L is not None and np.any(lengths > min(loop.L) / 4):
        raise DegenerateEdge("loop edge longer than min(L)/4")
    return lengths


def loop_mass(loop: VortexLoop) -> float:
    return float(np.sum(_check_edges(loop, loop.edges())))


def loop_flux(loop: VortexLoop, X) -> float:
    """Midpoint-rule circulation of A: sum over edges of A(midpoint) . edge."""
    d = loop.edges()
    _check_edges(loop, d)
    mid = loop.vertices + 0.5 * d
    A = np.asarray(X.sample_A(mid))
    return float(np.sum(A * d))


def circle_loop(center, normal, radius: float, n: int = 64, L=None, phase: float = 0.0) -> VortexLoop:
    """Regular n-gon inscribed in the circle, oriented positively about ``normal``."""
    from .photography import orthonormal_frame

    F = orthonormal_frame(normal)
    t = phase + 2 * np.pi * np.arange(n) / n
    v = np.asarray(center, dtype=float) + radius * (np.cos(t)[:, None] * F[1] + np.sin(t)[:, None] * F[2])
    return VortexLoop(v, L)


def ellipse_loop(center, normal, a: float, b: float, n: int = 64, L=None) -> VortexLoop:
    from .photography import orthonormal_frame

    F = orthonormal_frame(normal)
    t = 2 * np.pi * np.arange(n) / n
    v = np.asarray(center, dtype=float) + a * np.cos(t)[:, None] * F[1] + b * np.sin(t)[:, None] * F[2]
    return VortexLoop(v, L)


def loops_to_csv(path, loops) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["loop_id", "vertex_index", "x", "y", "z"])
        for k, lp in enumerate(loops):
            for i, v in enumerate(lp.vertices):
                w.writerow([k, i, repr(float(v[0])), repr(float(v[1])), repr(float(v[2]))])


# -- gradients and restoration ----------------------------------------------

def mass_gradient(loop: VortexLoop) -> np.ndarray:
    d = loop.edges()
    t = d / _check_edges(loop, d)[:, None]
    return np.roll(t, 1, axis=0) - t


def flux_gradient(loop: VortexLoop, X) -> np.ndarray:
    """Exact vertex gradient of :func:`loop_flux`.

    With midpoints m_i and edges d_i, the flux is sum_i A(m_i) . d_i, so
    vertex i collects A(m_{i-1}) - A(m_i) + (DA(m_{i-1})^T d_{i-1} + DA(m_i)^T d_i) / 2.
    For a constant field this reduces to ((v_{i+1} - v_{i-1}) / 2) x X.
    """
    d = loop.edges()
    mid = loop.vertices + 0.5 * d
    A = np.asarray(X.sample_A(mid))
    J = np.asarray(X.sample_DA(mid))
    t = 0.5 * np.einsum("iab,ia->ib", J, d)
    return np.roll(A, 1, axis=0) - A + t + np.roll(t, 1, axis=0)


def _plane_projector(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - c)
    n = vt[2]
    return c, np.eye(3) - np.outer(n, n)


def dilate(loop: VortexLoop, kappa: float) -> VortexLoop:
    """Scale the in-plane part of the loop about its centroid by kappa (best-fit plane)."""
    pts = loop.unwrapped()
    c, P = _plane_projector(pts)
    rel = pts - c
    new = c + kappa * rel @ P + rel @ (np.eye(3) - P)
    return loop.with_vertices(new)


def restore_flux(loop: VortexLoop, phi: float, X, rtol: float = 1e-12) -> VortexLoop:
    """Dilation factor kappa with loop_flux(dilate(loop, kappa)) = phi, by bracketing root finding."""
    f0 = loop_flux(loop, X)
    if abs(f0 - phi) <= rtol * abs(phi):
        return loop
    if not f0 * phi > 0:
        raise FluxUnreachable("loop flux has the wrong sign for dilation")
    g = lambda k: loop_flux(dilate(loop, k), X) - phi  # noqa: E731
    k0 = np.sqrt(phi / f0)
    lo, hi = k0 * 0.8, k0 * 1.25
    for _ in range(40):
        if g(lo) < 0 < g(hi):
            break
        lo, hi = lo * 0.8, hi * 1.25
    else:
        raise FluxUnreachable("no dilation reaches the target flux")
    k = brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    return dilate(loop, k)


def resample(loop: VortexLoop, n: int | None = None) -> VortexLoop:
    """Redistribute vertices uniformly in arc length along the polygon."""
    n = len(loop) if n is None else n
    pts = loop.unwrapped()
    closed = np.vstack([pts, pts[-1] + loop.edges()[-1]])
    seg = np.sqrt(np.sum(np.diff(closed, axis=0) ** 2, axis=1))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    target = np.arange(n) * s[-1] / n
    new = np.stack([np.interp(target, s, closed[:, a]) for a in range(3)], axis=1)
    return loop.with_vertices(new)


# -- minimization -------------------------------------------------------------

@dataclass(frozen=True)
class LoopConfig:
    max_iters: int = 4000
    tol: float = 1e-4
    c1: float = 1e-4
    backtrack: float = 0.5
    resample_every: int = 100
    stage_iters: int = 200
    rigid: bool = True
    rigid_rtol: float = 1e-6
    raise_on_max_iters: bool = False


@dataclass
class LoopResult:
    loop: VortexLoop
    mass: float
    flux: float
    iterations: int
    converged: bool
    flux_drift_max: float
    resamples: int
    grad_norm: float
    rigid_stages: int = 0


def projected_loop_gradient(loop: VortexLoop, X):
    gm = mass_gradient(loop)
    gf = flux_gradient(loop, X)
    ff = np.sum(gf * gf)
    lam = np.sum(gm * gf) / ff if ff > 0 else 0.0
    return gm - lam * gf, float(lam)


def _edges_ok(loop: VortexLoop) -> bool:
    ln = np.sqrt(np.sum(loop.edges() ** 2, axis=1))
    m = ln.mean()
    return bool(ln.min() >= 0.5 * m and ln.max() <= 2.0 * m)


def _normal_part(loop: VortexLoop, g: np.ndarray) -> np.ndarray:
    """Drop the component of g along the vertex tangent (sliding vertices along the curve)."""
    d = loop.edges()
    t = d + np.roll(d, 1, axis=0)
    t /= np.sqrt(np.sum(t * t, axis=1))[:, None]
    return g - np.sum(g * t, axis=1)[:, None] * t


def _relative_gradient(loop: VortexLoop, X):
    g, _ = projected_loop_gradient(loop, X)
    g = _normal_part(loop, g)
    # scale-free criterion: the mass gradient has entries of order 2 sin(pi/n)
    scale = float(np.abs(mass_gradient(loop)).max())
    return g, float(np.abs(g).max()) / scale


def rigid_transform(loop: VortexLoop, params) -> VortexLoop:
    """Rotate about the centroid by the rotation vector params[3:] and translate by params[:3]."""
    from scipy.spatial.transform import Rotation

    pts = loop.unwrapped()
    c = pts.mean(axis=0)
    R = Rotation.from_rotvec(np.asarray(params[3:], dtype=float)).as_matrix()
    return loop.with_vertices(c + np.asarray(params[:3], dtype=float) + (pts - c) @ R.T)


def rigid_refine(loop: VortexLoop, phi: float, X, gtol: float = 1e-9):
    """Best rigid motion of the loop, with the flux restored by dilation after each move.

    Vertex descent is slow on the rigid modes (translation and tilt of the
    loop plane), whose curvature is tiny next to the shape modes; this
    optimizes those six parameters directly.  Returns (loop, mass).
    """
    from scipy.optimize import minimize

    m0 = loop_mass(loop)
    rho = m0 / (2 * np.pi)
    scale = np.array([rho, rho, rho, 1.0, 1.0, 1.0])

    def f(x):
        try:
            return loop_mass(restore_flux(rigid_transform(loop, x * scale), phi, X)) / m0
        except LoopError:
            return np.inf

    res = minimize(f, np.zeros(6), method="BFGS", options={"gtol": gtol, "maxiter": 200})
    if not (np.isfinite(res.fun) and res.fun < 1.0):
        return loop, m0
    out = restore_flux(rigid_transform(loop, res.x * scale), phi, X)
    return out, loop_mass(out)


def _descend(loop, mass, phi, X, cfg, n_iters):
    """Projected gradient descent on vertex positions; BB steps with Armijo backtracking."""
    drift = 0.0
    resamples = 0
    step = 0.1 * mass / len(loop)
    prev = None
    it = 0
    g, gnorm = _relative_gradient(loop, X)
    for it in range(n_iters):
        if gnorm <= cfg.tol:
            break
        if prev is not None:
            dv = loop.unwrapped() - prev[0]
            dg = g - prev[1]
            denom = float(np.sum(dv * dg))
            if denom > 0:
                step = float(np.sum(dv * dv)) / denom
        g2 = float(np.sum(g * g))
        t = step
        while True:
            trial = loop.with_vertices(loop.vertices - t * g)
            try:
                trial = restore_flux(trial, phi, X)
                mt = loop_mass(trial)
            except LoopError:
                mt = np.inf
            if mt <= mass - cfg.c1 * t * g2:
                break
            t *= cfg.backtrack
            if t < 1e-16:
                break
        if t < 1e-16:
            # no descent left at floating-point resolution
            return loop, mass, it, drift, resamples, gnorm, True
        prev = (loop.unwrapped(), g)
        loop, mass = trial, mt
        drift = max(drift, abs(loop_flux(loop, X) - phi))
        if (it + 1) % cfg.resample_every == 0 or not _edges_ok(loop):
            cand = restore_flux(resample(loop), phi, X)
            mc = loop_mass(cand)
            if mc <= mass or not _edges_ok(loop):
                loop, mass = cand, mc
                resamples += 1
                prev = None
        g, gnorm = _relative_gradient(loop, X)
    else:
        it = n_iters
    return loop, mass, it, drift, resamples, gnorm, False


def minimize_loop(loop0: VortexLoop, phi: float, X, cfg: LoopConfig | None = None) -> LoopResult:
    """Minimize length at fixed flux.

    Stages of vertex descent (projected gradient, flux restored by dilation
    after every step) alternate with a rigid-motion refinement; every stage
    only accepts decreases of the length.
    """
    cfg = LoopConfig() if cfg is None else cfg
    if not phi > 0:
        raise FluxUnreachable("target flux must be positive")
    f0 = loop_flux(loop0, X)
    if not (phi / 4 <= f0 <= 4 * phi):
        raise FluxUnreachable(f"seed flux {f0:.4g} is not within a factor 4 of phi = {phi:.4g}")
    loop = restore_flux(loop0, phi, X)
    mass = loop_mass(loop)
    drift = abs(loop_flux(loop, X) - phi)
    total = resamples = rigid_stages = 0
    converged = False
    gnorm = np.inf
    while True:
        n = min(cfg.stage_iters, cfg.max_iters - total)
        loop, mass, its, d, rs, gnorm, stalled = _descend(loop, mass, phi, X, cfg, n)
        total += its
        drift = max(drift, d)
        resamples += rs
        moved = False
        if cfg.rigid:
            cand, mc = rigid_refine(loop, phi, X)
            rigid_stages += 1
            # moves gaining less than rigid_rtol are dropped so the vertex-converged loop stands
            if mc < mass * (1 - cfg.rigid_rtol):
                loop, mass, moved = cand, mc, True
                drift = max(drift, abs(loop_flux(loop, X) - phi))
                _, gnorm = _relative_gradient(loop, X)
        if not moved and (gnorm <= cfg.tol or (stalled and gnorm <= 10 * cfg.tol)):
            converged = True
            break
        if total >= cfg.max_iters or (stalled and not moved):
            break
    if cfg.raise_on_max_iters and not converged:
        raise MaxIters(f"loop minimization did not converge in {cfg.max_iters} iterations")
    return LoopResult(loop, float(mass), float(loop_flux(loop, X)), total, converged, float(drift),
                      resamples, gnorm, rigid_stages)


# -- experiments --------------------------------------------------------------

@dataclass(frozen=True)
class JMRow:
    phi: float
    best_mass: float
    ratio: float
    centroid: tuple
    dist_to_sigma: float


@dataclass(frozen=True)
class JMTable:
    rows: list
    exponent: float
    prefactor: float


def seed_positions(X, k: int, rng, min_speed: float = 0.5) -> np.ndarray:
    """k random grid-free positions where |X| >= min_speed (rejection sampling)."""
    grid = getattr(X, "grid", None)
    out = []
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > 100000:
            raise LoopError("could not find seed positions with |X| above the threshold")
        if grid is None:
            p = rng.uniform(-1.0, 1.0, size=3)
        else:
            p = rng.uniform(0.0, 1.0, size=3) * np.array(grid.L)
        if np.linalg.norm(np.asarray(X.sample_X(p[None, :]))[0]) >= min_speed:
            out.append(p)
    return np.array(out)


def seed_loop(p, phi: float, X, n: int = 64) -> VortexLoop:
    """Circle through p orthogonal to X(p) with flux ~ phi for the local speed."""
    Xp = np.asarray(X.sample_X(np.asarray(p, dtype=float)[None, :]))[0]
    speed = np.linalg.norm(Xp)
    r = np.sqrt(phi / (np.pi * speed))
    grid = getattr(X, "grid", None)
    return circle_loop(p, Xp, r, n, None if grid is None else grid.L)


def fit_power_law(phis, masses) -> tuple[float, float]:
    """Least-squares fit mass = C * phi^e in log-log coordinates; returns (e, C)."""
    e, logC = np.polyfit(np.log(phis), np.log(masses), 1)
    return float(e), float(np.exp(logC))


def jm_rows(phi_list, X, positions, cfg: LoopConfig | None = None, sigma=None,
            n_vertices: int = 64) -> tuple[list, list]:
    """Best loop over the starting positions for each flux: (rows, best LoopResults)."""
    from .vector_field import dist_to_sigma

    rows, best_loops = [], []
    for phi in (float(v) for v in phi_list):
        best = None
        for p in np.asarray(positions, dtype=float):
            res = minimize_loop(seed_loop(p, phi, X, n_vertices), phi, X, cfg)
            if best is None or res.mass < best.mass:
                best = res
        c = best.loop.centroid()
        dist = float("nan") if sigma is None else dist_to_sigma(c, sigma)
        rows.append(JMRow(phi, best.mass, float(best.mass / (GAMMA_2 * np.sqrt(phi))),
                          tuple(float(v) for v in c), dist))
        best_loops.append(best)
    return rows, best_loops


def jm_table(phi_list, X, seeds, cfg: LoopConfig | None = None, sigma=None, n_vertices: int = 64,
             rng_seed: int = 0) -> tuple[JMTable, list]:
    """Best loop mass over seeds for each flux, with power-law fit.

    ``seeds`` is either a number of random positions (drawn from
    ``rng_seed``) or an explicit array of positions.
    """
    phis = [float(v) for v in phi_list]
    if max(phis) < 10 * min(phis) * (1 - 1e-12):
        raise LoopError("phi_list must span at least one decade")
    if np.isscalar(seeds):
        pos = seed_positions(X, int(seeds), np.random.default_rng(rng_seed))
    else:
        pos = np.asarray(seeds, dtype=float)
    rows, best_loops = jm_rows(phis, X, pos, cfg, sigma, n_vertices)
    e, C = fit_power_law([r.phi for r in rows], [r.best_mass for r in rows])
    return JMTable(rows, e, C), best_loops


def splitting_penalty(phi: float, split_fraction: float, X, p=None, cfg: LoopConfig | None = None,
                      n_vertices: int = 64) -> float:
    """Relative extra length of two loops with fluxes a*phi and (1-a)*phi over a single loop."""
    a = float(split_fraction)
    if not (0 < a < 1):
        raise LoopError("split fraction must lie in (0, 1)")
    if p is None:
        grid = getattr(X, "grid", None)
        p = np.zeros(3) if grid is None else X.sigma.points[0]
    single = minimize_loop(seed_loop(p, phi, X, n_vertices), phi, X, cfg).mass
    m1 = minimize_loop(seed_loop(p, a * phi, X, n_vertices), a * phi, X, cfg).mass
    m2 = minimize_loop(seed_loop(p, (1 - a) * phi, X, n_vertices), (1 - a) * phi, X, cfg).mass
    return float((m1 + m2 - single) / single)


# -- subadditivity ------------------------------------------------------------

def subadd_check(a: float, b: float, s: float, delta: float) -> tuple[bool, float]:
    """a^s + b^s >= c^s + s(1-s) c^(s-2) delta^2 for c = a + b and a in [delta, c - delta]."""
    c = a + b
    if not (a > 0 and b > 0):
        raise HypothesisViolated("a and b must be positive")
    if not (0 < s < 1):
        raise HypothesisViolated("s must lie in (0, 1)")
    if not (0 < delta <= c / 2):
        raise HypothesisViolated("delta must lie in (0, (a+b)/2]")
    if not (delta <= a <= c - delta):
        raise HypothesisViolated("a must lie in [delta, a+b-delta]")
    lhs = a ** s + b ** s
    rhs = c ** s + s * (1 - s) * c ** (s - 2) * delta ** 2
    slack = lhs - rhs
    # roundoff allowance at the equality-adjacent boundary
    return bool(slack >= -1e-12 * max(lhs, 1.0)), float(slack)


@dataclass(frozen=True)
class SeriesResult:
    holds: bool
    witness: int | None
    slack_min: float


def series_check(rows, s: float, delta: float, c_minus: float, c_plus: float) -> SeriesResult:
    """Check c_{s,n} = sum_m a_{n,m}^s >= c_-^s + s(1-s) c_+^(s-2) delta^2 row by row.

    Every row must satisfy the hypotheses (nonnegative entries, row sum in
    [c_-, c_+], largest entry <= 1 - delta); a row that does not raises
    HypothesisViolated.  A row satisfying them but violating the conclusion
    is returned as the witness.
    """
    if not (0 < s < 1):
        raise HypothesisViolated("s must lie in (0, 1)")
    if not (0 < c_minus < c_plus):
        raise HypothesisViolated("need 0 < c_- < c_+")
    if not (0 < delta < 1):
        raise HypothesisViolated("delta must lie in (0, 1)")
    rhs = c_minus ** s + s * (1 - s) * c_plus ** (s - 2) * delta ** 2
    slack_min = np.inf
    for n, row in enumerate(rows):
        r = np.asarray(row, dtype=float)
        if np.any(r < 0):
            raise HypothesisViolated(f"row {n} has a negative entry")
        tot = r.sum()
        if not (c_minus * (1 - 1e-12) <= tot <= c_plus * (1 + 1e-12)):
            raise HypothesisViolated(f"row {n} sums to {tot:.6g}, outside [c_-, c_+]")
        if r.max() > 1 - delta + 1e-12:
            raise HypothesisViolated(f"row {n} has an entry above 1 - delta")
        lhs = float(np.sum(r[r > 0] ** s))
        slack = lhs - rhs
        slack_min = min(slack_min, slack)
        if slack < -1e-12 * max(lhs, 1.0):
            return SeriesResult(False, n, float(slack))
    return SeriesResult(True, None, float(slack_min))


def random_series_rows(rng, n_rows: int, delta: float, c_minus: float, c_plus: float,
                       max_len: int = 12) -> list:
    """Random admissible rows: entries >= 0, sum in [c_-, c_+], every entry <= 1 - delta."""
    rows = []
    cap = 1 - delta
    while len(rows) < n_rows:
        total = rng.uniform(c_minus, c_plus)
        k = int(rng.integers(int(np.ceil(total / cap)), max(int(np.ceil(total / cap)), max_len) + 1))
        w = rng.dirichlet(np.ones(k) * rng.uniform(0.2, 3.0))
        r = total * w
        if r.max() <= cap:
            rows.append(r)
    return rows


@dataclass(frozen=True)
class SuiteResult:
    name: str
    draws: int
    violations: int
    slack_min: float
    first_violation: dict | None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"name": self.name, "draws": self.draws, "violations": self.violations,
                "slack_min": self.slack_min, "first_violation": self.first_violation,
                "passed": self.passed}


def subadd_suite(rng, draws: int) -> SuiteResult:
    """subadd_check on random admissible (a, b, s, delta) with a + b log-uniform in [1e-3, 1e3]."""
    bad, first, smin = 0, None, np.inf
    for _ in range(draws):
        c = float(np.exp(rng.uniform(np.log(1e-3), np.log(1e3))))
        s = float(rng.uniform(0.01, 0.99))
        delta = float(rng.uniform(1e-6, 0.5)) * c
        a = float(rng.uniform(delta, c - delta))
        ok, slack = subadd_check(a, c - a, s, delta)
        smin = min(smin, slack)
        if not ok:
            bad += 1
            if first is None:
                first = {"a": a, "b": c - a, "s": s, "delta": delta, "slack": slack}
    return SuiteResult("subadditivity", draws, bad, float(smin), first)


def series_suite(rng, draws: int) -> SuiteResult:
    """series_check on random admissible rows, one parameter set per row, c_- >= 1."""
    bad, first, smin = 0, None, np.inf
    for _ in range(draws):
        s = float(rng.uniform(0.05, 0.95))
        delta = float(rng.uniform(0.02, 0.5))
        c_minus = float(rng.uniform(1.0, 3.0))
        c_plus = c_minus * float(rng.uniform(1.01, 3.0))
        rows = random_series_rows(rng, 1, delta, c_minus, c_plus)
        res = series_check(rows, s, delta, c_minus, c_plus)
        smin = min(smin, res.slack_min)
        if not res.holds:
            bad += 1
            if first is None:
                first = {"row": [float(v) for v in rows[0]], "s": s, "delta": delta,
                         "c_minus": c_minus, "c_plus": c_plus}
    return SuiteResult("series", draws, bad, float(smin), first)
