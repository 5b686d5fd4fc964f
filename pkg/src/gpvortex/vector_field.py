"""Co-exact velocity fields X = curl A on the torus and their maximum set Sigma."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .torus_grid import TorusGrid


class FieldError(ValueError):
    pass


class ZeroField(FieldError):
    pass


class CentersTooClose(FieldError):
    pass


class OutsideTube(FieldError):
    pass


def node_order_index(grid: TorusGrid, idx: np.ndarray) -> np.ndarray:
    """Row-major node index with axis 1 fastest (the GPXF payload order)."""
    idx = np.asarray(idx)
    n1, n2, _ = grid.n
    return idx[..., 0] + n1 * (idx[..., 1] + n2 * idx[..., 2])


@dataclass(frozen=True)
class SigmaSet:
    """Grid nodes where |X| >= (1 - tol) max|X|.

    ``components`` labels points by single linkage at distance ``link``:
    two maximal nodes belong to the same component when a chain of maximal
    nodes with min-image steps <= ``link`` joins them.
    """

    grid: TorusGrid
    points: np.ndarray        # (m, 3), sorted by node_order_index
    node_ids: np.ndarray      # (m,) node_order_index of each point
    components: np.ndarray    # (m,) labels 0..k-1, numbered by first appearance
    delta: float
    tol: float
    link: float

    @property
    def n_components(self) -> int:
        return int(self.components.max()) + 1 if len(self.components) else 0

    def component_points(self, k: int) -> np.ndarray:
        return self.points[self.components == k]

    def component_of(self, point) -> int:
        i = _nearest_index(self.grid, point, self.points)
        return int(self.components[i])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "z", "component"])
            for p, c in zip(self.points, self.components):
                w.writerow([repr(float(p[0])), repr(float(p[1])), repr(float(p[2])), int(c)])


def _nearest_index(grid: TorusGrid, p, points: np.ndarray) -> int:
    _, d = grid.min_image(np.asarray(p, dtype=float)[None, :], points)
    return int(np.argmin(d))


def _single_linkage(grid: TorusGrid, points: np.ndarray, link: float) -> np.ndarray:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    m = len(points)
    rows, cols = [], []
    for i0 in range(0, m, 512):
        _, d = grid.min_image(points[i0:i0 + 512, None, :], points[None, :, :])
        a, b = np.nonzero(d <= link)
        rows.append(a + i0)
        cols.append(b)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))
    _, labels = connected_components(adj, directed=False)
    # renumber by first appearance so labels follow node order
    order = {}
    out = np.empty(m, dtype=int)
    for i, lab in enumerate(labels):
        out[i] = order.setdefault(lab, len(order))
    return out


def extract_sigma(grid: TorusGrid, X: np.ndarray, tol: float = 1e-3, delta: float | None = None,
                  link: float | None = None) -> SigmaSet:
    norm = np.sqrt(np.sum(X * X, axis=0))
    mx = norm.max()
    if delta is None:
        delta = grid.min_side / 8
    if not delta < grid.min_side / 4:
        raise FieldError(f"sigma delta {delta} must be < min(L)/4 = {grid.min_side / 4}")
    if link is None:
        link = delta
    idx = np.argwhere(norm >= (1.0 - tol) * mx)
    ids = node_order_index(grid, idx)
    order = np.argsort(ids, kind="stable")
    idx, ids = idx[order], ids[order]
    pts = idx * grid.h
    comps = _single_linkage(grid, pts, link)
    return SigmaSet(grid, pts, ids, comps, float(delta), float(tol), float(link))


@dataclass(frozen=True)
class VelocityField:
    """Divergence-free field X = curl A, normalized so that max |X| = 1.

    ``A`` is None only for the uniform (harmonic, not co-exact) test field,
    which has no periodic vector potential.
    """

    grid: TorusGrid
    A: np.ndarray | None
    X: np.ndarray
    sigma: SigmaSet
    max_norm: float
    scale: float = 1.0
    _splines: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.X * self.X, axis=0))

    def _sample(self, name: str, points, order: int) -> np.ndarray:
        f = getattr(self, name)
        if order == 1:
            return self.grid.interpolate(f, points, order=1)
        key = (name, order)
        if key not in self._splines:
            self._splines[key] = self.grid.spline_coefficients(f, order)
        return self.grid.interpolate(self._splines[key], points, order=order, prefiltered=True)

    def sample_X(self, points, order: int = 3) -> np.ndarray:
        """X at arbitrary points; cubic periodic splines by default, order=1 is trilinear."""
        return self._sample("X", points, order)

    def sample_A(self, points, order: int = 3) -> np.ndarray:
        if self.A is None:
            raise FieldError("this field has no periodic vector potential")
        return self._sample("A", points, order)

    def sample_DA(self, points) -> np.ndarray:
        """Jacobian d A_a / d x_b of the cubic interpolant of A, shape (..., 3, 3)."""
        if self.A is None:
            raise FieldError("this field has no periodic vector potential")
        key = ("A", 3)
        if key not in self._splines:
            self._splines[key] = self.grid.spline_coefficients(self.A, 3)
        return self.grid.spline_jacobian(self._splines[key], points)

    def X_at_node(self, point) -> np.ndarray:
        i = np.round(self.grid.wrap(point) / self.grid.h).astype(int) % np.array(self.grid.n)
        return self.X[:, i[0], i[1], i[2]].copy()


def from_potential(grid: TorusGrid, A: np.ndarray, sigma_tol: float = 1e-3,
                   sigma_delta: float | None = None, sigma_link: float | None = None) -> VelocityField:
    A = np.asarray(A, dtype=float)
    if A.shape != (3,) + grid.shape or not np.all(np.isfinite(A)):
        raise FieldError("A must be a finite vector field on the grid")
    X = grid.curl(A)
    mx = float(np.sqrt(np.sum(X * X, axis=0)).max())
    if not mx > 1e-300:
        raise ZeroField("curl A vanishes identically")
    A = A / mx
    X = X / mx
    sigma = extract_sigma(grid, X, sigma_tol, sigma_delta, sigma_link)
    return VelocityField(grid, A, X, sigma, 1.0, mx)


def smooth_fourier(grid: TorusGrid, f: np.ndarray, fraction: float = 2.0 / 3.0) -> np.ndarray:
    """Zero every Fourier mode above ``fraction`` of the Nyquist index on any axis."""
    F = np.fft.fftn(f)
    for a, n in enumerate(grid.n):
        k = np.abs(np.fft.fftfreq(n, 1.0 / n))
        keep = k <= fraction * (n // 2)
        shape = [1, 1, 1]
        shape[a] = n
        F = F * keep.reshape(shape)
    return np.real(np.fft.ifftn(F))


def gaussian_bumps(grid: TorusGrid, centers, width: float) -> np.ndarray:
    a = np.zeros(grid.shape)
    for q in centers:
        d = grid.displacement_field(q)
        a += np.exp(-np.sum(d * d, axis=0) / width ** 2)
    return smooth_fourier(grid, a)


def two_bumps(grid: TorusGrid, q1, q2, width: float, sigma_tol: float = 1e-3,
              sigma_delta: float | None = None, sigma_link: float | None = None) -> VelocityField:
    """A = (0, 0, a) with a a sum of two Gaussian bumps of the given width.

    X = (d2 a, -d1 a, 0) circulates around each bump axis; Sigma is made of
    the nodes near the two horizontal rings of radius ~ width/sqrt(2) where
    |grad a| peaks, one per bump.
    """
    if not width < grid.min_side / 8:
        raise CentersTooClose(f"width {width} must be < min(L)/8 = {grid.min_side / 8}")
    _, dist = grid.min_image(np.asarray(q1, float), np.asarray(q2, float))
    if not dist > 4 * width:
        raise CentersTooClose(f"centers {dist:.4g} apart, need > 4*width = {4 * width:.4g}")
    A = np.zeros((3,) + grid.shape)
    A[2] = gaussian_bumps(grid, [q1, q2], width)
    return from_potential(grid, A, sigma_tol, sigma_delta, sigma_link)


def single_bump(grid: TorusGrid, q, width: float, sigma_tol: float = 1e-3,
                sigma_delta: float | None = None, sigma_link: float | None = None) -> VelocityField:
    if not width < grid.min_side / 8:
        raise FieldError(f"width {width} must be < min(L)/8 = {grid.min_side / 8}")
    A = np.zeros((3,) + grid.shape)
    A[2] = gaussian_bumps(grid, [q], width)
    return from_potential(grid, A, sigma_tol, sigma_delta, sigma_link)


def mode_field(grid: TorusGrid, sigma_tol: float = 1e-3, sigma_delta: float | None = None,
               sigma_link: float | None = None) -> VelocityField:
    """A = (0, 0, sin(2 pi x1 / L1)); X points along -e2 with |X| ~ |cos(2 pi x1 / L1)|."""
    A = np.zeros((3,) + grid.shape)
    A[2] = np.sin(2 * np.pi * grid.coords()[0] / grid.L[0])
    return from_potential(grid, A, sigma_tol, sigma_delta, sigma_link)


def uniform_field(grid: TorusGrid, direction=(1.0, 0.0, 0.0)) -> VelocityField:
    """Constant unit field sampled on the grid.

    Harmonic rather than co-exact, so ``A`` is None; it is the flat-space
    reference case for the disk-flux and corrector tests.
    """
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    X = np.broadcast_to(e[:, None, None, None], (3,) + grid.shape).copy()
    # every node is maximal; keep one representative per node row so Sigma stays small
    pts = np.zeros((1, 3))
    sigma = SigmaSet(grid, pts, np.zeros(1, dtype=int), np.zeros(1, dtype=int),
                     grid.min_side / 8, 1e-3, grid.min_side / 8)
    return VelocityField(grid, None, X, sigma, 1.0, 1.0)


@dataclass(frozen=True)
class UniformField:
    """Analytic constant unit field with local vector potential A = (X0 x (x - origin)) / 2.

    Lives in flat space (no periodicity); used to check optimizers against
    closed-form circle optima.
    """

    direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def e(self) -> np.ndarray:
        e = np.asarray(self.direction, dtype=float)
        return e / np.linalg.norm(e)

    def sample_X(self, points, order: int = 3) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return np.broadcast_to(self.e, pts.shape).copy()

    def sample_A(self, points, order: int = 3) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return 0.5 * np.cross(self.e, pts - np.asarray(self.origin))

    def sample_DA(self, points) -> np.ndarray:
        e = self.e
        skew = 0.5 * np.array([[0.0, -e[2], e[1]], [e[2], 0.0, -e[0]], [-e[1], e[0], 0.0]])
        pts = np.asarray(points, dtype=float)
        return np.broadcast_to(skew, pts.shape[:-1] + (3, 3)).copy()


def dist_to_sigma(p, s: SigmaSet) -> float:
    _, d = s.grid.min_image(np.asarray(p, dtype=float)[None, :], s.points)
    return float(d.min())


def nearest_sigma_point(p, s: SigmaSet) -> np.ndarray:
    """Nearest-point retraction onto Sigma; ties go to the lowest node index."""
    _, d = s.grid.min_image(np.asarray(p, dtype=float)[None, :], s.points)
    i = int(np.argmin(d))
    if d[i] > s.delta:
        raise OutsideTube(f"point is {d[i]:.4g} from Sigma, tube radius {s.delta:.4g}")
    return s.points[i].copy()
