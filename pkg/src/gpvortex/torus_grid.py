"""Uniform periodic grid on the flat 3-torus and its discrete vector calculus.

Scalar fields are numpy arrays of shape ``grid.shape == (n1, n2, n3)``
(real or complex), vector fields have shape ``(3, n1, n2, n3)``.  Node
``(i, j, k)`` sits at ``(i*h1, j*h2, k*h3)``.

All derivatives are second-order central differences with periodic wrap.
Because the central difference is skew-adjoint and the three partial
derivatives commute, ``div(curl V) == 0`` and ``curl(grad f) == 0`` hold to
roundoff, and summation by parts is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    pass


class NonZeroMean(GridError):
    pass


class BallTooLarge(GridError):
    pass


@dataclass(frozen=True)
class TorusGrid:
    n: tuple[int, int, int]
    L: tuple[float, float, float] = (1.0, 1.0, 1.0)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        L = tuple(float(v) for v in self.L)
        if len(n) != 3 or len(L) != 3:
            raise GridError("grid needs three axes")
        for v in n:
            if v < 16 or v % 2:
                raise GridError(f"grid counts must be even and >= 16, got {n}")
        for v in L:
            if not (v > 0 and np.isfinite(v)):
                raise GridError(f"side lengths must be positive, got {L}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "L", L)

    @classmethod
    def cube(cls, n: int, L: float = 1.0) -> "TorusGrid":
        return cls((n, n, n), (L, L, L))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.n

    @property
    def h(self) -> np.ndarray:
        return np.array(self.L) / np.array(self.n)

    @property
    def hmax(self) -> float:
        return float(self.h.max())

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    @property
    def volume(self) -> float:
        return float(np.prod(self.L))

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @property
    def min_side(self) -> float:
        return min(self.L)

    def axes(self) -> list[np.ndarray]:
        return [np.arange(ni) * hi for ni, hi in zip(self.n, self.h)]

    def coords(self) -> np.ndarray:
        """Node coordinates, shape (3, n1, n2, n3)."""
        if "coords" not in self._cache:
            self._cache["coords"] = np.array(np.meshgrid(*self.axes(), indexing="ij"))
        return self._cache["coords"]

    def node_points(self) -> np.ndarray:
        """Node coordinates as an (N, 3) array in C (row-major, axis 3 fastest) order."""
        return self.coords().reshape(3, -1).T

    # -- geometry ---------------------------------------------------------

    def wrap(self, x) -> np.ndarray:
        """Canonical representative of a point (or points, last axis = 3) in [0, L)."""
        L = np.array(self.L)
        return np.mod(np.asarray(x, dtype=float), L)

    def min_image(self, a, b) -> tuple[np.ndarray, np.ndarray]:
        """Shortest periodic displacement ``b - a`` and its length.

        Broadcasts over leading axes; the last axis holds the 3 coordinates.
        Components lie in [-L/2, L/2).
        """
        L = np.array(self.L)
        d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
        d = d - L * np.floor(d / L + 0.5)
        return d, np.sqrt(np.sum(d * d, axis=-1))

    def displacement_field(self, center) -> np.ndarray:
        """Min-image displacement from ``center`` to every node, shape (3, n1, n2, n3)."""
        out = []
        for ax, c, Li in zip(self.axes(), np.asarray(center, dtype=float), self.L):
            d = ax - c
            d = d - Li * np.floor(d / Li + 0.5)
            out.append(d)
        return np.array(np.meshgrid(*out, indexing="ij"))

    def distance_field(self, center) -> np.ndarray:
        d = self.displacement_field(center)
        return np.sqrt(np.sum(d * d, axis=0))

    def node_index(self, flat: int) -> tuple[int, int, int]:
        return tuple(int(v) for v in np.unravel_index(flat, self.n))

    def node_point(self, idx) -> np.ndarray:
        return np.asarray(idx, dtype=float) * self.h

    # -- difference operators --------------------------------------------

    def diff(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Central difference along ``axis`` (0, 1 or 2)."""
        ax = f.ndim - 3 + axis
        return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) / (2.0 * self.h[axis])

    def gradient(self, f: np.ndarray) -> np.ndarray:
        return np.stack([self.diff(f, a) for a in range(3)])

    def divergence(self, V: np.ndarray) -> np.ndarray:
        return self.diff(V[0], 0) + self.diff(V[1], 1) + self.diff(V[2], 2)

    def curl(self, V: np.ndarray) -> np.ndarray:
        d = self.diff
        return np.stack([
            d(V[2], 1) - d(V[1], 2),
            d(V[0], 2) - d(V[2], 0),
            d(V[1], 0) - d(V[0], 1),
        ])

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        """divergence(gradient(f)), i.e. the wide (2h) seven-point stencil."""
        out = np.zeros_like(f)
        for a in range(3):
            ax = f.ndim - 3 + a
            out += (np.roll(f, -2, axis=ax) - 2.0 * f + np.roll(f, 2, axis=ax)) / (4.0 * self.h[a] ** 2)
        return out

    def forward_diff(self, f: np.ndarray, axis: int) -> np.ndarray:
        """One-sided difference (f(x + h e_axis) - f(x)) / h."""
        ax = f.ndim - 3 + axis
        return (np.roll(f, -1, axis=ax) - f) / self.h[axis]

    def laplacian_compact(self, f: np.ndarray) -> np.ndarray:
        """Nearest-neighbour seven-point Laplacian, the gradient of the forward-difference Dirichlet sum."""
        out = np.zeros_like(f)
        for a in range(3):
            ax = f.ndim - 3 + a
            out += (np.roll(f, -1, axis=ax) - 2.0 * f + np.roll(f, 1, axis=ax)) / self.h[a] ** 2
        return out

    def laplacian_symbol(self) -> np.ndarray:
        """Fourier symbol of :meth:`laplacian` on the FFT index grid."""
        if "lap_symbol" not in self._cache:
            s = 0.0
            for a, (ni, hi) in enumerate(zip(self.n, self.h)):
                k = 2.0 * np.pi * np.fft.fftfreq(ni, d=hi)
                shape = [1, 1, 1]
                shape[a] = ni
                s = s + (np.sin(k * hi) / hi).reshape(shape) ** 2
            self._cache["lap_symbol"] = -s
        return self._cache["lap_symbol"]

    def poisson_solve(self, rhs: np.ndarray) -> np.ndarray:
        """Mean-zero ``tau`` with ``laplacian(tau) == rhs``.

        The central-difference Laplacian annihilates the eight modes whose
        wavenumbers are 0 or Nyquist on every axis.  Those components of the
        right-hand side are projected out; the constant one must already be
        (numerically) zero.  Divergences of vector fields never contain them.
        """
        rhs = np.asarray(rhs, dtype=float)
        scale = np.sqrt(np.mean(rhs * rhs))
        if abs(rhs.mean()) > 1e-10 * max(scale, 1e-300) and scale > 0:
            raise NonZeroMean(f"rhs mean {rhs.mean():.3e} exceeds 1e-10 * rms {scale:.3e}")
        sym = self.laplacian_symbol()
        F = np.fft.fftn(rhs)
        kernel = np.abs(sym) < 1e-12 * np.abs(sym).max()
        inv = np.where(kernel, 0.0, 1.0 / np.where(kernel, 1.0, sym))
        return np.real(np.fft.ifftn(F * inv))

    # -- quadrature -------------------------------------------------------

    def integrate(self, f: np.ndarray):
        """Riemann sum over the torus (pairwise summation by numpy)."""
        return np.sum(f) * self.cell_volume

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        """h-weighted real L2 inner product; complex fields are treated as R^2-valued."""
        return float(np.sum(np.real(np.conj(u) * v)) * self.cell_volume)

    def ball_mask(self, center, radius: float) -> np.ndarray:
        if radius >= self.min_side / 2:
            raise BallTooLarge(f"radius {radius} >= half the smallest side {self.min_side / 2}")
        return self.distance_field(center) <= radius

    def ball_integral(self, f: np.ndarray, center, radius: float) -> float:
        return float(np.sum(np.where(self.ball_mask(center, radius), f, 0.0)) * self.cell_volume)

    # -- interpolation ----------------------------------------------------

    def spline_coefficients(self, f: np.ndarray, order: int = 3) -> np.ndarray:
        """Periodic B-spline coefficients of ``f`` (componentwise for vector fields)."""
        from scipy.ndimage import spline_filter

        if f.ndim == 4:
            return np.stack([spline_filter(c, order=order, mode="grid-wrap") for c in f])
        return spline_filter(f, order=order, mode="grid-wrap")

    def interpolate(self, f: np.ndarray, points, order: int = 1, prefiltered: bool = False) -> np.ndarray:
        """Sample a periodic field at arbitrary points (last axis = 3).

        ``order=1`` is trilinear; higher orders use periodic B-splines, and
        ``prefiltered=True`` means ``f`` already holds the coefficients from
        :meth:`spline_coefficients`.  Vector fields (leading axis 3) are
        interpolated componentwise.
        """
        from scipy.ndimage import map_coordinates

        pts = np.asarray(points, dtype=float)
        lead = pts.shape[:-1]
        idx = (self.wrap(pts.reshape(-1, 3)) / self.h).T
        if order == 1:
            samp = lambda g: _trilinear(g, idx)  # noqa: E731
        else:
            samp = lambda g: map_coordinates(g, idx, order=order, mode="grid-wrap",  # noqa: E731
                                             prefilter=not prefiltered)
        if f.ndim == 4:
            return np.stack([samp(c) for c in f], axis=-1).reshape(*lead, f.shape[0])
        return samp(f).reshape(lead)


    def spline_jacobian(self, coeffs: np.ndarray, points) -> np.ndarray:
        """Spatial derivatives of the cubic spline with coefficients ``coeffs``.

        ``coeffs`` comes from :meth:`spline_coefficients` with order 3; the
        result has shape (..., 3) for a scalar and (..., k, 3) for a k-vector
        field, entry [a, b] being d f_a / d x_b.  The evaluation is the exact
        derivative of the interpolant used by :meth:`interpolate`.
        """
        pts = np.asarray(points, dtype=float)
        lead = pts.shape[:-1]
        t = (self.wrap(pts.reshape(-1, 3)) / self.h)
        base = np.floor(t).astype(int)
        u = t - base
        w, dw = _cubic_weights(u)
        vec = coeffs.ndim == 4
        comps = coeffs if vec else coeffs[None]
        n = np.array(self.n)
        out = np.zeros((len(t), comps.shape[0], 3))
        for a in range(4):
            ia = (base[:, 0] + a - 1) % n[0]
            for b in range(4):
                ib = (base[:, 1] + b - 1) % n[1]
                for c in range(4):
                    ic = (base[:, 2] + c - 1) % n[2]
                    vals = comps[:, ia, ib, ic].T
                    g = np.stack([dw[:, a, 0] * w[:, b, 1] * w[:, c, 2],
                                  w[:, a, 0] * dw[:, b, 1] * w[:, c, 2],
                                  w[:, a, 0] * w[:, b, 1] * dw[:, c, 2]], axis=1)
                    out += vals[:, :, None] * g[:, None, :]
        out /= np.asarray(self.h)[None, None, :]
        if vec:
            return out.reshape(*lead, comps.shape[0], 3)
        return out[:, 0].reshape(*lead, 3)


def _cubic_weights(u: np.ndarray):
    """Cubic B-spline weights and their derivatives for offsets -1..2, shape (m, 4, 3)."""
    v = 1.0 - u
    w = np.stack([v ** 3 / 6, (3 * u ** 3 - 6 * u ** 2 + 4) / 6,
                  (-3 * u ** 3 + 3 * u ** 2 + 3 * u + 1) / 6, u ** 3 / 6], axis=1)
    dw = np.stack([-v ** 2 / 2, (3 * u ** 2 - 4 * u) / 2,
                   (-3 * u ** 2 + 2 * u + 1) / 2, u ** 2 / 2], axis=1)
    return w, dw

def _trilinear(f: np.ndarray, idx: np.ndarray) -> np.ndarray:
    n = np.array(f.shape)
    base = np.floor(idx).astype(int)
    t = idx - base
    out = np.zeros(idx.shape[1], dtype=f.dtype)
    for c in range(8):
        o = np.array([(c >> 2) & 1, (c >> 1) & 1, c & 1])
        w = np.ones(idx.shape[1])
        for a in range(3):
            w = w * (t[a] if o[a] else 1.0 - t[a])
        ii = (base + o[:, None]) % n[:, None]
        out = out + w * f[ii[0], ii[1], ii[2]]
    return out
