"""Ginzburg-Landau potentials W: C -> [0, inf) and sampling validators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Potential:
    """A radial potential ``W(z) = P(|z|^2)`` with ``P`` a real polynomial.

    ``coeffs[k]`` multiplies ``(|z|^2)^k``.  The quartic Ginzburg-Landau
    potential ``(1 - |z|^2)^2 / 4`` has ``coeffs = (0.25, -0.5, 0.25)``.
    The remaining fields are the constants claimed for the structural
    assumptions and are checked by :func:`validate_assumptions`.
    """

    coeffs: tuple[float, ...]
    name: str = "custom"
    growth_p: float = 4.0
    C_sc1: float = 4.0
    C_sc2: float = 3.0
    alpha_c: float = 1.0
    R_c: float = 2.0
    _dcoeffs: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "_dcoeffs", tuple(k * c[k] for k in range(1, len(c))))

    def _poly(self, coeffs, s):
        out = np.zeros_like(s)
        for ck in reversed(coeffs):
            out = out * s + ck
        return out

    def value(self, z):
        z = np.asarray(z)
        s = np.real(z * np.conj(z))
        return self._poly(self.coeffs, s)

    def grad(self, z):
        """Gradient w.r.t. (Re z, Im z), returned as a complex number: 2 P'(|z|^2) z."""
        z = np.asarray(z)
        s = np.real(z * np.conj(z))
        return 2.0 * self._poly(self._dcoeffs, s) * z


def quartic_potential() -> Potential:
    """W(z) = (1 - |z|^2)^2 / 4, so grad W(z) = -(1 - |z|^2) z.

    Hessian eigenvalues are ``3|z|^2 - 1`` and ``|z|^2 - 1``, bounded by
    ``1 + 3|z|^2``; growth exponent p = 4 < 6 = p* in three dimensions.
    """
    return Potential(coeffs=(0.25, -0.5, 0.25), name="quartic", growth_p=4.0,
                     C_sc1=1.0, C_sc2=3.0, alpha_c=1.0, R_c=2.0)


def polynomial_potential(coeffs, **constants) -> Potential:
    return Potential(coeffs=tuple(coeffs), name="custom", **constants)


@dataclass
class ValidationReport:
    nonnegative: bool
    zero_on_circle: bool
    nondegeneracy_min: float
    subcritical_max: float
    coercivity_min: float
    gradient_fd_error: float
    sampled_radii: tuple[float, float]
    flags: list[str]

    @property
    def ok(self) -> bool:
        return not self.flags

    def as_dict(self) -> dict:
        return {
            "nonnegative": self.nonnegative,
            "zero_on_circle": self.zero_on_circle,
            "nondegeneracy_min": self.nondegeneracy_min,
            "subcritical_max": self.subcritical_max,
            "coercivity_min": self.coercivity_min,
            "gradient_fd_error": self.gradient_fd_error,
            "sampled_radii": list(self.sampled_radii),
            "flags": list(self.flags),
        }


def _fd_hessian_norm(pot: Potential, z: np.ndarray, step: float = 1e-4) -> np.ndarray:
    # spectral norm of the 2x2 Hessian from central differences of the gradient
    g = pot.grad
    gx = (g(z + step) - g(z - step)) / (2 * step)
    gy = (g(z + 1j * step) - g(z - 1j * step)) / (2 * step)
    H = np.stack([np.stack([gx.real, gy.real], -1), np.stack([gx.imag, gy.imag], -1)], -2)
    H = 0.5 * (H + np.swapaxes(H, -1, -2))
    return np.max(np.abs(np.linalg.eigvalsh(H)), axis=-1)


def standard_samples(n_radii: int = 301, n_angles: int = 64, r_max: float = 3.0, ray_max: float = 10.0):
    """Dense polar samples on |z| <= r_max plus rays out to ray_max."""
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    radii = np.concatenate([np.linspace(0.0, r_max, n_radii), np.linspace(r_max, ray_max, 71)[1:]])
    return radii, t


def validate_assumptions(pot: Potential, sample_radii=None, tol: float = 0.1,
                         n_angles: int = 64, seed: int = 0) -> ValidationReport:
    """Sample-based checks of nonnegativity, nondegeneracy near S^1,
    subcritical Hessian growth and coercivity at infinity."""
    if sample_radii is None:
        sample_radii, _ = standard_samples(n_angles=n_angles)
    radii = np.asarray(sample_radii, dtype=float)
    if radii.size == 0:
        raise ValueError("sample set must be nonempty")
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * t)[None, :]
    flags = []

    W = pot.value(z)
    nonneg = bool(np.all(W >= -1e-14))
    if not nonneg:
        flags.append("nonnegativity")
    on_circle = pot.value(np.exp(1j * t))
    zero_ok = bool(np.all(np.abs(on_circle) <= 1e-12))
    off = np.abs(np.abs(z) - 1.0) > 1e-3
    if not zero_ok or np.any(W[off] <= 1e-14):
        zero_ok = False
        flags.append("zero_set")

    near = (np.abs(radii - 1.0) <= 0.1) & (np.abs(radii - 1.0) > 1e-9)
    if np.any(near):
        zn = z[near]
        nondeg = float(np.min(pot.value(zn) / (1.0 - np.abs(zn)) ** 2))
    else:
        rr = np.array([0.95, 1.05])[:, None] * np.exp(1j * t)[None, :]
        nondeg = float(np.min(pot.value(rr) / (1.0 - np.abs(rr)) ** 2))
    if nondeg < tol:
        flags.append("nondegeneracy")

    hn = _fd_hessian_norm(pot, z)
    bound = pot.C_sc1 + pot.C_sc2 * np.abs(z) ** (pot.growth_p - 2)
    sub = float(np.max(hn / bound))
    if sub > 1.0 + 1e-6 or pot.growth_p >= 6.0:
        flags.append("subcritical")

    big = np.abs(z) >= pot.R_c
    if np.any(big):
        zb = z[big]
        coer = float(np.min(np.real(pot.grad(zb) * np.conj(zb)) / np.abs(zb) ** 2))
    else:
        coer = float("inf")
    if coer < pot.alpha_c:
        flags.append("coercivity")

    rng = np.random.default_rng(seed)
    zr = 3.0 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    step = 1e-6
    fdx = (pot.value(zr + step) - pot.value(zr - step)) / (2 * step)
    fdy = (pot.value(zr + 1j * step) - pot.value(zr - 1j * step)) / (2 * step)
    g = pot.grad(zr)
    err = float(np.max(np.abs((fdx + 1j * fdy) - g)) / max(np.max(np.abs(g)), 1e-300))
    if err > 1e-6:
        flags.append("gradient")

    return ValidationReport(nonneg, zero_ok, nondeg, sub, coer, err,
                            (float(radii.min()), float(radii.max())), flags)
