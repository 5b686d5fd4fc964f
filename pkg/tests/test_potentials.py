import numpy as np
import pytest

from gpvortex.potentials import polynomial_potential, quartic_potential, validate_assumptions


def test_quartic_values():
    W = quartic_potential()
    assert W.value(1.0) == 0.0
    assert W.value(0.0) == 0.25
    assert W.value(2.0) == pytest.approx(9 / 4)
    assert W.value(np.exp(0.7j)) == pytest.approx(0.0, abs=1e-15)


def test_quartic_gradient():
    W = quartic_potential()
    assert W.grad(2.0) == pytest.approx(6.0)
    assert W.grad(1j) == pytest.approx(0.0, abs=1e-15)
    z = 0.3 - 0.8j
    assert W.grad(z) == pytest.approx(-(1 - abs(z) ** 2) * z)


def test_quartic_passes_validation():
    rep = validate_assumptions(quartic_potential())
    assert rep.ok, rep.flags
    assert rep.nonnegative and rep.zero_on_circle
    assert rep.gradient_fd_error < 1e-6


def test_wrong_sign_potential_is_flagged():
    rep = validate_assumptions(polynomial_potential((-0.25, 0.5, -0.25)))
    assert "nonnegativity" in rep.flags
    assert not rep.ok


def test_degenerate_potential_is_flagged():
    # (1 - |z|^2)^4 vanishes to fourth order on the circle
    W = polynomial_potential((1.0, -4.0, 6.0, -4.0, 1.0), growth_p=8.0, C_sc1=100.0, C_sc2=100.0)
    rep = validate_assumptions(W)
    assert "nondegeneracy" in rep.flags
    assert "subcritical" in rep.flags


def test_validation_needs_samples():
    with pytest.raises(ValueError):
        validate_assumptions(quartic_potential(), sample_radii=[])
