import math

import numpy as np
import pytest
from scipy.integrate import quad

from meanclass.distributions import (
    DEFAULT_BANK,
    DistroRep,
    TestFunction,
    bank_sup_difference,
    convolve,
    distro_derivative,
    distro_fourier_coeff,
    distro_mean,
)
from meanclass.errors import KernelZeroAtOmega, NonPositiveH, OrderTooHigh
from meanclass.mean_ops import difference, indefinite_integral
from meanclass.norms import sup_norm
from meanclass.signals import FunctionSignal, TrigPoly, constant, zero

G1 = TrigPoly([(1, 1)])
SIN = TrigPoly([(1, -0.5j), (-1, 0.5j)])
COS = TrigPoly([(1, 0.5), (-1, 0.5)])
W = (-10.0, 10.0)


def opaque(p):
    return FunctionSignal(p, label="opaque")


def bump(x):
    return np.where(np.abs(x) < 1, np.exp(-1 / np.clip(1 - x * x, 1e-300, None)), 0.0)


@pytest.mark.parametrize("order", range(1, 5))
def test_bump_derivatives_against_finite_differences(order):
    phi = TestFunction(0.3, 0.8, 1.5)
    x = np.linspace(-0.45, 1.05, 31)
    h = 1e-3
    lower = phi.derivative(x, order - 1)
    fd = (phi.derivative(x + h, order - 1) - phi.derivative(x - h, order - 1)) / (2 * h)
    scale = max(1.0, float(np.max(np.abs(lower))))
    assert np.max(np.abs(phi.derivative(x, order) - fd)) <= 1e-4 * scale * 10**order
    assert np.all(phi.derivative(np.array([-0.6, 1.2]), order) == 0)


def test_bump_shape_and_integral():
    phi = TestFunction()
    x = np.linspace(-1.2, 1.2, 25)
    assert np.allclose(phi(x).real, bump(x), atol=1e-15)
    assert phi.integral().real == pytest.approx(quad(lambda u: math.exp(-1 / (1 - u * u)), -1, 1)[0], abs=1e-10)


def test_fourier_against_quad():
    phi = TestFunction(0.5, 0.5)
    for w in (0.0, 1.0, 3.7):
        re = quad(lambda u: math.cos(w * u) * phi(u).real, 0, 1)[0]
        im = quad(lambda u: -math.sin(w * u) * phi(u).real, 0, 1)[0]
        assert abs(phi.fourier(w) - (re + 1j * im)) < 1e-10


def test_order_limit():
    with pytest.raises(OrderTooHigh):
        TestFunction().derivative(0.0, 7)
    with pytest.raises(OrderTooHigh):
        convolve(DistroRep([(SIN, 7)]), TestFunction())
    with pytest.raises(OrderTooHigh):
        distro_derivative(DistroRep([(SIN, 6)]))


def test_convolve_constant():
    phi = TestFunction(0.2, 0.7, 2)
    got = convolve(DistroRep([(constant(3), 0)]), phi)
    assert sup_norm(got - constant(3 * phi.integral()), W) < 1e-12


def test_convolve_derivative_both_routes():
    phi = TestFunction()
    closed = convolve(DistroRep([(G1, 1)]), phi)
    by_quadrature = convolve(DistroRep([(opaque(G1), 1)]), phi)
    plain = convolve(DistroRep([(G1, 0)]), phi)
    assert sup_norm(closed - by_quadrature, W) <= 1e-8
    assert sup_norm(closed - 1j * plain, W) <= 1e-8


def test_convolve_sin_against_quad():
    phi = TestFunction()
    got = convolve(DistroRep([(opaque(SIN), 0)]), phi)
    for t in (-2.0, 0.3, 4.4):
        want = quad(lambda u: math.sin(t - u) * bump(u), -1, 1, epsabs=1e-13)[0]
        assert abs(got(t) - want) <= 1e-8


def test_distro_mean_examples():
    phi = TestFunction()
    T = DistroRep([(constant(2), 0)])
    assert sup_norm(convolve(distro_mean(T, 0.7), phi) - convolve(T, phi), W) < 1e-12
    Z = distro_mean(DistroRep([(TrigPoly([(2 * math.pi, 1)]), 0)]), 1.0)
    for p in DEFAULT_BANK:
        assert sup_norm(convolve(Z, p), W) <= 1e-8
    with pytest.raises(NonPositiveH):
        distro_mean(T, 0)


def test_distro_mean_of_derivative_is_difference():
    g = TrigPoly([(1.3, 1), (-0.4, 2j)])
    f = indefinite_integral(g, 0.0)
    h = 0.9
    for phi in DEFAULT_BANK:
        lhs = convolve(distro_mean(DistroRep([(f, 1)]), h), phi)
        rhs = convolve(DistroRep([(difference(f, h), 0)]), phi).scale(1 / h)
        assert sup_norm(lhs - rhs, W) <= 1e-7


def test_distro_derivative_examples():
    phi = TestFunction()
    d = distro_derivative(DistroRep([(SIN, 0)]))
    assert d.terms[0][1] == 1
    assert sup_norm(convolve(d, phi) - convolve(DistroRep([(COS, 0)]), phi), W) <= 1e-7
    z = distro_derivative(DistroRep([(zero(), 0)]))
    assert sup_norm(convolve(z, phi), W) == 0
    dd = distro_derivative(distro_derivative(DistroRep([(G1, 0)])))
    assert sup_norm(convolve(dd, phi) + convolve(DistroRep([(G1, 0)]), phi), W) <= 1e-7


def test_distro_fourier_coeff():
    phi = TestFunction()
    assert abs(distro_fourier_coeff(DistroRep([(3 * G1, 0)]), 1, phi, 1e4) - 3) <= 5e-2
    assert abs(distro_fourier_coeff(DistroRep([(G1, 1)]), 1, phi, 1e4) - 1j) <= 5e-2
    assert abs(distro_fourier_coeff(DistroRep([(G1, 1)]), 0, phi, 1e4)) <= 2 / 1e4


def test_kernel_zero_at_omega():
    phi = TestFunction(0, 1, 1e-9)
    with pytest.raises(KernelZeroAtOmega):
        distro_fourier_coeff(DistroRep([(G1, 0)]), 1, phi, 100)


def test_representation_invariance():
    assert bank_sup_difference(DistroRep([(COS, 0)]), DistroRep([(SIN, 1)]), W) <= 1e-7
    assert bank_sup_difference(DistroRep([(opaque(COS), 0)]), DistroRep([(opaque(SIN), 1)]), W) <= 1e-7


def test_mean_derivative_commute():
    T = DistroRep([(TrigPoly([(0.7, 1), (2.1, -1j)]), 1), (COS, 0)])
    for h in (0.5, 1.7):
        a = distro_mean(distro_derivative(T), h)
        b = distro_derivative(distro_mean(T, h))
        assert bank_sup_difference(a, b, W) <= 1e-7


def test_normalisation():
    from meanclass.ergodic import bohr_coefficient

    T = DistroRep([(TrigPoly([(0, 1.5), (1, 2)]), 0)])
    for phi in DEFAULT_BANK:
        assert abs(bohr_coefficient(convolve(T, phi), 0, 1e4) - 1.5 * phi.integral()) <= 1e-3


def test_rep_serialisation():
    T = DistroRep([(G1, 1), (constant(2), 0)])
    back = DistroRep.from_list(T.to_list())
    assert bank_sup_difference(T, back, W) <= 1e-15
