"""
Finite-representation calculus for distributions ``T = sum_j F_j^(k_j)``.

A test function is the standard bump ``A exp(-1/(1-u^2))`` with
``u = (x - center)/radius``.  Its derivatives have the form
``A r^-n P_n(u) (1-u^2)^(-2n) exp(-1/(1-u^2))`` with polynomials ``P_n`` from
the recurrence

    P_{n+1} = (1-u^2)^2 P_n' + (4n u (1-u^2) - 2u) P_n,   P_0 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import KernelZeroAtOmega, NonPositiveH, OrderTooHigh
from .ergodic import bohr_coefficient
from .mean_ops import DEFAULT_Q, QuadratureConfig, mean_M
from .signals import Signal, TrigPoly, register, signal_from_dict

MAX_ORDER = 6
KERNEL_PANELS = 512


@lru_cache(maxsize=None)
def bump_polynomial(n: int) -> Polynomial:
    """``P_n`` in the derivative formula of the bump."""
    if n < 0:
        raise ValueError("order must be non-negative")
    P = Polynomial([1.0])
    one_minus = Polynomial([1.0, 0.0, -1.0])
    u = Polynomial([0.0, 1.0])
    for k in range(n):
        P = one_minus**2 * P.deriv() + (4 * k * u * one_minus - 2 * u) * P
    return P


@dataclass(frozen=True)
class TestFunction:
    center: float = 0.0
    radius: float = 1.0
    amplitude: complex = 1.0

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def derivative(self, x, order: int = 0) -> np.ndarray:
        """``phi^(order)(x)``, exactly zero outside the open support."""
        if order > MAX_ORDER:
            raise OrderTooHigh(f"test-function derivatives are limited to order {MAX_ORDER}")
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.radius
        out = np.zeros(x.shape, dtype=complex)
        m = np.abs(u) < 1
        um = u[m]
        q = 1.0 - um * um
        val = bump_polynomial(order)(um) * q ** (-2.0 * order) * np.exp(-1.0 / q)
        out[m] = self.amplitude * val / self.radius**order
        return out

    def __call__(self, x):
        return self.derivative(x, 0)

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Trapezoid nodes and weights over the support."""
        lo, hi = self.support
        u = np.linspace(lo, hi, KERNEL_PANELS + 1)
        w = np.full(u.size, (hi - lo) / KERNEL_PANELS)
        w[0] = w[-1] = 0.5 * (hi - lo) / KERNEL_PANELS
        return u, w

    def integral(self) -> complex:
        u, w = self.nodes()
        return complex(self.derivative(u) @ w)

    def fourier(self, omega: float, order: int = 0) -> complex:
        """``int exp(-i omega x) phi^(order)(x) dx``."""
        u, w = self.nodes()
        return complex((np.exp(-1j * omega * u) * self.derivative(u, order)) @ w)

    def to_dict(self):
        a = complex(self.amplitude)
        return {"center": self.center, "radius": self.radius, "amplitude": [a.real, a.imag]}


DEFAULT_BANK = (TestFunction(0.0, 1.0), TestFunction(0.5, 0.5), TestFunction(-1.0, 2.0, 0.5))


@dataclass(frozen=True)
class DistroRep:
    """``sum_j base_j^(order_j)`` in the sense of distributions."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((b, int(k)) for b, k in self.terms)
        if not terms:
            raise ValueError("a representation needs at least one term")
        for _, k in terms:
            if k < 0:
                raise ValueError("orders must be non-negative")
        object.__setattr__(self, "terms", terms)

    def to_list(self) -> list:
        return [{"base": b.to_dict(), "order": k} for b, k in self.terms]

    @classmethod
    def from_list(cls, items) -> "DistroRep":
        return cls(tuple((signal_from_dict(d["base"]), d["order"]) for d in items))


@register("convolution")
class Convolution(Signal):
    """Lazy ``t -> int base(t - u) kernel(u) du`` on the kernel's trapezoid nodes."""

    def __init__(self, base: Signal, phi: TestFunction, order: int):
        self.base, self.phi, self.order = base, phi, int(order)
        u, w = phi.nodes()
        self._u = u
        self._kw = phi.derivative(u, self.order) * w
        lo, hi = base.domain
        self.domain = (lo + phi.support[1], hi + phi.support[0])

    def _eval(self, t):
        out = np.empty(t.shape, dtype=complex)
        step = max(1, 2_000_000 // self._u.size)
        for i in range(0, t.size, step):
            tt = t[i : i + step]
            out[i : i + step] = self.base(tt[:, None] - self._u[None, :]) @ self._kw
        return out

    def to_dict(self):
        return {"kind": self.kind, "base": self.base.to_dict(), "phi": self.phi.to_dict(), "order": self.order}

    @classmethod
    def from_dict(cls, d):
        a = d["phi"]["amplitude"]
        phi = TestFunction(d["phi"]["center"], d["phi"]["radius"], complex(a[0], a[1]))
        return cls(signal_from_dict(d["base"]), phi, d["order"])


def _convolve_term(base: Signal, phi: TestFunction, order: int) -> Signal:
    if isinstance(base, TrigPoly):
        factors = np.array([phi.fourier(w, order) for w in base.freqs], dtype=complex)
        return TrigPoly(zip(base.freqs, base.amps * factors))
    return Convolution(base, phi, order)


def convolve(T: DistroRep, phi: TestFunction, max_order: int = MAX_ORDER) -> Signal:
    """``T * phi = sum_j base_j * phi^(order_j)``."""
    if max_order > MAX_ORDER:
        raise OrderTooHigh(f"max_order is capped at {MAX_ORDER}")
    for _, k in T.terms:
        if k > max_order:
            raise OrderTooHigh(f"order {k} exceeds {max_order}")
    parts = [_convolve_term(b, phi, k) for b, k in T.terms]
    if all(isinstance(p, TrigPoly) for p in parts):
        out = parts[0]
        for p in parts[1:]:
            out = out.add(p)
        return out
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def distro_mean(T: DistroRep, h: float, q: QuadratureConfig = DEFAULT_Q) -> DistroRep:
    """``T * s_h`` term by term; the mean commutes with derivatives."""
    if not h > 0:
        raise NonPositiveH(f"mean width must be positive, got {h}")
    return DistroRep(tuple((mean_M(b, h, q), k) for b, k in T.terms))


def distro_derivative(T: DistroRep) -> DistroRep:
    out = tuple((b, k + 1) for b, k in T.terms)
    if any(k > MAX_ORDER for _, k in out):
        raise OrderTooHigh(f"derivative order would exceed {MAX_ORDER}")
    return DistroRep(out)


def distro_fourier_coeff(T: DistroRep, omega: float, phi: TestFunction, T_horizon: float, base: float = 0.0) -> complex:
    """``c_omega(T) = c_omega(T * phi) / phi_hat(omega)``."""
    ph = phi.fourier(omega)
    if abs(ph) < 1e-6:
        raise KernelZeroAtOmega(f"|phi_hat({omega})| = {abs(ph):.3g} < 1e-6")
    return bohr_coefficient(convolve(T, phi), omega, T_horizon, base) / ph


def bank_sup_difference(A: DistroRep, B: DistroRep, window, bank: Sequence[TestFunction] = DEFAULT_BANK, step: float = 1.0 / 16) -> float:
    """Largest sup distance between ``A * phi`` and ``B * phi`` over a test-function bank."""
    from .norms import sup_norm

    return max(sup_norm(convolve(A, phi) - convolve(B, phi), window, step) for phi in bank)
