"""
Sliding means ``M_h``, differences ``Delta_h`` and the indefinite integral ``P``.

All operators return lazy :class:`~meanclass.signals.Signal` objects.  When
the operand carries a closed-form primitive the result is exact (up to
rounding); otherwise a composite trapezoid rule is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonPositiveH
from .signals import Signal, TrigPoly, register, signal_from_dict

# max nodes materialised at once by the vectorised trapezoid rule
_CHUNK = 2_000_000


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite-trapezoid settings.

    ``exact=False`` forces quadrature even when a closed form exists.
    """

    panels_per_unit: int = 64
    exact: bool = True
    rule: str = "composite-trapezoid"

    def __post_init__(self):
        if self.panels_per_unit < 2:
            raise ValueError("panels_per_unit must be >= 2")
        if self.rule != "composite-trapezoid":
            raise ValueError(f"unsupported rule {self.rule!r}")

    @property
    def dx(self) -> float:
        return 1.0 / self.panels_per_unit

    def panels(self, length: float) -> int:
        return max(8, int(math.ceil(self.panels_per_unit * abs(length) - 1e-9)))


DEFAULT_Q = QuadratureConfig()


def trapezoid_means(s: Signal, t: np.ndarray, h: float, q: QuadratureConfig = DEFAULT_Q) -> np.ndarray:
    """``(1/h) int_0^h s(t+u) du`` for every ``t`` by the composite trapezoid rule."""
    t = np.asarray(t, dtype=float).ravel()
    n = q.panels(h)
    u = np.linspace(0.0, h, n + 1)
    w = np.full(n + 1, 1.0 / n)
    w[0] = w[-1] = 0.5 / n
    out = np.empty(t.shape, dtype=complex)
    step = max(1, _CHUNK // (n + 1))
    for i in range(0, t.size, step):
        tt = t[i : i + step]
        vals = s(tt[:, None] + u[None, :])
        out[i : i + step] = vals @ w
    return out


@register("mean")
class Mean(Signal):
    """Lazy ``M_h s``."""

    def __init__(self, inner: Signal, h: float, q: QuadratureConfig = DEFAULT_Q):
        self.inner, self.h, self.q = inner, float(h), q
        lo, hi = inner.domain
        self.domain = (lo, hi - self.h)

    @property
    def _exact(self) -> bool:
        return self.q.exact and self.inner.has_primitive(1)

    def _eval(self, t):
        if self._exact:
            F = self.inner._primitive
            return (F(t + self.h, 1) - F(t, 1)) / self.h
        return trapezoid_means(self.inner, t, self.h, self.q)

    @property
    def max_primitive_order(self):
        if not self.q.exact:
            return 0
        return max(0, self.inner.max_primitive_order - 1)

    def _primitive(self, t, order):
        F = self.inner._primitive
        return (F(t + self.h, order + 1) - F(t, order + 1)) / self.h

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "h": self.h, "panels_per_unit": self.q.panels_per_unit, "exact": self.q.exact}

    @classmethod
    def from_dict(cls, d):
        q = QuadratureConfig(d.get("panels_per_unit", 64), d.get("exact", True))
        return cls(signal_from_dict(d["inner"]), d["h"], q)


def _mean_factor(w: np.ndarray, h: float) -> np.ndarray:
    """``(exp(i w h) - 1) / (i w h)`` with the analytic value 1 at ``w = 0``."""
    return expm1_ratio(np.asarray(w, dtype=float) * h)


def expm1_ratio(x: np.ndarray) -> np.ndarray:
    """``(exp(i x) - 1) / (i x)``, by its Taylor series for ``|x| < 1e-4``."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=complex)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = 1 + 0.5j * xs - xs * xs / 6
    xl = x[~small]
    out[~small] = np.expm1(1j * xl) / (1j * xl)
    return out


def mean_M(s: Signal, h: float, q: QuadratureConfig = DEFAULT_Q) -> Signal:
    """``M_h s(t) = (1/h) int_0^h s(t+u) du``.

    Trigonometric polynomials map to trigonometric polynomials in closed
    form; everything else becomes a lazy :class:`Mean`.
    """
    h = float(h)
    if not h > 0:
        raise NonPositiveH(f"mean width must be positive, got {h}")
    if isinstance(s, TrigPoly) and q.exact:
        return TrigPoly(zip(s.freqs, s.amps * _mean_factor(s.freqs, h)))
    return Mean(s, h, q)


def iterated_mean(s: Signal, hs: Sequence[float], q: QuadratureConfig = DEFAULT_Q) -> Signal:
    """``M_{h_1} ... M_{h_k} s``, applying ``hs`` left to right."""
    if len(hs) == 0:
        return s
    for h in hs:
        if not h > 0:
            raise NonPositiveH(f"mean width must be positive, got {h}")
    out = s
    for h in hs:
        out = mean_M(out, h, q)
    return out


def difference(s: Signal, h: float) -> Signal:
    """``Delta_h s(t) = s(t+h) - s(t)``."""
    h = float(h)
    if isinstance(s, TrigPoly):
        return TrigPoly(zip(s.freqs, s.amps * np.expm1(1j * s.freqs * h)))
    return s.shift(h) - s


@register("integral")
class Integral(Signal):
    """Lazy ``P s(t) = int_base^t s``; cumulative trapezoid when no closed form."""

    def __init__(self, inner: Signal, base: float = 0.0, q: QuadratureConfig = DEFAULT_Q):
        self.inner, self.base, self.q = inner, float(base), q
        lo, hi = inner.domain
        if not lo <= self.base <= hi:
            from .errors import OutOfDomain

            raise OutOfDomain(f"integral base {base} outside domain [{lo}, {hi}]")
        self.domain = inner.domain

    @property
    def _exact(self):
        return self.q.exact and self.inner.has_primitive(1)

    def _eval(self, t):
        if self._exact:
            F = self.inner._primitive
            return F(t, 1) - F(np.array([self.base]), 1)[0]
        return cumulative_integral(self.inner, self.base, t, self.q.dx)

    @property
    def max_primitive_order(self):
        if not self.q.exact:
            return 0
        return max(0, self.inner.max_primitive_order - 1)

    def _primitive(self, t, order):
        F = self.inner._primitive
        c = F(np.array([self.base]), 1)[0]
        return F(t, order + 1) - c * t**order / math.factorial(order)

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "base": self.base, "panels_per_unit": self.q.panels_per_unit, "exact": self.q.exact}

    @classmethod
    def from_dict(cls, d):
        q = QuadratureConfig(d.get("panels_per_unit", 64), d.get("exact", True))
        return cls(signal_from_dict(d["inner"]), d.get("base", 0.0), q)


def cumulative_integral(s: Signal, base: float, t: np.ndarray, dx: float) -> np.ndarray:
    """``int_base^t s`` on a node grid anchored at ``base`` plus a partial last panel."""
    t = np.asarray(t, dtype=float)
    if t.size == 0:
        return np.zeros(0, dtype=complex)
    lo = min(base, float(t.min()))
    hi = max(base, float(t.max()))
    jlo = int(math.floor((lo - base) / dx))
    jhi = int(math.ceil((hi - base) / dx))
    nodes = base + dx * np.arange(jlo, jhi + 1)
    nodes = np.clip(nodes, *s.domain)
    vals = s(nodes)
    seg = 0.5 * np.diff(nodes) * (vals[1:] + vals[:-1])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    cum -= cum[-jlo]
    j = np.clip(np.floor((t - base) / dx).astype(int) - jlo, 0, len(nodes) - 2)
    tn = nodes[j]
    return cum[j] + 0.5 * (t - tn) * (vals[j] + s(t))


def indefinite_integral(s: Signal, base: float = 0.0, q: QuadratureConfig = DEFAULT_Q) -> Signal:
    """``P s`` normalised by ``P s(base) = 0``."""
    if isinstance(s, TrigPoly) and q.exact and not np.any(s.freqs == 0):
        if s.freqs.size == 0:
            return TrigPoly()
        amps = s.amps / (1j * s.freqs)
        c0 = -np.sum(amps * np.exp(1j * s.freqs * base))
        return TrigPoly(list(zip(s.freqs, amps)) + [(0.0, c0)])
    return Integral(s, base, q)
