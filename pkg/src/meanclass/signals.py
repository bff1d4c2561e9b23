"""
Exact and sampled complex-valued signals of real time.

Every signal is an immutable, vectorised callable ``s(t)``.  Signals that
admit a closed-form antiderivative expose it through :meth:`Signal.primitive`;
the mean and integral operators use those primitives to stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.interpolate import PPoly
from scipy.special import fresnel

from .errors import NoClosedForm, OutOfDomain

_SQRT_PI_2 = math.sqrt(math.pi / 2.0)
_SQRT_2_PI = math.sqrt(2.0 / math.pi)

_REGISTRY: dict[str, Callable[[dict], "Signal"]] = {}


def register(kind: str):
    def deco(cls):
        cls.kind = kind
        _REGISTRY[kind] = cls.from_dict
        return cls

    return deco


def signal_from_dict(d: dict) -> "Signal":
    """Rebuild a signal from the descriptor produced by ``Signal.to_dict``."""
    try:
        factory = _REGISTRY[d["kind"]]
    except KeyError:
        raise ValueError(f"unknown signal descriptor kind {d.get('kind')!r}") from None
    return factory(d)


def _c(x) -> list:
    x = complex(x)
    return [x.real, x.imag]


def _uc(v) -> complex:
    return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)


@dataclass(frozen=True)
class Grid:
    """Uniform sampling description ``t0, t0 + dt, ..., t0 + (n-1) dt``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"grid step must be positive, got {self.dt}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"grid count must be a positive integer, got {self.n}")
        if not math.isfinite(self.t0):
            raise ValueError("grid origin must be finite")

    @property
    def t1(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @classmethod
    def over(cls, a: float, b: float, dt: float) -> "Grid":
        """Smallest grid starting at ``a`` with step ``dt`` that reaches ``b``."""
        n = int(math.ceil((b - a) / dt - 1e-9)) + 1
        return cls(float(a), float(dt), max(n, 1))


class Signal:
    """Base class.  Subclasses implement ``_eval`` on 1-d float arrays."""

    kind = "abstract"
    domain: tuple[float, float] = (-math.inf, math.inf)

    # -- evaluation -------------------------------------------------------
    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        self._check(flat)
        out = np.asarray(self._eval(flat), dtype=complex).reshape(arr.shape)
        return complex(out) if arr.ndim == 0 else out

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check(self, t: np.ndarray) -> None:
        lo, hi = self.domain
        if t.size == 0 or (lo == -math.inf and hi == math.inf):
            return
        slack = 1e-9 * max(1.0, abs(lo) if math.isfinite(lo) else 0.0, abs(hi) if math.isfinite(hi) else 0.0)
        tmin, tmax = float(t.min()), float(t.max())
        if tmin < lo - slack or tmax > hi + slack or not (math.isfinite(tmin) and math.isfinite(tmax)):
            raise OutOfDomain(
                f"{type(self).__name__} evaluated on [{tmin:g}, {tmax:g}], domain is [{lo:g}, {hi:g}]"
            )

    # -- closed-form antiderivatives ---------------------------------------
    @property
    def max_primitive_order(self) -> int:
        return 0

    def has_primitive(self, order: int = 1) -> bool:
        return order <= self.max_primitive_order

    def primitive(self, t, order: int = 1):
        """Value of a fixed ``order``-fold antiderivative at ``t``.

        The additive polynomial is implementation-defined but stable across
        calls, so differences of primitives are exact integrals.
        """
        if order < 1 or not self.has_primitive(order):
            raise NoClosedForm(f"{type(self).__name__} has no closed-form primitive of order {order}")
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        self._check(flat)
        out = np.asarray(self._primitive(flat, order), dtype=complex).reshape(arr.shape)
        return complex(out) if arr.ndim == 0 else out

    def _primitive(self, t: np.ndarray, order: int) -> np.ndarray:
        raise NoClosedForm(type(self).__name__)

    # -- algebra ------------------------------------------------------------
    def shift(self, h: float) -> "Signal":
        h = float(h)
        return self if h == 0 else Shifted(self, h)

    def modulate(self, omega: float) -> "Signal":
        omega = float(omega)
        return self if omega == 0 else Modulated(self, omega)

    def scale(self, c: complex) -> "Signal":
        return Scaled(self, complex(c))

    def add(self, other: "Signal") -> "Signal":
        return Sum((self, other))

    def __add__(self, other):
        if isinstance(other, Signal):
            return self.add(other)
        if np.isscalar(other):
            return self.add(constant(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, Signal):
            return self.add(other.scale(-1))
        if np.isscalar(other):
            return self.add(constant(-complex(other)))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if np.isscalar(c):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    # -- serialisation ------------------------------------------------------
    def to_dict(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} is not serialisable")

    def __repr__(self):
        try:
            return f"{type(self).__name__}({self.to_dict()})"
        except NotImplementedError:
            return f"{type(self).__name__}()"


def transform(s: Signal, action: str, value) -> Signal:
    """Apply one of ``shift``, ``modulate``, ``scale`` or ``add`` lazily."""
    if action == "shift":
        return s.shift(value)
    if action == "modulate":
        return s.modulate(value)
    if action == "scale":
        return s.scale(value)
    if action == "add":
        return s.add(value)
    raise ValueError(f"unknown transform {action!r}")


def sample(s: Signal, g: Grid) -> "Tabulated":
    """Tabulate ``s`` on ``g``."""
    return Tabulated(g, s(g.times()))


# ---------------------------------------------------------------------------
# trigonometric polynomials
# ---------------------------------------------------------------------------


@register("trigpoly")
class TrigPoly(Signal):
    """Finite sum ``sum_j a_j exp(i w_j t)``."""

    def __init__(self, terms: Iterable[tuple[float, complex]] = ()):
        pairs = tuple((float(w), complex(a)) for w, a in terms)
        for w, _ in pairs:
            if not math.isfinite(w):
                raise ValueError("trigonometric polynomial frequencies must be finite")
        self.terms = pairs
        self.freqs = np.array([w for w, _ in pairs], dtype=float)
        self.amps = np.array([a for _, a in pairs], dtype=complex)

    def _eval(self, t):
        out = np.zeros(t.shape, dtype=complex)
        for w, a in self.terms:
            if w == 0:
                out += a
            else:
                out += a * np.exp(1j * w * t)
        return out

    @property
    def max_primitive_order(self):
        return 16

    def _primitive(self, t, order):
        out = np.zeros(t.shape, dtype=complex)
        for w, a in self.terms:
            if w == 0:
                out += a * t**order / math.factorial(order)
            else:
                out += a / (1j * w) ** order * np.exp(1j * w * t)
        return out

    def simplified(self, tol: float = 0.0) -> "TrigPoly":
        """Merge equal frequencies and drop terms with ``|a| <= tol``."""
        acc: dict[float, complex] = {}
        for w, a in self.terms:
            acc[w] = acc.get(w, 0j) + a
        return TrigPoly(sorted((w, a) for w, a in acc.items() if abs(a) > tol))

    def shift(self, h):
        return TrigPoly((w, a * np.exp(1j * w * h)) for w, a in self.terms)

    def modulate(self, omega):
        return TrigPoly((w + omega, a) for w, a in self.terms)

    def scale(self, c):
        return TrigPoly((w, a * c) for w, a in self.terms)

    def add(self, other):
        if isinstance(other, TrigPoly):
            return TrigPoly(self.terms + other.terms)
        return super().add(other)

    def derivative(self) -> "TrigPoly":
        return TrigPoly((w, 1j * w * a) for w, a in self.terms if w != 0)

    def to_dict(self):
        return {"kind": self.kind, "terms": [[w, *_c(a)] for w, a in self.terms]}

    @classmethod
    def from_dict(cls, d):
        return cls((t[0], complex(t[1], t[2])) for t in d["terms"])


def constant(c: complex) -> TrigPoly:
    return TrigPoly([(0.0, complex(c))])


def character(omega: float, a: complex = 1.0) -> TrigPoly:
    """``a * exp(i omega t)``."""
    return TrigPoly([(omega, a)])


def zero() -> TrigPoly:
    return TrigPoly()


# ---------------------------------------------------------------------------
# chirp
# ---------------------------------------------------------------------------


@register("chirp")
class Chirp(Signal):
    """``c * exp(i a t^2)`` with rate ``a != 0`` (default 1)."""

    def __init__(self, c: complex = 1.0, a: float = 1.0):
        a = float(a)
        if a == 0 or not math.isfinite(a):
            raise ValueError("chirp rate must be finite and non-zero")
        self.c, self.a = complex(c), a

    def _eval(self, t):
        return self.c * np.exp(1j * self.a * t * t)

    @property
    def max_primitive_order(self):
        return 2

    def _fresnel(self, t):
        # int_0^t exp(i a s^2) ds via the Fresnel integrals
        r = math.sqrt(abs(self.a))
        s, c = fresnel(t * r * _SQRT_2_PI)
        val = _SQRT_PI_2 * (c + 1j * s) / r
        return val if self.a > 0 else np.conj(val)

    def _primitive(self, t, order):
        f1 = self._fresnel(t)
        if order == 1:
            return self.c * f1
        # integrate by parts: int_0^t F1 = t F1(t) - int_0^t s e^{ias^2} ds
        return self.c * (t * f1 - np.expm1(1j * self.a * t * t) / (2j * self.a))

    def modulate(self, omega):
        # e^{iwt} e^{iat^2} = e^{-iw^2/(4a)} e^{ia(t + w/(2a))^2}
        a = self.a
        return Chirp(self.c * np.exp(-0.25j * omega * omega / a), a).shift(omega / (2.0 * a))

    def scale(self, c):
        return Chirp(self.c * c, self.a)

    def to_dict(self):
        return {"kind": self.kind, "c": _c(self.c), "a": self.a}

    @classmethod
    def from_dict(cls, d):
        return cls(_uc(d.get("c", 1.0)), d.get("a", 1.0))


def sin_t2() -> Signal:
    """``sin(t^2)`` as a sum of two opposite-rate chirps (keeps closed forms)."""
    return Sum((Chirp(-0.5j, 1.0), Chirp(0.5j, -1.0)))


@register("product")
class Product(Signal):
    """Pointwise product of two signals; no closed forms."""

    def __init__(self, left: Signal, right: Signal):
        self.left, self.right = left, right
        self.domain = (max(left.domain[0], right.domain[0]), min(left.domain[1], right.domain[1]))

    def _eval(self, t):
        return self.left._eval(t) * self.right._eval(t)

    def to_dict(self):
        return {"kind": self.kind, "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(d["left"]), signal_from_dict(d["right"]))


# ---------------------------------------------------------------------------
# piecewise-linear signals (tabulated data, the ten-block indicator)
# ---------------------------------------------------------------------------


class PiecewiseLinear(Signal):
    """Continuous piecewise-linear signal through ``(x_k, y_k)``.

    ``left``/``right`` give constant extensions; ``None`` means the signal is
    undefined there.
    """

    def __init__(self, x, y, left=None, right=None):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=complex)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise ValueError("need at least two breakpoints with matching values")
        if np.any(np.diff(x) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        self._x, self._y = x, y
        self._left, self._right = left, right
        self.domain = (
            -math.inf if left is not None else float(x[0]),
            math.inf if right is not None else float(x[-1]),
        )

    def _eval(self, t):
        y = self._y
        lo = y[0] if self._left is None else complex(self._left)
        hi = y[-1] if self._right is None else complex(self._right)
        return np.interp(t, self._x, y.real, lo.real, hi.real) + 1j * np.interp(
            t, self._x, y.imag, lo.imag, hi.imag
        )

    @cached_property
    def _ppoly(self) -> PPoly:
        x, y = self._x, self._y
        slopes = np.diff(y) / np.diff(x)
        c = np.vstack([slopes, y[:-1]])
        if self._left is not None:
            x = np.concatenate([[x[0] - 1.0], x])
            c = np.hstack([[[0.0], [complex(self._left)]], c])
        if self._right is not None:
            x = np.concatenate([x, [x[-1] + 1.0]])
            c = np.hstack([c, [[0.0], [complex(self._right)]]])
        return PPoly(c.astype(complex), x, extrapolate=True)

    @property
    def max_primitive_order(self):
        return 4

    @cached_property
    def _antiderivatives(self) -> dict:
        return {}

    def _primitive(self, t, order):
        cache = self._antiderivatives
        if order not in cache:
            cache[order] = self._ppoly.antiderivative(order)
        return cache[order](t)

    # exact primitive of exp(iwt) * self(t), used by Modulated
    def modulated_primitive(self, t: np.ndarray, omega: float) -> np.ndarray:
        pp = self._ppoly
        x = pp.x
        beta = pp.c[0]
        alpha0 = pp.c[1]

        def partial(k, d):
            # int_{x_k}^{x_k + d} exp(i w s) (alpha_k + beta_k (s - x_k)) ds
            e1, e2 = _phi12(1j * omega * d)
            return np.exp(1j * omega * x[k]) * d * (alpha0[k] * e1 + beta[k] * d * e2)

        idx = np.arange(len(x) - 1)
        cum = np.concatenate([[0.0], np.cumsum(partial(idx, np.diff(x)))])
        k = np.clip(np.searchsorted(x, t, side="right") - 1, 0, len(x) - 2)
        return cum[k] + partial(k, t - x[k])

    def modulated_integral(self, a: float, b: float, omegas) -> np.ndarray:
        """``int_a^b exp(-i w s) self(s) ds`` for each ``w``, exact and vectorised.

        Only the pieces meeting ``[a, b]`` are visited.
        """
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        x = self._x
        inner = x[(x > a) & (x < b)]
        nodes = np.concatenate([[a], inner, [b]])
        y = self(nodes)
        u, d = nodes[:-1], np.diff(nodes)
        ya, dy = y[:-1], np.diff(y)
        out = np.empty(omegas.shape, dtype=complex)
        step = max(1, 2_000_000 // u.size)
        for i in range(0, omegas.size, step):
            w = omegas[i : i + step, None]
            z = -1j * w * d[None, :]
            e1, e2 = _phi12(z)
            out[i : i + step] = (np.exp(-1j * w * u[None, :]) * d * (ya * e1 + dy * e2)).sum(axis=1)
        return out


def _phi12(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(e^z - 1)/z`` and ``int_0^1 x e^{zx} dx`` with series near ``z = 0``."""
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    ez = np.exp(zs)
    e1 = np.where(small, 1 + z / 2 + z * z / 6 + z**3 / 24, (ez - 1) / zs)
    e2 = np.where(small, 0.5 + z / 3 + z * z / 8 + z**3 / 30, (ez * (zs - 1) + 1) / (zs * zs))
    return e1, e2


@register("tabulated")
class Tabulated(PiecewiseLinear):
    """Samples on a uniform grid, linearly interpolated; undefined off-grid."""

    def __init__(self, grid: Grid, values: Sequence[complex]):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} values, got {values.shape}")
        self.grid = grid
        self.values = values
        if grid.n == 1:
            # single sample: a degenerate signal defined only at t0
            self._x, self._y = np.array([grid.t0]), values
            self._left = self._right = None
            self.domain = (grid.t0, grid.t0)
        else:
            super().__init__(grid.times(), values)

    def _eval(self, t):
        if self.grid.n == 1:
            return np.full(t.shape, self.values[0])
        return super()._eval(t)

    @property
    def max_primitive_order(self):
        return 0 if self.grid.n == 1 else 4

    def to_dict(self):
        g = self.grid
        return {
            "kind": self.kind,
            "grid": [g.t0, g.dt, g.n],
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        t0, dt, n = d["grid"]
        return cls(Grid(t0, dt, int(n)), np.asarray(d["re"]) + 1j * np.asarray(d["im"]))


@register("block10")
class BlockTen(PiecewiseLinear):
    """Indicator of the even blocks ``I_2n``, ``I_n = [10^n + 1, 10^(n+1) - 1]``.

    The length-2 gap around each ``10^k`` is bridged by a linear ramp of width
    ``ramp`` centred on ``10^k``.  Left of the first gap the signal is 1.
    """

    DECADES = 15

    def __init__(self, ramp: float = 1.0):
        ramp = float(ramp)
        if not 0 < ramp <= 2:
            raise ValueError(f"ramp width must lie in (0, 2], got {ramp}")
        self.ramp = ramp
        xs, ys = [], []
        for k in range(1, self.DECADES + 1):
            c = 10.0**k
            before = 1.0 if (k - 1) % 2 == 0 else 0.0
            xs += [c - ramp / 2, c + ramp / 2]
            ys += [before, 1.0 - before]
        super().__init__(xs, ys, left=1.0, right=None)

    def to_dict(self):
        return {"kind": self.kind, "ramp": self.ramp}

    @classmethod
    def from_dict(cls, d):
        return cls(d.get("ramp", 1.0))


# ---------------------------------------------------------------------------
# closed-form examples
# ---------------------------------------------------------------------------


@register("logosc")
class LogOsc(Signal):
    """``sin(log(1+t)) / (1+t)`` for ``t >= 0`` and 0 for ``t < 0``."""

    def _eval(self, t):
        out = np.zeros(t.shape, dtype=complex)
        pos = t >= 0
        tp = t[pos]
        out[pos] = np.sin(np.log1p(tp)) / (1.0 + tp)
        return out

    @property
    def max_primitive_order(self):
        return 2

    def _primitive(self, t, order):
        out = np.empty(t.shape, dtype=complex)
        pos = t >= 0
        tp, tn = t[pos], t[~pos]
        lg = np.log1p(tp)
        if order == 1:
            out[pos] = -np.cos(lg)
            out[~pos] = -1.0
        else:
            out[pos] = -(1.0 + tp) * (np.cos(lg) + np.sin(lg)) / 2.0
            out[~pos] = -0.5 - tn
        return out

    def to_dict(self):
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, d):
        return cls()


@dataclass(frozen=True)
class BurstTrain:
    """Periodic train of one burst per period, zero elsewhere.

    Period ``period``; periods start at ``start + q*period``; the burst
    occupies ``[offset, offset + length]`` within a period.  ``shapes`` holds
    the burst profile and its first two antiderivatives, all in the local
    variable ``v in [0, length]`` and vanishing at ``v = 0``.
    """

    period: float
    start: float
    offset: float
    length: float
    shapes: tuple

    def __call__(self, t: np.ndarray, order: int = 0) -> np.ndarray:
        p = self.period
        q = np.floor((t - self.start) / p)
        tau = t - self.start - q * p
        v = tau - self.offset
        inside = (v >= 0) & (v <= self.length)
        vin = np.clip(v, 0.0, self.length)
        if order == 0:
            return np.where(inside, self.shapes[0](vin), 0.0)
        L = self.length
        b1 = self.shapes[1](L)
        part1 = np.where(v < 0, 0.0, np.where(inside, self.shapes[1](vin), b1))
        if order == 1:
            return q * b1 + part1
        b2 = self.shapes[2](L)
        per_period = b2 + b1 * (p - self.offset - L)
        part2 = np.where(v < 0, 0.0, np.where(inside, self.shapes[2](vin), b2 + b1 * (v - L)))
        return b1 * p * q * (q - 1) / 2.0 + q * per_period + q * b1 * tau + part2


def _ex35_trains(N: int) -> list[BurstTrain]:
    trains = []
    for n in range(2, N + 1):
        k = 2.0 ** (n - 1)
        kp = k * math.pi
        trains.append(
            BurstTrain(
                period=2.0**n,
                start=-k,
                offset=2 * k - 1,
                length=1.0,
                shapes=(
                    lambda v, kp=kp: np.sin(kp * v),
                    lambda v, kp=kp: (1.0 - np.cos(kp * v)) / kp,
                    lambda v, kp=kp: (v - np.sin(kp * v) / kp) / kp,
                ),
            )
        )
    return trains


def prop38_interval(n: int) -> tuple[float, float]:
    """Disjoint dyadic interval ``I_n`` inside ``[0, 1]`` with ``|I_n| = 2^-n``."""
    a = 1.0 - 2.0 ** (1 - n)
    return a, a + 2.0**-n


def _prop38_trains(N: int, derivative: bool) -> list[BurstTrain]:
    trains = []
    for n in range(1, N + 1):
        a, b = prop38_interval(n)
        L = b - a
        k = 2 * math.pi / L
        s = L / (2 * math.pi)
        g = (
            lambda v, k=k: np.sin(k * v),
            lambda v, k=k, s=s: s * (1.0 - np.cos(k * v)),
            lambda v, k=k, s=s: s * (v - s * np.sin(k * v)),
        )
        f = (
            g[1],
            g[2],
            lambda v, k=k, s=s: s * (v * v / 2.0 - s * s * (1.0 - np.cos(k * v))),
        )
        trains.append(
            BurstTrain(period=2.0 * n + 1, start=-float(n), offset=2.0 * n + a, length=L, shapes=g if derivative else f)
        )
    return trains


_PAPER_SUMS = {
    "ex3_5": (lambda N: _ex35_trains(N), lambda N: math.inf, 2),
    "prop3_8": (lambda N: _prop38_trains(N, False), lambda N: 2.0**-N / math.pi, 1),
    "prop3_8_deriv": (lambda N: _prop38_trains(N, True), lambda N: math.inf, 1),
}


@register("papersum")
class PaperSum(Signal):
    """Truncated series from the counterexample constructions.

    ``ex3_5``: sum of ``h_n``, n = 2..N, each ``h_n`` of period ``2^n`` with a
    unit-length burst of ``2^(n-2)`` sine oscillations.
    ``prop3_8``: sum of ``f_n``, n = 1..N, ``f_n`` the integral of a one-period
    sine burst ``g_n`` of width ``2^-n`` repeating with period ``2n + 1``.
    ``prop3_8_deriv``: the corresponding sum of the ``g_n``.

    ``tail_bound`` bounds the sup-norm distance to the untruncated series
    (``inf`` when the neglected terms do not shrink in sup norm).
    """

    def __init__(self, name: str, N: int):
        if name not in _PAPER_SUMS:
            raise ValueError(f"unknown series {name!r}")
        build, tail, nmin = _PAPER_SUMS[name]
        if int(N) < nmin:
            raise ValueError(f"{name} needs truncation N >= {nmin}")
        self.name, self.N = name, int(N)
        self.trains = build(self.N)
        self.tail_bound = float(tail(self.N))

    def _eval(self, t):
        out = np.zeros(t.shape, dtype=float)
        for tr in self.trains:
            out += tr(t)
        return out.astype(complex)

    @property
    def max_primitive_order(self):
        return 2

    def _primitive(self, t, order):
        out = np.zeros(t.shape, dtype=float)
        for tr in self.trains:
            out += tr(t, order)
        return out.astype(complex)

    def to_dict(self):
        return {"kind": self.kind, "name": self.name, "N": self.N}

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d["N"])


# ---------------------------------------------------------------------------
# lazy wrappers
# ---------------------------------------------------------------------------


@register("shifted")
class Shifted(Signal):
    """``t -> inner(t + h)``."""

    def __init__(self, inner: Signal, h: float):
        if isinstance(inner, Shifted):
            inner, h = inner.inner, inner.h + h
        self.inner, self.h = inner, float(h)
        lo, hi = inner.domain
        self.domain = (lo - self.h, hi - self.h)

    def _eval(self, t):
        return self.inner._eval(t + self.h)

    @property
    def max_primitive_order(self):
        return self.inner.max_primitive_order

    def _primitive(self, t, order):
        return self.inner._primitive(t + self.h, order)

    def shift(self, h):
        h = float(h)
        return self if h == 0 else Shifted(self.inner, self.h + h).simplify()

    def simplify(self):
        return self.inner if self.h == 0 else self

    def modulate(self, omega):
        if omega == 0:
            return self
        return Shifted(self.inner.modulate(omega), self.h).scale(np.exp(-1j * omega * self.h))

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "h": self.h}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(d["inner"]), d["h"])


@register("modulated")
class Modulated(Signal):
    """``t -> exp(i w t) inner(t)``."""

    def __init__(self, inner: Signal, omega: float):
        if isinstance(inner, Modulated):
            inner, omega = inner.inner, inner.omega + omega
        self.inner, self.omega = inner, float(omega)
        self.domain = inner.domain

    def _eval(self, t):
        return np.exp(1j * self.omega * t) * self.inner._eval(t)

    @property
    def max_primitive_order(self):
        return 1 if hasattr(self.inner, "modulated_primitive") and self.inner.has_primitive(1) else 0

    def _primitive(self, t, order):
        return self.inner.modulated_primitive(t, self.omega)

    def modulate(self, omega):
        omega = float(omega)
        if omega == 0:
            return self
        total = self.omega + omega
        return self.inner if total == 0 else Modulated(self.inner, total)

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "omega": self.omega}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(d["inner"]), d["omega"])


@register("scaled")
class Scaled(Signal):
    """``t -> c inner(t)``."""

    def __init__(self, inner: Signal, c: complex):
        if isinstance(inner, Scaled):
            inner, c = inner.inner, inner.c * c
        self.inner, self.c = inner, complex(c)
        self.domain = inner.domain

    def _eval(self, t):
        return self.c * self.inner._eval(t)

    @property
    def max_primitive_order(self):
        return self.inner.max_primitive_order

    def _primitive(self, t, order):
        return self.c * self.inner._primitive(t, order)

    def shift(self, h):
        return Scaled(self.inner.shift(h), self.c)

    def modulate(self, omega):
        return Scaled(self.inner.modulate(omega), self.c)

    def scale(self, c):
        return Scaled(self.inner, self.c * complex(c))

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "c": _c(self.c)}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(d["inner"]), _uc(d["c"]))


@register("sum")
class Sum(Signal):
    """Pointwise sum of signals."""

    def __init__(self, parts: Iterable[Signal]):
        flat: list[Signal] = []
        for p in parts:
            flat.extend(p.parts if isinstance(p, Sum) else [p])
        if not flat:
            raise ValueError("empty sum")
        self.parts = tuple(flat)
        self.domain = (max(p.domain[0] for p in flat), min(p.domain[1] for p in flat))

    def _eval(self, t):
        out = np.zeros(t.shape, dtype=complex)
        for p in self.parts:
            out += p._eval(t)
        return out

    @property
    def max_primitive_order(self):
        return min(p.max_primitive_order for p in self.parts)

    def _primitive(self, t, order):
        out = np.zeros(t.shape, dtype=complex)
        for p in self.parts:
            out += p._primitive(t, order)
        return out

    def shift(self, h):
        return Sum(p.shift(h) for p in self.parts)

    def modulate(self, omega):
        return Sum(p.modulate(omega) for p in self.parts)

    def to_dict(self):
        return {"kind": self.kind, "parts": [p.to_dict() for p in self.parts]}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(p) for p in d["parts"])


@register("real_part")
class RealPart(Signal):
    """``t -> Re inner(t)`` (used for ``sin t^2`` from the chirp)."""

    def __init__(self, inner: Signal, imag: bool = False):
        self.inner, self.imag = inner, bool(imag)
        self.domain = inner.domain

    def _eval(self, t):
        v = self.inner._eval(t)
        return (v.imag if self.imag else v.real).astype(complex)

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "imag": self.imag}

    @classmethod
    def from_dict(cls, d):
        return cls(signal_from_dict(d["inner"]), d.get("imag", False))


@register("function")
class FunctionSignal(Signal):
    """Wrap an arbitrary vectorised callable; no closed forms."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], domain=(-math.inf, math.inf), label: str = "fn"):
        self.fn, self.domain, self.label = fn, tuple(domain), label

    def _eval(self, t):
        return np.asarray(self.fn(t), dtype=complex) * np.ones(t.shape)

    def to_dict(self):
        raise NotImplementedError("callable signals cannot be serialised")

    @classmethod
    def from_dict(cls, d):  # pragma: no cover - never produced
        raise ValueError("callable signals cannot be deserialised")
