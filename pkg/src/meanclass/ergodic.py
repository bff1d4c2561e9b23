"""
Ergodic means with uniformity diagnostics, Bohr-Fourier coefficients and
spectra, trigonometric reconstruction, and the Bohl-Bohr and tauberian checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import czt

from .errors import ZeroFrequencyPresent
from .mean_ops import DEFAULT_Q, QuadratureConfig, expm1_ratio, indefinite_integral, mean_M
from .norms import sup_norm
from .signals import PiecewiseLinear, Signal, TrigPoly

DEFAULT_T = (1e2, 1e3, 1e4)
DEFAULT_BASE = (0.0, 1.0, math.e)


@dataclass
class MeanReport:
    """Ergodic-mean estimate along a horizon schedule.

    ``value`` is the minimax centre of the longest-horizon means, the point
    minimising their largest deviation.
    ``sup_dev[i]`` is the largest deviation of the horizon-``T_values[i]``
    means from ``value`` over the base points.  ``converged`` requires the
    last two deviations to be within ``rtol * (1 + |value|)``.
    """

    value: complex
    T_values: list
    sup_dev: list
    base_points: list
    converged: bool
    rtol: float
    means: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "T_values": list(self.T_values),
            "sup_dev": list(self.sup_dev),
            "base_points": list(self.base_points),
            "converged": self.converged,
            "rtol": self.rtol,
        }


def ergodic_mean(
    s: Signal,
    T_values: Sequence[float] = DEFAULT_T,
    base_points: Sequence[float] = DEFAULT_BASE,
    rtol: float = 1e-2,
    q: QuadratureConfig = DEFAULT_Q,
) -> MeanReport:
    Ts = [float(T) for T in T_values]
    if not Ts or any(T <= 0 for T in Ts) or any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise ValueError("T_values must be positive and strictly increasing")
    xs = np.asarray(base_points, dtype=float)
    if xs.size == 0:
        raise ValueError("need at least one base point")
    rows = [mean_M(s, T, q)(xs) for T in Ts]
    value = chebyshev_center(rows[-1])
    sup_dev = [float(np.max(np.abs(r - value))) for r in rows]
    tol = rtol * (1.0 + abs(value))
    converged = all(d <= tol for d in sup_dev[-2:])
    return MeanReport(value, Ts, sup_dev, xs.tolist(), bool(converged), rtol, [r.tolist() for r in rows])


def chebyshev_center(z) -> complex:
    """Centre of the smallest disc containing the points ``z``.

    The optimum is the midpoint of a pair or the circumcentre of a triple, so
    every candidate is tried; fine for the handful of base points used here.
    """
    z = np.unique(np.asarray(z, dtype=complex).ravel())
    if z.size <= 1:
        return complex(z[0]) if z.size else 0j
    cands = [(a + b) / 2 for i, a in enumerate(z) for b in z[i + 1 :]]
    n = z.size
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                b, c = z[j] - z[i], z[k] - z[i]
                d = 2 * (b.real * c.imag - b.imag * c.real)
                if abs(d) > 1e-300:
                    ux = (c.imag * abs(b) ** 2 - b.imag * abs(c) ** 2) / d
                    uy = (b.real * abs(c) ** 2 - c.real * abs(b) ** 2) / d
                    cands.append(z[i] + complex(ux, uy))
    cands = np.asarray(cands)
    radius = np.max(np.abs(cands[:, None] - z[None, :]), axis=1)
    return complex(cands[int(np.argmin(radius))])


# ---------------------------------------------------------------------------
# Bohr-Fourier coefficients
# ---------------------------------------------------------------------------


def bohr_coefficient(s: Signal, omega: float, T: float, base: float = 0.0, q: QuadratureConfig = DEFAULT_Q) -> complex:
    """``(1/T) int_base^{base+T} exp(-i omega t) s(t) dt``."""
    return complex(mean_M(s.modulate(-omega), T, q)(base))


def _trig_coefficients(p: TrigPoly, omegas: np.ndarray, T: float, base: float) -> np.ndarray:
    out = np.zeros(omegas.shape, dtype=complex)
    for w, a in p.terms:
        out += a * np.exp(1j * (w - omegas) * base) * expm1_ratio((w - omegas) * T)
    return out


def coefficients(s: Signal, omegas, T: float, base: float = 0.0, q: QuadratureConfig = DEFAULT_Q) -> np.ndarray:
    """Bohr coefficients on an array of frequencies.

    Closed form for trigonometric polynomials, per-frequency primitives when
    the modulated signal has one, otherwise one shared trapezoid sampling.
    """
    omegas = np.asarray(omegas, dtype=float)
    if isinstance(s, TrigPoly) and q.exact:
        return _trig_coefficients(s, omegas, T, base)
    if isinstance(s, PiecewiseLinear) and q.exact:
        return (s.modulated_integral(base, base + T, omegas.ravel()) / T).reshape(omegas.shape)
    if q.exact and omegas.size and s.modulate(-float(omegas.flat[0])).has_primitive(1):
        return np.array([bohr_coefficient(s, w, T, base, q) for w in omegas.ravel()]).reshape(omegas.shape)
    n = q.panels(T)
    t = base + np.linspace(0.0, T, n + 1)
    v = s(t)
    wts = np.full(n + 1, 1.0 / n)
    wts[0] = wts[-1] = 0.5 / n
    v = v * wts
    flat = omegas.ravel()
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, 4_000_000 // (n + 1))
    for i in range(0, flat.size, step):
        w = flat[i : i + step]
        out[i : i + step] = np.exp(-1j * np.outer(w, t)) @ v
    return out.reshape(omegas.shape)


@dataclass
class SpectrumEstimate:
    entries: list  # (omega, c) pairs sorted by omega
    threshold: float
    omega_grid: dict

    def poly(self) -> TrigPoly:
        return TrigPoly(self.entries)

    def to_dict(self) -> dict:
        return {
            "entries": [{"omega": w, "re": c.real, "im": c.imag} for w, c in self.entries],
            "threshold": self.threshold,
            "omega_grid": self.omega_grid,
        }


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section search for a maximiser of a unimodal ``f`` on ``[a, b]``."""
    c, d = b - _GOLD * (b - a), a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    m = 0.5 * (a + b)
    fm = f(m)
    best = max((fm, m), (fc, c), (fd, d))
    return best[1], best[0]


class _CoeffEvaluator:
    """Coefficients at horizons ``<= T`` from one shared trapezoid sampling.

    Signals with exact coefficient paths are delegated to :func:`coefficients`;
    for the rest the signal is sampled once on ``[base, base + T]`` and a
    horizon ``T_j`` uses the prefix of that sampling.
    """

    def __init__(self, s: Signal, T: float, base: float, q: QuadratureConfig):
        self.s, self.T, self.base, self.q = s, T, base, q
        self.exact = q.exact and (
            isinstance(s, (TrigPoly, PiecewiseLinear)) or s.modulate(-1.0).has_primitive(1)
        )
        if not self.exact:
            n = q.panels(T)
            self.dx = T / n
            self.t = base + self.dx * np.arange(n + 1)
            self.v = s(self.t)

    def __call__(self, omegas, Tj: float) -> np.ndarray:
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        if self.exact:
            return coefficients(self.s, omegas, Tj, self.base, self.q)
        m = max(1, min(self.t.size - 1, int(round(Tj / self.dx))))
        t, v = self.t[: m + 1], self.v[: m + 1].copy()
        v[0] *= 0.5
        v[-1] *= 0.5
        if omegas.size > 16 and np.allclose(np.diff(omegas), omegas[1] - omegas[0], rtol=1e-9, atol=0):
            # uniform frequency grid: chirp-z transform
            dw = omegas[1] - omegas[0]
            a = np.exp(1j * omegas[0] * self.dx)
            w = np.exp(-1j * dw * self.dx)
            return np.exp(-1j * omegas * self.base) * czt(v, omegas.size, w, a) / m
        out = np.empty(omegas.shape, dtype=complex)
        step = max(1, 4_000_000 // (m + 1))
        for i in range(0, omegas.size, step):
            out[i : i + step] = np.exp(-1j * np.outer(omegas[i : i + step], t)) @ v
        return out / m


def _refine(ev: _CoeffEvaluator, w0: float, step: float, T: float) -> float:
    """Locate a spectral line near ``w0`` with horizons growing 4x per stage.

    Each stage brackets the estimate by ``pi / T_j`` so the bracket stays
    inside the main lobe of the horizon-``T_j`` coefficient.
    """
    Tj = min(T, math.pi / step)
    half = step
    w = w0
    while True:
        f = lambda x, Tj=Tj: abs(ev([x], Tj)[0])
        w, _ = golden_max(f, w - half, w + half, half / 20.0)
        if Tj >= T:
            return w
        Tj = min(T, 4.0 * Tj)
        half = math.pi / Tj


def omega_grid_array(grid) -> np.ndarray:
    if isinstance(grid, dict):
        lo, hi, st = grid["lo"], grid["hi"], grid["step"]
        n = int(round((hi - lo) / st))
        return lo + st * np.arange(n + 1)
    return np.asarray(grid, dtype=float)


def bohr_spectrum_scan(
    s: Signal, omega_grid, T: float, threshold: float, base: float = 0.0, q: QuadratureConfig = DEFAULT_Q
) -> SpectrumEstimate:
    """Detect spectral lines ``|c_omega| > threshold`` on a frequency grid.

    Grid magnitudes use a horizon matched to the grid step (``pi / step``);
    local maxima above ``threshold`` are visited strongest first, refined and
    re-measured at horizon ``T``.  A candidate explained by the leakage of
    stronger accepted lines is dropped, as is one within a grid step of an
    accepted line.
    """
    grid = omega_grid_array(omega_grid)
    if grid.size == 0:
        return SpectrumEstimate([], threshold, {"points": 0})
    step = float(np.median(np.diff(grid))) if grid.size > 1 else 1.0
    desc = {"lo": float(grid[0]), "hi": float(grid[-1]), "step": step, "points": int(grid.size), "T": T, "base": base}
    T0 = min(T, math.pi / step)
    ev = _CoeffEvaluator(s, T, base, q)
    coarse = ev(grid, T0)
    mag = np.abs(coarse)
    left = np.concatenate([[-np.inf], mag[:-1]])
    right = np.concatenate([mag[1:], [-np.inf]])
    cand = np.nonzero((mag > threshold) & (mag >= left) & (mag >= right))[0]
    # strongest first; a candidate is refined only if it survives removal of
    # the leakage of lines already accepted, at the coarse and full horizons
    cand = cand[np.argsort(-mag[cand], kind="stable")]
    kept: list = []
    for i in cand:
        if kept:
            leak0 = _trig_coefficients(TrigPoly(kept), grid[i : i + 1], T0, base)[0]
            if abs(coarse[i] - leak0) <= threshold:
                continue
        w = _refine(ev, float(grid[i]), step, T)
        c = complex(ev([w], T)[0])
        if abs(c) <= threshold or any(abs(w - kw) <= step for kw, _ in kept):
            continue
        leak = _trig_coefficients(TrigPoly(kept), np.array([w]), T, base)[0] if kept else 0.0
        if abs(c - leak) > threshold:
            kept.append((w, c))
    kept.sort()
    return SpectrumEstimate(kept, threshold, desc)


@dataclass
class Reconstruction:
    poly: TrigPoly
    sup_err: float


def reconstruct(s: Signal, spec: SpectrumEstimate, window, step: float = 1.0 / 64) -> Reconstruction:
    """Unit-weight Fourier sum over the detected lines and its sup error."""
    poly = spec.poly()
    return Reconstruction(poly, sup_norm(s - poly, window, step))


def totally_ergodic_probe(
    s: Signal,
    omega_set: Sequence[float],
    T_values: Sequence[float] = DEFAULT_T,
    base_points: Sequence[float] = DEFAULT_BASE,
    rtol: float = 1e-2,
    q: QuadratureConfig = DEFAULT_Q,
) -> dict:
    """One :class:`MeanReport` per frequency for ``exp(-i w t) s(t)``."""
    return {float(w): ergodic_mean(s.modulate(-float(w)), T_values, base_points, rtol, q) for w in omega_set}


@dataclass
class BohlBohrReport:
    bounded: bool
    coeff_ratio_err: float
    sup_half: float
    sup_full: float
    note: str = "bounded iff sup|Pf| on [0,T] <= 1.05 * sup|Pf| on [0,T/2]"

    def to_dict(self):
        return dict(self.__dict__)


def bohl_bohr_check(f: TrigPoly, T: float, step: float = 0.05) -> BohlBohrReport:
    f = f.simplified()
    if np.any(f.freqs == 0):
        raise ZeroFrequencyPresent("indefinite integral of a non-zero constant is unbounded")
    Pf = indefinite_integral(f, 0.0)
    sup_half = sup_norm(Pf, (0.0, T / 2), step)
    sup_full = sup_norm(Pf, (0.0, T), step)
    bounded = sup_full <= 1.05 * sup_half
    errs = [abs(bohr_coefficient(Pf, w, T) - a / (1j * w)) for w, a in f.terms]
    return BohlBohrReport(bool(bounded), float(max(errs, default=0.0)), sup_half, sup_full)


@dataclass
class TauberianReport:
    mean: MeanReport
    verdict: str
    classification: object = None

    def to_dict(self):
        return {
            "mean": self.mean.to_dict(),
            "verdict": self.verdict,
            "classification": None if self.classification is None else self.classification.to_dict(),
        }


def tauberian_check(s: Signal, class_tag, T_values=DEFAULT_T, base_points=DEFAULT_BASE, params=None, rtol: float = 1e-2):
    """If ``P s`` has a mean ``m``, classify ``P s - m`` against ``class_tag``."""
    from .membership import ClassifyParams, classify

    params = params or ClassifyParams()
    P = indefinite_integral(s, 0.0, params.q)
    rep = ergodic_mean(P, T_values, base_points, rtol, params.q)
    if not rep.converged:
        return TauberianReport(rep, "inconclusive")
    v = classify(P - rep.value, class_tag, params)
    return TauberianReport(rep, v.verdict, v)
