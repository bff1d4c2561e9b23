"""
Spectrum of a signal relative to a class, probed with a finite bank of
band-pass kernels, and a tapered Fourier estimate of the Beurling support.

A frequency ``w`` stays in the estimate unless some bank kernel with
``|k_hat(w)| >= 0.5`` maps the signal into the class.  With a finite bank the
estimate over-approximates the true relative spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.signal import fftconvolve

from .ergodic import omega_grid_array
from .membership import ClassifyParams, as_tag, classify
from .signals import Grid, Signal, Tabulated, TrigPoly

KHAT_DX = 0.05
PASS_LEVEL = 0.5


def hann(t: np.ndarray, L: float) -> np.ndarray:
    """Raised-cosine window supported on ``[-L/2, L/2]``."""
    t = np.asarray(t, dtype=float)
    return np.where(np.abs(t) <= L / 2, 0.5 * (1.0 + np.cos(2 * np.pi * t / L)), 0.0)


@lru_cache(maxsize=4096)
def _lowpass_hat(dw: float, b: float, L: float) -> complex:
    """Transform of the unmodulated tapered sinc at offset ``dw``."""
    t = np.arange(-L / 2, L / 2 + KHAT_DX / 2, KHAT_DX)
    k = hann(t, L) * (b / np.pi) * np.sinc(b * t / np.pi)
    w = np.full(t.size, KHAT_DX)
    w[0] = w[-1] = 0.5 * KHAT_DX
    return complex((np.exp(-1j * dw * t) * k) @ w)


@dataclass(frozen=True)
class BandKernel:
    """``k(t) = hann_L(t) (b/pi) sinc(b t) exp(i w0 t)``, with ``k_hat`` close to 1 on ``|w - w0| < b``."""

    center: float
    bandwidth: float
    L: float = 400.0

    def __post_init__(self):
        if not (self.bandwidth > 0 and self.L > 0):
            raise ValueError("bandwidth and taper length must be positive")
        if abs(self.hat(self.center) - 1.0) > 0.1:
            raise ValueError(f"kernel too short for bandwidth {self.bandwidth}: k_hat(center) far from 1")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        b = self.bandwidth
        return hann(t, self.L) * (b / np.pi) * np.sinc(b * t / np.pi) * np.exp(1j * self.center * t)

    def hat(self, omega: float) -> complex:
        return _lowpass_hat(round(float(omega) - self.center, 12), self.bandwidth, self.L)

    def apply(self, s: Signal, window, dx: float = KHAT_DX) -> Signal:
        """``s * k`` as a signal on ``window`` (closed form for trigonometric polynomials)."""
        if isinstance(s, TrigPoly):
            return TrigPoly((w, a * self.hat(w)) for w, a in s.terms)
        a, b = float(window[0]), float(window[1])
        half = self.L / 2
        n_k = int(round(half / dx))
        tk = dx * np.arange(-n_k, n_k + 1)
        kv = self(tk) * dx
        kv[0] *= 0.5
        kv[-1] *= 0.5
        n = int(math.ceil((b - a) / dx)) + 1
        ts = a - n_k * dx + dx * np.arange(n + 2 * n_k)
        conv = fftconvolve(s(ts), kv, mode="valid")
        return Tabulated(Grid(a, dx, conv.size), conv)


@dataclass
class SpReport:
    tag: str
    omegas: list
    bank: dict
    kernel_verdicts: dict = field(default_factory=dict)

    def to_dict(self):
        return {"tag": self.tag, "omegas": self.omegas, "bank": self.bank, "kernel_verdicts": self.kernel_verdicts}


def default_sp_params() -> ClassifyParams:
    return ClassifyParams(window=(0.0, 2000.0))


def sp_estimate(
    s: Signal,
    tag,
    omega_grid,
    bandwidths: Sequence[float] = (0.25, 0.55),
    L: float = 400.0,
    params: ClassifyParams | None = None,
) -> SpReport:
    """Frequencies not excluded by any passing bank kernel.

    Bank kernels are centred on the grid lattice, extended past the grid ends
    by the kernel reach.  Each kernel is classified at most once.
    """
    params = params or default_sp_params()
    tag = as_tag(tag)
    grid = omega_grid_array(omega_grid)
    a, b = params.window
    conv_window = (a, b + params.tau_range[1] + max(params.h_samples, default=0) + 1.0)
    cache: dict = {}

    def member(kern: BandKernel) -> bool:
        key = (kern.center, kern.bandwidth)
        if key not in cache:
            cache[key] = classify(kern.apply(s, conv_window), tag, params).verdict
        return cache[key] == "member"

    # kernel centres continue the grid lattice past both ends so edge points
    # can be excluded from either side
    reach = max(bandwidths) + 0.1
    if grid.size > 1:
        st = grid[1] - grid[0]
        n_ext = int(math.ceil(reach / st))
        centres = np.concatenate([grid[0] - st * np.arange(n_ext, 0, -1), grid, grid[-1] + st * np.arange(1, n_ext + 1)])
    else:
        centres = grid
    out = []
    for w in grid:
        excluded = False
        for bw in bandwidths:
            for c in centres[np.abs(centres - w) < bw + 0.1]:
                kern = BandKernel(float(c), bw, L)
                if abs(kern.hat(w)) >= PASS_LEVEL and member(kern):
                    excluded = True
                    break
            if excluded:
                break
        if not excluded:
            out.append(float(w))
    bank = {"bandwidths": list(bandwidths), "L": L, "centers": "grid", "pass_level": PASS_LEVEL}
    verdicts = {f"{c:g}@{bw:g}": v for (c, bw), v in cache.items()}
    return SpReport(str(tag), out, bank, verdicts)


def beurling_support(s: Signal, omega_grid, window, step: float = 1.0 / 16) -> list[tuple[float, float]]:
    """Hann-tapered Fourier magnitudes normalised so a unit character peaks at 1."""
    grid = omega_grid_array(omega_grid)
    a, b = float(window[0]), float(window[1])
    t = Grid.over(a, b, step).times().clip(max=b)
    mid, L = 0.5 * (a + b), b - a
    w = hann(t - mid, L)
    v = s(t) * w
    norm = w.sum()
    out = []
    chunk = max(1, 4_000_000 // t.size)
    for i in range(0, grid.size, chunk):
        g = grid[i : i + chunk]
        mags = np.abs(np.exp(-1j * np.outer(g, t)) @ v) / norm
        out.extend(zip(g.tolist(), mags.tolist()))
    return out


def with_window(params: ClassifyParams, window) -> ClassifyParams:
    return replace(params, window=tuple(window))
