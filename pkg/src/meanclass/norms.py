"""
Sup norm, Stepanoff / Weyl / Besicovitch seminorms, the ``||.||_u`` norm and
weight-envelope checks.  Outer suprema are taken over a uniform grid; inner
integrals use a cumulative trapezoid rule on the same grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BadP, DomainNotSymmetric, EmptyWindow, NonPositiveL
from .signals import Grid, Signal

DEFAULT_STEP = 1.0 / 64


@dataclass(frozen=True)
class SeminormSchedule:
    """Finite stand-in for the limits ``l -> inf`` / ``T -> inf``."""

    window: tuple[float, float]
    values: tuple[float, ...]
    sup_step: float = DEFAULT_STEP

    def __post_init__(self):
        a, b = self.window
        if not (math.isfinite(a) and math.isfinite(b) and b >= a):
            raise EmptyWindow(f"bad window {self.window}")
        v = np.asarray(self.values, dtype=float)
        if v.size == 0 or np.any(v <= 0) or np.any(np.diff(v) <= 0):
            raise ValueError("schedule values must be positive and strictly increasing")
        if not self.sup_step > 0:
            raise ValueError("sup_step must be positive")


@dataclass
class NormReport:
    norm: str
    params: dict
    value: float
    series: list = field(default_factory=list)
    converged: bool | None = None

    def to_dict(self) -> dict:
        d = {"norm": self.norm, "params": self.params, "value": self.value, "series": self.series}
        if self.converged is not None:
            d["converged"] = self.converged
        return d


def _window_grid(window, step) -> np.ndarray:
    a, b = float(window[0]), float(window[1])
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise EmptyWindow(f"empty window [{a}, {b}]")
    return Grid.over(a, b, step).times().clip(max=b) if b > a else np.array([a])


def sup_norm(s: Signal, window, step: float = DEFAULT_STEP) -> float:
    """``max |s|`` over the window grid."""
    t = _window_grid(window, step)
    return float(np.max(np.abs(s(t))))


def _check_p(p):
    if not (p >= 1 and math.isfinite(p)):
        raise BadP(f"exponent must satisfy 1 <= p < inf, got {p}")


def _local_means(s: Signal, p: float, lengths: Sequence[float], window, step: float) -> np.ndarray:
    """``[(1/l) int_x^{x+l} |s|^p]^{1/p}`` for each l (rows) and grid x (columns)."""
    a, b = float(window[0]), float(window[1])
    xs = _window_grid(window, step)
    lmax = max(lengths)
    nodes = Grid.over(a, b + lmax, step).times()
    vals = np.abs(s(nodes)) ** p
    cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(nodes) * (vals[1:] + vals[:-1]))])
    rows = []
    for L in lengths:
        upper = np.interp(xs + L, nodes, cum)
        lower = np.interp(xs, nodes, cum)
        rows.append(np.maximum((upper - lower) / L, 0.0) ** (1.0 / p))
    return np.array(rows)


def stepanoff(s: Signal, p: float, l: float, window, step: float = DEFAULT_STEP) -> float:
    """``sup_x [ (1/l) int_x^{x+l} |s|^p ]^{1/p}`` with x on the window grid."""
    _check_p(p)
    if not l > 0:
        raise NonPositiveL(f"Stepanoff length must be positive, got {l}")
    return float(_local_means(s, p, [l], window, step)[0].max())


def weyl(s: Signal, p: float, schedule: SeminormSchedule, rtol: float = 1e-2) -> NormReport:
    """Stepanoff norms along ``schedule.values``; the estimate is the last one.

    ``converged`` is a Cauchy test on the last two values only; it cannot
    certify that the limit exists.
    """
    _check_p(p)
    per_l = _local_means(s, p, schedule.values, schedule.window, schedule.sup_step).max(axis=1)
    est = float(per_l[-1])
    if per_l.size >= 2:
        converged = abs(per_l[-1] - per_l[-2]) <= rtol * max(abs(per_l[-1]), abs(per_l[-2]), 1e-300)
    else:
        converged = False
    return NormReport(
        "weyl",
        {"p": p, "l_values": list(schedule.values), "window": list(schedule.window), "rtol": rtol},
        est,
        [float(v) for v in per_l],
        bool(converged),
    )


def besicovitch(s: Signal, p: float, T_values: Sequence[float], step: float = DEFAULT_STEP) -> NormReport:
    """``[(1/2T) int_{-T}^{T} |s|^p]^{1/p}`` per T; estimate = max over the tail half."""
    _check_p(p)
    Ts = np.asarray(T_values, dtype=float)
    if Ts.size == 0 or np.any(Ts <= 0) or np.any(np.diff(Ts) <= 0):
        raise ValueError("T values must be positive and increasing")
    lo, hi = s.domain
    Tm = float(Ts[-1])
    if lo > -Tm or hi < Tm:
        raise DomainNotSymmetric(f"signal domain [{lo}, {hi}] does not contain [-{Tm}, {Tm}]")
    nodes = Grid.over(-Tm, Tm, step).times()
    vals = np.abs(s(nodes)) ** p
    cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(nodes) * (vals[1:] + vals[:-1]))])
    per_T = (np.interp(Ts, nodes, cum) - np.interp(-Ts, nodes, cum)) / (2 * Ts)
    per_T = np.maximum(per_T, 0.0) ** (1.0 / p)
    tail = per_T[len(per_T) // 2 :]
    return NormReport("besicovitch", {"p": p, "T_values": Ts.tolist()}, float(tail.max()), per_T.tolist())


def u_norm(s: Signal, window, step: float = DEFAULT_STEP) -> float:
    """``||s/w||_inf + sup_{h in [0,1]} ||s - s_h||_inf`` with ``w(t) = 1 + |t|``."""
    x = _window_grid(window, step)
    v = s(x)
    weighted = float(np.max(np.abs(v) / (1.0 + np.abs(x))))
    shifts = Grid.over(0.0, 1.0, step).times().clip(max=1.0)
    worst = 0.0
    for h in shifts:
        worst = max(worst, float(np.max(np.abs(s(x + h) - v))))
    return weighted + worst


@dataclass
class EnvelopeResult:
    m: int | None
    holds: bool


def envelope_check(s: Signal, w: Signal, window, step: float = DEFAULT_STEP, m_max: int = 64) -> EnvelopeResult:
    """Smallest integer ``m <= m_max`` with ``|s| <= m w`` on ``|t| >= m``.

    Only ``m`` whose tail set ``{|t| >= m}`` meets the window count; a vacuous
    tail certifies nothing.
    """
    x = _window_grid(window, step)
    sv = np.abs(s(x))
    wv = w(x)
    if np.any(np.abs(wv.imag) > 1e-12) or np.any(wv.real <= 0):
        raise ValueError("weight must be real and positive on the window")
    wv = wv.real
    ax = np.abs(x)
    for m in range(1, m_max + 1):
        tail = ax >= m
        if not tail.any():
            break
        if np.all(sv[tail] <= m * wv[tail] * (1 + 1e-12)):
            return EnvelopeResult(m, True)
    return EnvelopeResult(None, False)
