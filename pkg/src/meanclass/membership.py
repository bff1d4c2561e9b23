"""
Approximate class-membership verdicts, Bohr epsilon-periods and the (Delta)
probe.

Every verdict is relative to a finite window and finite schedules.  A verdict
is ``member`` when ``score <= threshold``, ``nonmember`` when
``score >= 2 * threshold`` and ``inconclusive`` in between.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import minimum_filter1d

from .errors import EmptyRange, UnsupportedTag
from .ergodic import bohr_spectrum_scan, ergodic_mean
from .mean_ops import DEFAULT_Q, QuadratureConfig, difference, mean_M
from .norms import stepanoff, sup_norm
from .signals import Chirp, Product, Signal, TrigPoly

# ---------------------------------------------------------------------------
# class tags
# ---------------------------------------------------------------------------

_SIMPLE = ("AP", "C0", "Cub", "E", "E0", "AAP", "APChirp")


@dataclass(frozen=True)
class ClassTag:
    """Class selector.

    ``name`` is one of ``AP``, ``SpAP``, ``C0``, ``Cub``, ``E``, ``E0``,
    ``TE``, ``AAP``, ``MA`` and ``APChirp``.  ``APChirp`` tests ``s(t)
    exp(-i t^2)`` against ``AP``; it is the chirp-modulated surrogate used by
    the (Delta) probe.
    """

    name: str
    p: float | None = None
    omegas: tuple = ()
    inner: "ClassTag | None" = None
    n: int = 0

    def __post_init__(self):
        if self.name == "SpAP" and not (self.p is not None and self.p >= 1):
            raise UnsupportedTag("SpAP needs p >= 1")
        if self.name == "MA" and (self.inner is None or self.n < 0):
            raise UnsupportedTag("MA needs an inner tag and n >= 0")
        if self.name == "TE" and not self.omegas:
            raise UnsupportedTag("TE needs at least one frequency")
        if self.name not in _SIMPLE + ("SpAP", "TE", "MA"):
            raise UnsupportedTag(f"unknown class tag {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "ClassTag":
        """Parse ``AP``, ``SpAP(1)``, ``TE(1,1.4142)``, ``MA(AP,2)`` and friends."""
        text = text.strip()
        m = re.fullmatch(r"(\w+)\s*(?:\((.*)\))?", text)
        if not m:
            raise UnsupportedTag(f"cannot parse class tag {text!r}")
        name, args = m.group(1), m.group(2)
        if args is None:
            if name not in _SIMPLE:
                raise UnsupportedTag(f"class tag {name!r} needs arguments" if name in ("SpAP", "TE", "MA") else f"unknown class tag {name!r}")
            return cls(name)
        if name == "SpAP":
            return cls("SpAP", p=_num(args))
        if name == "TE":
            return cls("TE", omegas=tuple(_num(a) for a in args.split(",") if a.strip()))
        if name == "MA":
            head, _, n = args.rpartition(",")
            if not head:
                raise UnsupportedTag(f"MA needs (inner, n), got {text!r}")
            return cls("MA", inner=cls.parse(head), n=int(n))
        raise UnsupportedTag(f"class tag {name!r} takes no arguments")

    def __str__(self):
        if self.name == "SpAP":
            return f"SpAP({self.p:g})"
        if self.name == "TE":
            return "TE(" + ",".join(f"{w:g}" for w in self.omegas) + ")"
        if self.name == "MA":
            return f"MA({self.inner},{self.n})"
        return self.name


def _num(text: str) -> float:
    text = text.strip()
    if text.startswith("sqrt"):
        return math.sqrt(float(text[4:]))
    return float(text)


def as_tag(tag) -> ClassTag:
    return tag if isinstance(tag, ClassTag) else ClassTag.parse(str(tag))


# ---------------------------------------------------------------------------
# parameters and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifyParams:
    """Windows, schedules and thresholds shared by every verdict."""

    window: tuple = (0.0, 200.0)
    dt: float = 1.0 / 32
    epsilon: float = 0.05
    tau_range: tuple = (0.0, 1000.0)
    tau_step: float = 1.0 / 8
    density_fraction: float = 0.25
    thresholds: dict = field(
        default_factory=lambda: {"AP": 0.1, "SpAP": 0.1, "C0": 0.05, "Cub": 0.1, "E": 1e-2, "E0": 1e-2, "TE": 1e-2, "AAP": 0.05}
    )
    cub_delta: float = 1e-3
    h_samples: tuple = (0.7, 1.0, math.sqrt(2.0))
    T_values: tuple = (1e2, 1e3, 1e4)
    base_points: tuple = (0.0, 1.0, math.e)
    rtol: float = 1e-2
    omega_grid: dict = field(default_factory=lambda: {"lo": -5.0, "hi": 5.0, "step": 0.01})
    spectrum_T: float = 1e4
    spectrum_threshold: float = 0.02
    q: QuadratureConfig = DEFAULT_Q

    def threshold(self, tag: ClassTag) -> float:
        if tag.name == "MA":
            return self.threshold(tag.inner)
        if tag.name == "APChirp":
            return self.thresholds["AP"]
        return float(self.thresholds[tag.name])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q"] = {"panels_per_unit": self.q.panels_per_unit, "exact": self.q.exact}
        return d


@dataclass
class EpsPeriodReport:
    epsilon: float
    tau_range: tuple
    periods: np.ndarray
    inclusion_length: float | None
    relatively_dense: bool
    window: tuple = ()

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "tau_range": list(self.tau_range),
            "window": list(self.window),
            "n_periods": int(self.periods.size),
            "periods_head": self.periods[:20].tolist(),
            "inclusion_length": self.inclusion_length,
            "relatively_dense": self.relatively_dense,
        }


@dataclass
class ClassVerdict:
    tag: ClassTag
    score: float
    threshold: float
    verdict: str
    evidence: dict = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return self.verdict == "member"

    def to_dict(self) -> dict:
        return {"tag": str(self.tag), "score": self.score, "threshold": self.threshold, "verdict": self.verdict, "evidence": self.evidence}


def verdict_for(score: float, threshold: float) -> str:
    if score <= threshold:
        return "member"
    if score >= 2.0 * threshold:
        return "nonmember"
    return "inconclusive"


# ---------------------------------------------------------------------------
# epsilon-periods
# ---------------------------------------------------------------------------


def _grid_points(a: float, b: float, step: float) -> np.ndarray:
    n = int(math.floor((b - a) / step + 1e-9))
    return a + step * np.arange(n + 1)


def translation_sup(s: Signal, taus: np.ndarray, window, dt: float) -> np.ndarray:
    """``d(tau) = max_t |s(t + tau) - s(t)|`` with ``t`` on the window grid.

    When the tau step and ``dt`` are commensurate the signal is sampled once
    on a common fine grid and differences are index shifts.
    """
    a, b = float(window[0]), float(window[1])
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        return np.zeros(0)
    tstep = float(taus[1] - taus[0]) if taus.size > 1 else dt
    fine = min(dt, tstep)
    ratios = np.array([dt, tstep, taus[0]]) / fine
    if np.all(np.abs(ratios - np.round(ratios)) < 1e-9):
        wstride, tstride = int(round(ratios[0])), int(round(ratios[1]))
    else:
        fine = None
    out = np.empty(taus.size)
    if fine is not None:
        k0 = int(round(taus[0] / fine))
        nw = int(math.floor((b - a) / dt + 1e-9)) + 1
        total = (nw - 1) * wstride + k0 + (taus.size - 1) * tstride + 1
        v = s(a + fine * np.arange(total))
        # squared moduli on split real/imag parts avoid complex temporaries
        parts = [v.real.copy()] + ([v.imag.copy()] if np.any(v.imag) else [])
        span = (nw - 1) * wstride + 1
        views = [(sliding_window_view(x, span)[:, ::wstride], x[:span:wstride]) for x in parts]
        chunk = max(1, 4_000_000 // nw)
        for i in range(0, taus.size, chunk):
            ks = k0 + tstride * np.arange(i, min(i + chunk, taus.size))
            acc = None
            for W, base in views:
                d = W[ks]
                d -= base
                d *= d
                acc = d if acc is None else np.add(acc, d, out=acc)
            out[i : i + ks.size] = np.sqrt(acc.max(axis=1))
        return out
    t = _grid_points(a, b, dt)
    base = s(t)
    chunk = max(1, 2_000_000 // t.size)
    for i in range(0, taus.size, chunk):
        tt = taus[i : i + chunk]
        out[i : i + tt.size] = np.abs(s(t[None, :] + tt[:, None]) - base[None, :]).max(axis=1)
    return out


def _tau_grid(tau_range, tau_step) -> np.ndarray:
    lo, hi = float(tau_range[0]), float(tau_range[1])
    if not (hi > lo and tau_step > 0):
        raise EmptyRange(f"empty tau range [{lo}, {hi}] or step {tau_step}")
    return _grid_points(lo, hi, tau_step)


def inclusion_length(periods: np.ndarray, tau_range) -> float | None:
    """Smallest ``l`` with every ``[t, t+l]`` inside ``tau_range`` meeting ``periods``."""
    if periods.size == 0:
        return None
    lo, hi = float(tau_range[0]), float(tau_range[1])
    pts = np.concatenate([[lo], periods, [hi]]) if periods[0] > lo else np.concatenate([periods, [hi]])
    return float(np.max(np.diff(pts))) if pts.size > 1 else 0.0


def eps_periods(
    s: Signal, eps: float, tau_range, window, tau_step: float, dt: float | None = None, density_fraction: float = 0.25
) -> EpsPeriodReport:
    """Epsilon-periods on a tau grid.

    ``relatively_dense`` means the inclusion length is at most
    ``density_fraction`` of the tau range; on a finite range every non-empty
    set has some inclusion length, so density needs a scale.
    """
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    taus = _tau_grid(tau_range, tau_step)
    d = translation_sup(s, taus, window, tau_step if dt is None else dt)
    periods = taus[d <= eps]
    incl = inclusion_length(periods, tau_range)
    L = float(tau_range[1] - tau_range[0])
    dense = incl is not None and incl <= density_fraction * L
    return EpsPeriodReport(eps, tuple(tau_range), periods, incl, bool(dense), tuple(window))


def density_score(d: np.ndarray, tau_step: float, span: float) -> float:
    """Smallest epsilon whose period set meets every tau-window of length ``span``."""
    w = int(math.floor(span / tau_step + 1e-9)) + 1
    w = min(w, d.size)
    mins = minimum_filter1d(d, size=w, origin=-(w // 2), mode="nearest")[: d.size - w + 1]
    return float(mins.max())


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _recon(s: Signal, params: ClassifyParams):
    from .ergodic import reconstruct

    spec = bohr_spectrum_scan(s, params.omega_grid, params.spectrum_T, params.spectrum_threshold, params.window[0], params.q)
    return spec, reconstruct(s, spec, params.window, params.dt)


def _score_AP(s: Signal, params: ClassifyParams, thr: float):
    taus = _tau_grid(params.tau_range, params.tau_step)
    d = translation_sup(s, taus, params.window, params.dt)
    L = params.tau_range[1] - params.tau_range[0]
    dens = density_score(d, params.tau_step, params.density_fraction * L)
    periods = taus[d <= params.epsilon]
    incl = inclusion_length(periods, params.tau_range)
    ev = {
        "density_score": dens,
        "eps_periods": {
            "epsilon": params.epsilon,
            "n_periods": int(periods.size),
            "inclusion_length": incl,
            "relatively_dense": bool(incl is not None and incl <= params.density_fraction * L),
        },
    }
    score = dens
    if dens > thr:
        spec, rec = _recon(s, params)
        ev["reconstruction"] = {"lines": len(spec.entries), "sup_err": rec.sup_err}
        score = min(dens, rec.sup_err)
    return score, ev


def _ergodic_score(s: Signal, params: ClassifyParams):
    rep = ergodic_mean(s, params.T_values, params.base_points, params.rtol, params.q)
    score = max(rep.sup_dev[-2:]) / (1.0 + abs(rep.value))
    return score, rep


def classify(s: Signal, tag, params: ClassifyParams | None = None) -> ClassVerdict:
    """Window-relative membership verdict of ``s`` in the class ``tag``."""
    params = params or ClassifyParams()
    tag = as_tag(tag)
    thr = params.threshold(tag)
    name = tag.name
    ev: dict = {}
    if name == "AP" and isinstance(s, TrigPoly) and params.q.exact:
        # finite trigonometric sums are almost periodic by definition
        score, ev = 0.0, {"closed_form": "trigonometric polynomial", "lines": len(s.terms)}
    elif name == "AP":
        score, ev = _score_AP(s, params, thr)
    elif name == "APChirp":
        score, ev = _score_AP(Product(s, Chirp(1.0, -1.0)), params, thr)
    elif name == "SpAP":
        spec, rec = _recon(s, params)
        score = stepanoff(s - rec.poly, tag.p, 1.0, params.window, params.dt)
        ev = {"lines": len(spec.entries), "stepanoff_l": 1.0, "sup_err": rec.sup_err}
    elif name == "C0":
        a, b = params.window
        score = sup_norm(s, (b - 0.25 * (b - a), b), params.dt)
        ev = {"tail_window": [b - 0.25 * (b - a), b]}
    elif name == "Cub":
        score = sup_norm(difference(s, params.cub_delta), params.window, params.dt)
        ev = {"delta": params.cub_delta}
    elif name in ("E", "E0"):
        score, rep = _ergodic_score(s, params)
        if name == "E0":
            score = max(score, abs(rep.value))
        ev = {"mean": rep.to_dict()}
    elif name == "TE":
        probes = {}
        score = 0.0
        for w in tag.omegas:
            sc, rep = _ergodic_score(s.modulate(-w), params)
            probes[f"{w:g}"] = rep.to_dict()
            score = max(score, sc)
        ev = {"probes": probes}
    elif name == "AAP":
        spec, rec = _recon(s, params)
        a, b = params.window
        score = sup_norm(s - rec.poly, (b - 0.25 * (b - a), b), params.dt)
        ev = {"lines": len(spec.entries), "remainder_tail_sup": score}
    elif name == "MA":
        if tag.n == 0:
            inner = classify(s, tag.inner, params)
            return ClassVerdict(tag, inner.score, thr, inner.verdict, {"inner": inner.to_dict()})
        sub = ClassTag("MA", inner=tag.inner, n=tag.n - 1)
        per_h = {}
        score = 0.0
        for h in params.h_samples:
            v = classify(mean_M(s, h, params.q), sub, params)
            per_h[f"{h:g}"] = {"score": v.score, "verdict": v.verdict}
            score = max(score, v.score)
        ev = {"per_h": per_h}
    else:  # pragma: no cover - guarded by ClassTag
        raise UnsupportedTag(name)
    score = float(score)
    return ClassVerdict(tag, score, thr, verdict_for(score, thr), ev)


# ---------------------------------------------------------------------------
# (Delta) probe
# ---------------------------------------------------------------------------


@dataclass
class DeltaProbeReport:
    tag: str
    differences: dict
    residuals: dict
    consistent: bool

    def to_dict(self) -> dict:
        return asdict(self)


def delta_probe(
    s: Signal, tag, s_samples: Sequence[float] = (0.5, 1.0, math.sqrt(2.0)), h_samples: Sequence[float] | None = None, params: ClassifyParams | None = None
) -> DeltaProbeReport:
    """Empirical check of "all differences in A implies all ``s - M_h s`` in A".

    Consistent unless every sampled difference is a member while some
    sampled residual is not.
    """
    params = params or ClassifyParams()
    tag = as_tag(tag)
    hs = params.h_samples if h_samples is None else tuple(h_samples)
    if any(not x > 0 for x in tuple(s_samples) + tuple(hs)):
        raise ValueError("probe samples must be positive")
    diffs = {f"{x:g}": classify(difference(s, x), tag, params).verdict for x in s_samples}
    res = {f"{h:g}": classify(s - mean_M(s, h, params.q), tag, params).verdict for h in hs}
    all_d = all(v == "member" for v in diffs.values())
    all_r = all(v == "member" for v in res.values())
    return DeltaProbeReport(str(tag), diffs, res, bool((not all_d) or all_r))


def with_params(params: ClassifyParams, **kw) -> ClassifyParams:
    return replace(params, **kw)
