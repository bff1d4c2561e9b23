"""
Generators for the counterexample signals and named end-to-end suites.

Suite checks are declared in a fixed order; every check records what was
expected, what was observed and whether it passed.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import DEFAULT_BANK, DistroRep, TestFunction, bank_sup_difference, convolve, distro_derivative, distro_fourier_coeff, distro_mean
from .errors import UnknownName
from .ergodic import bohl_bohr_check, bohr_spectrum_scan, ergodic_mean, reconstruct, totally_ergodic_probe
from .mean_ops import QuadratureConfig, difference, indefinite_integral, iterated_mean, mean_M
from .membership import ClassifyParams, classify, eps_periods
from .norms import sup_norm
from .signals import BlockTen, Chirp, FunctionSignal, LogOsc, PaperSum, Signal, TrigPoly, character, prop38_interval
from .spectrum import sp_estimate

# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

_GEN_DEFAULT_N = {"ex3_5": 10, "prop3_8": 12, "prop3_8_deriv": 12}


def gen(name: str, N: int | None = None, ramp: float = 1.0) -> Signal:
    """Counterexample signals by name.

    ``chirp``: ``exp(i t^2)``.  ``ex3_5``, ``prop3_8`` and ``prop3_8_deriv``:
    truncated series with truncation ``N``.  ``block10``: ramped indicator of
    the even decade blocks.  ``logosc``: ``sin(log(1+t))/(1+t)`` on ``t >= 0``.
    """
    if name == "chirp":
        return Chirp(1.0)
    if name in _GEN_DEFAULT_N:
        return PaperSum(name, _GEN_DEFAULT_N[name] if N is None else int(N))
    if name == "block10":
        return BlockTen(ramp)
    if name == "logosc":
        return LogOsc()
    raise UnknownName(f"unknown generator {name!r}")


GENERATORS = ("chirp", "ex3_5", "prop3_8", "prop3_8_deriv", "block10", "logosc")

_TERM = re.compile(r"([+-]?)\s*([0-9.]+(?:e[+-]?\d+)?j?)?\s*\*?\s*(g|sin|cos)?\s*(-?(?:sqrt[0-9.]+|pi|[0-9.]+(?:e[+-]?\d+)?))?")


def _freq(text: str) -> float:
    if text.startswith("-"):
        return -_freq(text[1:])
    if text.startswith("sqrt"):
        return math.sqrt(float(text[4:]))
    if text == "pi":
        return math.pi
    return float(text)


def parse_trig(expr: str) -> TrigPoly:
    """Parse sums such as ``3g1+2gsqrt2+0.5`` or ``sin1+sinsqrt2``.

    ``g<w>`` is the character ``exp(i w t)``; ``sin<w>``/``cos<w>`` are the
    real sinusoids.  A bare number is a constant.
    """
    src = expr.replace(" ", "")
    if not src:
        raise UnknownName("empty expression")
    terms: list = []
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise UnknownName(f"cannot parse {expr!r} at offset {pos}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = complex(m.group(2)) if m.group(2) else 1.0
        kind, fr = m.group(3), m.group(4)
        if kind is None:
            if m.group(2) is None or fr is not None:
                raise UnknownName(f"cannot parse {expr!r} at offset {pos}")
            terms.append((0.0, sign * coef))
        else:
            if fr is None:
                raise UnknownName(f"missing frequency in {expr!r}")
            w = _freq(fr)
            c = sign * coef
            if kind == "g":
                terms.append((w, c))
            elif kind == "cos":
                terms += [(w, c / 2), (-w, c / 2)]
            else:
                terms += [(w, c / 2j), (-w, -c / 2j)]
        pos = m.end()
    return TrigPoly(terms)


def builtin(name: str, N: int | None = None) -> Signal:
    """A generator name, ``sin`` / ``cos``, or a trigonometric expression."""
    if name in GENERATORS:
        return gen(name, N)
    try:
        return parse_trig({"sin": "sin1", "cos": "cos1"}.get(name, name))
    except UnknownName as exc:
        raise UnknownName(f"unknown builtin {name!r}: not one of {', '.join(GENERATORS)}, sin, cos, nor a trigonometric expression ({exc})") from None


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class Check:
    description: str
    expected: str
    observed: object
    passed: bool

    def to_dict(self):
        obs = self.observed
        if isinstance(obs, complex):
            obs = [obs.real, obs.imag]
        return {"description": self.description, "expected": self.expected, "observed": obs, "pass": bool(self.passed)}


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, description: str, expected: str, observed, passed) -> None:
        self.checks.append(Check(description, expected, observed, bool(passed)))

    def to_dict(self):
        return {"suite": self.suite, "pass": self.passed, "runtime": round(self.runtime, 3), "checks": [c.to_dict() for c in self.checks]}

    def to_text(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.suite} ({self.runtime:.2f} s)"]
        for c in self.checks:
            obs = f"{c.observed:.6g}" if isinstance(c.observed, float) else str(c.observed)
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.description}: expected {c.expected}, observed {obs}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SQ2 = math.sqrt(2.0)


def random_trigpolys(count: int = 20, seed: int = 20240601) -> list[TrigPoly]:
    """Random polynomials with at most 5 terms, ``|w| <= 5`` and ``|a| <= 1``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, 6))
        w = rng.uniform(-5, 5, k)
        a = rng.uniform(0, 1, k) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
        out.append(TrigPoly(zip(w, a)))
    return out


def _opaque(p: TrigPoly) -> Signal:
    """Same values as ``p`` but without closed forms, forcing quadrature."""
    return FunctionSignal(p._eval, label="opaque-trigpoly")


def suite_identities(rep: SuiteReport) -> None:
    polys = random_trigpolys()
    rng = np.random.default_rng(7)
    hk = rng.uniform(0, 5, (len(polys), 2))
    hk[hk == 0] = 5.0
    t = np.linspace(0.0, 10.0, 201)
    dev = {"3.2": 0.0, "comm": 0.0, "5.3": 0.0, "2.8": 0.0}
    for p, (h, k) in zip(polys, hk):
        lhs = mean_M(p, h + k)(t)
        rhs = (h * mean_M(p, h)(t) + k * mean_M(p, k).shift(h)(t)) / (h + k)
        dev["3.2"] = max(dev["3.2"], float(np.max(np.abs(lhs - rhs))))
        dev["comm"] = max(dev["comm"], float(np.max(np.abs(iterated_mean(p, [h, k])(t) - iterated_mean(p, [k, h])(t)))))
        c = mean_M(indefinite_integral(p, 0.0), h)(t) - indefinite_integral(mean_M(p, h), 0.0)(t)
        dev["5.3"] = max(dev["5.3"], float(np.max(np.abs(c - c[0]))))
        dev["2.8"] = max(dev["2.8"], float(np.max(np.abs(difference(indefinite_integral(p, 0.0), h)(t) - h * mean_M(p, h)(t)))))
    for key, label in (("3.2", "semigroup M_{h+k}"), ("comm", "commutation M_h M_k"), ("5.3", "M_h P - P M_h constant"), ("2.8", "Delta_h P = h M_h")):
        rep.add(f"exact path: {label}", "<= 1e-8", dev[key], dev[key] <= 1e-8)

    # quadrature path: the same values with closed forms hidden
    fine = QuadratureConfig(panels_per_unit=8192, exact=False)
    coarse = QuadratureConfig(panels_per_unit=64, exact=False)
    tq = np.linspace(0.0, 10.0, 21)
    qdev = {"3.2": 0.0, "comm": 0.0, "2.8": 0.0}
    for p, (h, k) in zip(polys, hk):
        f = _opaque(p)
        lhs = mean_M(f, h + k, fine)(tq)
        rhs = (h * mean_M(f, h, fine)(tq) + k * mean_M(f, k, fine).shift(h)(tq)) / (h + k)
        qdev["3.2"] = max(qdev["3.2"], float(np.max(np.abs(lhs - rhs))))
        a = iterated_mean(f, [h, k], coarse)(tq[:6])
        b = iterated_mean(f, [k, h], coarse)(tq[:6])
        qdev["comm"] = max(qdev["comm"], float(np.max(np.abs(a - b))))
        # Delta_h P f by the mean rule on [t, t+h] against h M_h f on the same nodes is
        # tautological; compare with the closed-form P instead
        Pf = indefinite_integral(p, 0.0)
        qdev["2.8"] = max(qdev["2.8"], float(np.max(np.abs(difference(Pf, h)(tq) - h * mean_M(f, h, fine)(tq)))))
    for key, label in (("3.2", "semigroup M_{h+k}"), ("comm", "commutation M_h M_k"), ("2.8", "Delta_h P = h M_h")):
        rep.add(f"quadrature path: {label}", "<= 1e-6", qdev[key], qdev[key] <= 1e-6)


def suite_ergodic_rates(rep: SuiteReport) -> None:
    g = character(1.0)
    base = np.array([0.0, 1.0, math.e])
    for T in (1e2, 1e3, 1e4):
        v = float(np.max(np.abs(mean_M(g, T)(base))))
        rep.add(f"sup_x |M_T gamma_1(x)| at T={T:g}", f"<= {2.2 / T:.3g}", v, v <= 2.2 / T)


C3_SIGNAL = "3g1+2gsqrt2+0.5"


def suite_bohr_recovery(rep: SuiteReport) -> None:
    s = parse_trig(C3_SIGNAL)
    spec = bohr_spectrum_scan(s, {"lo": -3.0, "hi": 3.0, "step": 0.01}, 1e4, 0.3)
    for w0, c0 in ((0.0, 0.5), (1.0, 3.0), (SQ2, 2.0)):
        near = [(w, c) for w, c in spec.entries if abs(w - w0) <= 0.01]
        ok = len(near) == 1 and abs(near[0][1] - c0) <= 0.05
        obs = "missing" if not near else f"w={near[0][0]:.5f}, c={near[0][1]:.4f}"
        rep.add(f"line at {w0:.4f}", f"|dw| <= 0.01, |c - {c0}| <= 0.05", obs, ok)
    rep.add("no spurious lines above 0.3", "3 entries", len(spec.entries), len(spec.entries) == 3)
    err = reconstruct(s, spec, (0.0, 100.0)).sup_err
    rep.add("reconstruction sup error on [0,100]", "<= 0.1", err, err <= 0.1)


def suite_chirp(rep: SuiteReport) -> None:
    ch = Chirp(1.0)
    t = np.arange(10.0, 100.0 + 1e-9, 1.0 / 64)
    v = float(np.max(t * np.abs(mean_M(ch, 1.0)(t))))
    rep.add("sup_{[10,100]} t |M_1 chirp(t)|", "<= 2", v, v <= 2.0)
    spec = bohr_spectrum_scan(ch, {"lo": -3.0, "hi": 3.0, "step": 0.01}, 1e4, 0.1)
    rep.add("Bohr scan of chirp, threshold 0.1", "empty", len(spec.entries), len(spec.entries) == 0)
    sup = sup_norm(ch, (10.0, 100.0))
    rep.add("sup |chirp| (does not tend to 0)", "= 1 within 1e-12", sup, abs(sup - 1.0) <= 1e-12)


def suite_ergodic_separation(rep: SuiteReport) -> None:
    f = gen("block10")
    mr = ergodic_mean(f, (1e3, 1e4), (0.0, 3.0))
    rep.add("block10 mean converged", "false", mr.converged, not mr.converged)
    dev = max(mr.sup_dev)
    rep.add("block10 sup_dev across T in {1e3, 1e4}", ">= 0.3", dev, dev >= 0.3)
    probes = totally_ergodic_probe(f, (1.0, SQ2), (1e4, 1e5), (0.0, 1.0, math.e))
    for w, r in probes.items():
        rep.add(f"gamma_-{w:.4f} block10 converged", "true", r.converged, r.converged)
        rep.add(f"|mean of gamma_-{w:.4f} block10| at T=1e5", "<= 0.02", abs(r.value), abs(r.value) <= 0.02)


def suite_bohl_bohr(rep: SuiteReport) -> None:
    r = bohl_bohr_check(TrigPoly([(1.0, 1.0), (SQ2, 1.0)]), 1e4)
    rep.add("P(gamma_1 + gamma_sqrt2) bounded", "true", r.bounded, r.bounded)
    rep.add("max |c_w(Pf) - a/(i w)| at T=1e4", "<= 1e-2", r.coeff_ratio_err, r.coeff_ratio_err <= 1e-2)


def suite_tauberian(rep: SuiteReport) -> None:
    psi = LogOsc()
    t = np.linspace(0.0, 1e4, 200001)
    ref = 1.0 - np.cos(np.log1p(t))
    e1 = float(np.max(np.abs(indefinite_integral(psi, 0.0)(t) - ref)))
    rep.add("P psi = 1 - cos log(1+t) on [0,1e4], exact path", "<= 1e-6", e1, e1 <= 1e-6)
    q = QuadratureConfig(panels_per_unit=512, exact=False)
    ts = t[::100]
    e2 = float(np.max(np.abs(indefinite_integral(psi, 0.0, q)(ts) - ref[::100])))
    rep.add("P psi = 1 - cos log(1+t) on [0,1e4], trapezoid path", "<= 1e-6", e2, e2 <= 1e-6)
    tl = np.expm1(np.linspace(0.0, 4 * math.pi, 40001))
    P = indefinite_integral(psi, 0.0)(tl).real
    osc = float(P.max() - P.min())
    rep.add("max - min of P psi on [0, e^{4 pi}]", ">= 1.99", osc, osc >= 1.99)
    sp = sp_estimate(psi, "C0", {"lo": -5.0, "hi": 5.0, "step": 0.1})
    rep.add("sp_C0(psi) on [-5,5] step 0.1", "empty", len(sp.omegas), len(sp.omegas) == 0)


def suite_distributions(rep: SuiteReport) -> None:
    cos = parse_trig("cos1")
    sin = parse_trig("sin1")
    d = bank_sup_difference(DistroRep([(cos, 0)]), DistroRep([(sin, 1)]), (0.0, 50.0))
    rep.add("[(cos,0)] vs [(sin,1)] over the bank", "<= 1e-7", d, d <= 1e-7)
    # same comparison through the quadrature convolution
    d2 = bank_sup_difference(
        DistroRep([(FunctionSignal(np.cos, label="cos"), 0)]), DistroRep([(FunctionSignal(np.sin, label="sin"), 1)]), (0.0, 20.0)
    )
    rep.add("[(cos,0)] vs [(sin,1)], sampled bases", "<= 1e-7", d2, d2 <= 1e-7)
    T = DistroRep([(character(1.0), 1)])
    phi = TestFunction()
    Th = 1e4
    c1 = distro_fourier_coeff(T, 1.0, phi, Th)
    rep.add("c_1 of gamma_1'", "i within 5e-2", c1, abs(c1 - 1j) <= 5e-2)
    c0 = abs(distro_fourier_coeff(T, 0.0, phi, Th))
    rep.add("|c_0 of gamma_1'|", f"<= 2/T = {2 / Th:g}", c0, c0 <= 2 / Th)
    worst = 0.0
    for base in (character(1.0), parse_trig("0.5g-2+g0.3"), FunctionSignal(lambda x: np.cos(x) * np.sin(SQ2 * x), label="cos*sin")):
        R = DistroRep([(base, 0)])
        for h in (0.7, SQ2):
            for ph in DEFAULT_BANK:
                a = convolve(distro_mean(distro_derivative(R), h), ph)
                b = convolve(distro_derivative(distro_mean(R, h)), ph)
                worst = max(worst, sup_norm(a - b, (0.0, 20.0), 1.0 / 8))
    rep.add("distro_mean and distro_derivative commute", "<= 1e-7", worst, worst <= 1e-7)


def suite_hierarchy(rep: SuiteReport) -> None:
    N = 12
    f = gen("prop3_8", N)
    rep.add("declared tail bound", f"<= 2^-{N}", f.tail_bound, f.tail_bound <= 2.0**-N)
    t = np.arange(0.0, 50.0, 2.0**-15)
    tail = float(np.max(np.abs(PaperSum("prop3_8", 24)(t) - f(t))))
    rep.add("sup |f_24 - f_12| on [0,50] (tail oracle)", f"<= 2^-{N}", tail, tail <= 2.0**-N)
    v = classify(f, "AP", ClassifyParams(epsilon=0.05))
    rep.add("AP verdict of prop3_8", "member", v.verdict, v.member)
    g = gen("prop3_8_deriv", N)
    sup = sup_norm(g, (0.0, 50.0), 2.0**-15)
    rep.add("sup |f'| on [0,50]", f"<= 1 + 2^-{N}", sup, sup <= 1 + 2.0**-N)
    worst, gap = math.inf, math.inf
    for n in range(1, N + 1):
        a, b = prop38_interval(n)
        L = b - a
        s0 = n + a + L / 4
        s1 = s0 + L / 2
        worst = min(worst, abs(g(s0) - g(s1)))
        if n == N:
            gap = s1 - s0
    rep.add(f"oscillation witnesses |f'(s)-f'(t)| at |s-t| = 2^-(n+1), n <= {N}", ">= 1.9", worst, worst >= 1.9)
    rep.add(f"witness spacing |s-t| for n = {N}", f"<= 2^-{N + 1}", gap, gap <= 2.0 ** -(N + 1))


def _c10_signal() -> TrigPoly:
    return parse_trig("sin1+sinsqrt2")


def suite_eps_periods(rep: SuiteReport) -> None:
    kw = dict(tau_range=(0.0, 500.0), window=(0.0, 200.0), tau_step=0.01, dt=0.05)
    r = eps_periods(_c10_signal(), 0.2, **kw)
    rep.add("sin t + sin sqrt2 t relatively dense", "true", r.relatively_dense, r.relatively_dense)
    il = r.inclusion_length
    rep.add("sin t + sin sqrt2 t inclusion length", "<= 40", il, il is not None and il <= 40)
    rc = eps_periods(Chirp(1.0), 0.2, **kw)
    rep.add("chirp relatively dense", "false", rc.relatively_dense, not rc.relatively_dense)


def c11_signals() -> dict:
    return {
        "sin": parse_trig("sin1"),
        C3_SIGNAL: parse_trig(C3_SIGNAL),
        "ex3_5(N=10)": gen("ex3_5", 10),
        "prop3_8(N=12)": gen("prop3_8", 12),
        "chirp": gen("chirp"),
    }


def suite_ma_nesting(rep: SuiteReport) -> None:
    params = ClassifyParams()
    members = 0
    for name, s in c11_signals().items():
        v1 = classify(s, "MA(AP,1)", params)
        if v1.member:
            members += 1
            v2 = classify(s, "MA(AP,2)", params)
            rep.add(f"{name}: MA(AP,1) member implies MA(AP,2) member", "member", v2.verdict, v2.member)
        else:
            rep.add(f"{name}: MA(AP,1) verdict (implication vacuous)", "any", v1.verdict, True)
    rep.add("suite set has MA(AP,1) members", ">= 1", members, members >= 1)


SUITES: dict[str, tuple[str, Callable[[SuiteReport], None]]] = {
    "identities": ("C1", suite_identities),
    "ergodic_rates": ("C2", suite_ergodic_rates),
    "bohr_recovery": ("C3", suite_bohr_recovery),
    "chirp_orthogonality": ("C4", suite_chirp),
    "ergodic_separation": ("C5", suite_ergodic_separation),
    "bohl_bohr": ("C6", suite_bohl_bohr),
    "tauberian": ("C7", suite_tauberian),
    "distributions": ("C8", suite_distributions),
    "hierarchy": ("C9", suite_hierarchy),
    "eps_periods": ("C10", suite_eps_periods),
    "ma_nesting": ("C11", suite_ma_nesting),
}
_ALIASES = {code: name for name, (code, _) in SUITES.items()}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str) -> SuiteReport:
    """Run one named suite (or its ``C<k>`` alias)."""
    key = _ALIASES.get(name, name)
    if key not in SUITES:
        raise UnknownName(f"unknown suite {name!r}")
    rep = SuiteReport(key)
    t0 = time.perf_counter()
    SUITES[key][1](rep)
    rep.runtime = time.perf_counter() - t0
    return rep


def run_suites(name: str) -> list[SuiteReport]:
    """``all`` or a single suite."""
    if name == "all":
        return [run_suite(n) for n in SUITES]
    return [run_suite(name)]
