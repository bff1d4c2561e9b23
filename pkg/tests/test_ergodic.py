import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import random_trigpoly, trigpolys
from meanclass.errors import ZeroFrequencyPresent
from meanclass.ergodic import (
    bohl_bohr_check,
    bohr_coefficient,
    bohr_spectrum_scan,
    coefficients,
    ergodic_mean,
    reconstruct,
    tauberian_check,
    totally_ergodic_probe,
)
from meanclass.mean_ops import QuadratureConfig, difference, indefinite_integral
from meanclass.signals import BlockTen, Chirp, FunctionSignal, Grid, LogOsc, TrigPoly, constant, sample, sin_t2, zero

R2 = math.sqrt(2)
TWO_LINES = TrigPoly([(1, 3), (R2, 2)])
GRID = {"lo": -3.0, "hi": 3.0, "step": 0.01}
QUAD = QuadratureConfig(64, exact=False)


def test_mean_of_constant():
    r = ergodic_mean(constant(2.5))
    assert r.value == pytest.approx(2.5) and r.converged
    assert max(r.sup_dev) <= 1e-9


def test_mean_of_character_rate():
    r = ergodic_mean(TrigPoly([(1, 1)]))
    assert abs(r.value) < 1e-3
    for T, d in zip(r.T_values, r.sup_dev):
        assert d <= 2 / T * 1.1


def test_blockten_not_ergodic():
    r = ergodic_mean(BlockTen(), (1e3, 1e4), (0, 3))
    assert not r.converged and r.sup_dev[0] >= 0.3


def test_mean_rejects_bad_schedule():
    with pytest.raises(ValueError):
        ergodic_mean(constant(1), (10, 5))


def test_bohr_coefficient_examples():
    assert abs(bohr_coefficient(TWO_LINES, 1, 1e4) - 3) <= 5e-2
    assert bohr_coefficient(constant(1.5 - 2j), 0, 37.0) == 1.5 - 2j
    assert abs(bohr_coefficient(TrigPoly([(1, 1)]), 2, 1e3)) <= 2 * 1.1 / 1e3


def test_coefficient_against_quad_oracle():
    f = FunctionSignal(lambda t: np.cos(t) * np.exp(-0.01 * t))
    T, w = 50.0, 0.9
    re = quad(lambda t: math.cos(w * t) * math.cos(t) * math.exp(-0.01 * t), 0, T, limit=400)[0]
    im = quad(lambda t: -math.sin(w * t) * math.cos(t) * math.exp(-0.01 * t), 0, T, limit=400)[0]
    got = coefficients(f, [w], T, 0.0, QuadratureConfig(256))[0]
    assert abs(got - (re + 1j * im) / T) < 1e-6


def test_coefficient_paths_agree():
    tab = sample(TWO_LINES, Grid(0, 1 / 32, 32 * 400 + 1))
    ws = np.array([0.0, 1.0, R2, 2.2])
    exact = coefficients(tab, ws, 300.0, 5.0)
    trap = coefficients(tab, ws, 300.0, 5.0, QuadratureConfig(256, exact=False))
    assert np.max(np.abs(exact - trap)) < 1e-4


def test_scan_two_lines():
    spec = bohr_spectrum_scan(TWO_LINES, GRID, 1e4, 0.5)
    assert len(spec.entries) == 2
    (w1, c1), (w2, c2) = spec.entries
    assert abs(w1 - 1) <= 0.01 and abs(c1 - 3) <= 0.05
    assert abs(w2 - R2) <= 0.01 and abs(c2 - 2) <= 0.05


def test_scan_zero_and_chirp_empty():
    assert bohr_spectrum_scan(zero(), GRID, 1e4, 0.1).entries == []
    assert bohr_spectrum_scan(Chirp(1), GRID, 1e4, 0.1).entries == []


def test_totally_ergodic_probe_constant():
    r = totally_ergodic_probe(constant(1), [0, 1])
    assert r[0.0].value == pytest.approx(1)
    assert abs(r[1.0].value) < 1e-3


def test_totally_ergodic_probe_blockten():
    r = totally_ergodic_probe(BlockTen(), [1], (1e3, 1e4, 1e5))
    assert r[1.0].converged and abs(r[1.0].value) <= 0.02


def test_totally_ergodic_probe_sin_t2_difference():
    # Delta_1 sin t^2 is the M_1 proxy of the derivative 2t cos t^2
    r = totally_ergodic_probe(difference(sin_t2(), 1.0), [0.0, 1.0], (1e3, 1e4))
    assert all(abs(m.value) <= 0.05 for m in r.values())


def test_reconstruct():
    spec = bohr_spectrum_scan(TWO_LINES, GRID, 1e4, 0.5)
    assert reconstruct(TWO_LINES, spec, (0, 100)).sup_err <= 0.1
    assert reconstruct(zero(), bohr_spectrum_scan(zero(), GRID, 1e4, 0.1), (0, 100)).sup_err == 0
    b = BlockTen()
    assert reconstruct(b, bohr_spectrum_scan(b, GRID, 1e4, 0.1), (0, 1e4)).sup_err >= 0.4


def test_bohl_bohr():
    r = bohl_bohr_check(TrigPoly([(1, 1)]), 1e4)
    assert r.bounded
    assert abs(bohr_coefficient(indefinite_integral(TrigPoly([(1, 1)])), 1, 1e4) + 1j) <= 1e-3
    assert bohl_bohr_check(TrigPoly([(1, 1), (R2, 1)]), 1e4).coeff_ratio_err <= 1e-2
    with pytest.raises(ZeroFrequencyPresent):
        bohl_bohr_check(constant(1), 100)


def test_tauberian():
    r = tauberian_check(TrigPoly([(1, 0.5), (-1, 0.5)]), "Cub")
    assert abs(r.mean.value) < 1e-2 and r.verdict == "member"
    r = tauberian_check(LogOsc(), "C0")
    assert not r.mean.converged and r.verdict in ("inconclusive", "nonmember")
    assert tauberian_check(zero(), "C0").verdict == "member"


@given(trigpolys, trigpolys, st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3), st.floats(-5, 5))
@settings(max_examples=40, deadline=None)
def test_coefficient_linearity(f, g, a, b, w):
    lhs = bohr_coefficient(a * f + b * g, w, 100.0)
    rhs = a * bohr_coefficient(f, w, 100.0) + b * bohr_coefficient(g, w, 100.0)
    assert abs(lhs - rhs) <= 1e-9 * (1 + np.sum(np.abs(f.amps)) + np.sum(np.abs(g.amps))) * 10


@given(st.floats(0.1, 5))
@settings(max_examples=20, deadline=None)
def test_derivative_has_zero_mean(w):
    T = 1e3
    assert abs(bohr_coefficient(TrigPoly([(w, 1)]).derivative(), 0, T)) <= 2 / T * max(1, w)


def test_derivative_law(rng):
    # finite horizons differ from i w c_w(f) by the boundary term of the integration by parts
    for _ in range(20):
        f = random_trigpoly(rng)
        scale = 1 + np.sum(np.abs(f.amps)) * (1 + np.max(np.abs(f.freqs)))
        for w in f.freqs[:2]:
            T = 500.0
            boundary = (np.exp(-1j * w * T) * f(T) - f(0.0)) / T
            lhs = bohr_coefficient(f.derivative(), w, T)
            assert abs(lhs - 1j * w * bohr_coefficient(f, w, T) - boundary) <= 1e-9 * scale
            assert abs(bohr_coefficient(f.derivative(), w, 1e11) - 1j * w * bohr_coefficient(f, w, 1e11)) <= 1e-9 * scale
            lhs = coefficients(FunctionSignal(f.derivative()), [w], 200.0, 0.0, QUAD)[0]
            rhs = 1j * w * coefficients(FunctionSignal(f), [w], 200.0, 0.0, QUAD)[0]
            assert abs(lhs - rhs - (np.exp(-1j * w * 200.0) * f(200.0) - f(0.0)) / 200.0) <= 1e-3 * scale


def test_mean_shift_invariance():
    f = TrigPoly([(0, 0.7), (1.3, 1), (R2, 2j)])
    a, b = ergodic_mean(f), ergodic_mean(f.shift(3.3))
    assert a.converged and b.converged
    assert abs(a.value - b.value) <= 2 * 1e-2
