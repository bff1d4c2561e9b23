import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanclass.errors import EmptyRange, UnsupportedTag
from meanclass.mean_ops import indefinite_integral
from meanclass.membership import (
    ClassifyParams,
    ClassTag,
    classify,
    delta_probe,
    eps_periods,
    inclusion_length,
    translation_sup,
    verdict_for,
)
from meanclass.signals import BlockTen, Chirp, FunctionSignal, TrigPoly, constant
from meanclass.verification import gen

SIN = TrigPoly([(1, -0.5j), (-1, 0.5j)])
R2 = math.sqrt(2)


def test_tag_parse_roundtrip():
    for text in ("AP", "SpAP(1)", "TE(1,1.5)", "MA(AP,2)", "MA(MA(C0,1),1)", "APChirp"):
        assert str(ClassTag.parse(text)) == text
    assert ClassTag.parse("TE(1,sqrt2)").omegas == (1.0, R2)


@pytest.mark.parametrize("text", ["SpAP(0.5)", "MA(AP,-1)", "TE()", "Foo", "SpAP", "AP(1)"])
def test_tag_rejects(text):
    with pytest.raises(UnsupportedTag):
        ClassTag.parse(text)


def test_verdict_hysteresis():
    assert verdict_for(0.1, 0.1) == "member"
    assert verdict_for(0.15, 0.1) == "inconclusive"
    assert verdict_for(0.2, 0.1) == "nonmember"


def test_translation_sup_against_brute_force():
    f = FunctionSignal(lambda t: np.sin(t) + 0.5 * np.cos(R2 * t))
    taus = np.arange(0, 20, 0.25)
    t = np.arange(0, 30 + 1e-9, 1 / 16)
    want = [np.max(np.abs(f(t + tau) - f(t))) for tau in taus]
    assert np.allclose(translation_sup(f, taus, (0, 30), 1 / 16), want, atol=1e-12)
    # incommensurate steps take the direct path
    taus = np.arange(0, 5, 0.3)
    want = [np.max(np.abs(f(t + tau) - f(t))) for tau in taus]
    assert np.allclose(translation_sup(f, taus, (0, 30), 1 / 16), want, atol=1e-12)


def test_inclusion_length():
    assert inclusion_length(np.array([0, 3, 5, 10.0]), (0, 10)) == 5
    assert inclusion_length(np.array([2.0]), (0, 10)) == 8
    assert inclusion_length(np.array([]), (0, 10)) is None


def test_eps_periods_sin():
    r = eps_periods(SIN, 0.01, (0, 100), (0, 200), 0.01)
    assert r.relatively_dense and r.inclusion_length <= 2 * math.pi + 0.01
    for k in range(1, 16):
        assert np.min(np.abs(r.periods - 2 * math.pi * k)) <= 0.005 + 1e-9


def test_eps_periods_chirp():
    assert not eps_periods(Chirp(1), 0.2, (0, 100), (0, 50), 0.01).relatively_dense


def test_eps_periods_empty_range():
    with pytest.raises(EmptyRange):
        eps_periods(SIN, 0.1, (5, 5), (0, 10), 1.0)


@given(st.floats(0.01, 0.5), st.floats(0.01, 0.5))
@settings(max_examples=10, deadline=None)
def test_eps_periods_monotone(e1, e2):
    e1, e2 = sorted((e1, e2))
    f = TrigPoly([(1, 1), (R2, 0.5)])
    a = eps_periods(f, e1, (0, 60), (0, 40), 0.05)
    b = eps_periods(f, e2, (0, 60), (0, 40), 0.05)
    assert set(a.periods.tolist()) <= set(b.periods.tolist())


def test_classify_sin_ap():
    v = classify(SIN, "AP")
    assert v.member and v.score <= v.threshold


def test_classify_blockten():
    b = BlockTen()
    assert classify(b, "E").verdict == "nonmember"
    assert classify(b, "TE(1,sqrt2)").member


def test_classify_ex3_5():
    f = gen("ex3_5", 10)
    assert classify(f, "MA(AP,1)").member
    assert classify(f, "SpAP(1)").verdict in ("inconclusive", "nonmember")


def test_classify_simple_classes():
    assert classify(constant(1), "C0").verdict == "nonmember"
    assert classify(FunctionSignal(lambda t: np.exp(-t)), "C0").member
    assert classify(SIN, "Cub").member
    assert classify(Chirp(1), "Cub").verdict == "nonmember"
    assert classify(constant(0.003), "E0").member
    assert classify(constant(1), "E0").verdict == "nonmember"
    assert classify(SIN + FunctionSignal(lambda t: 1 / (1 + t * t)), "AAP").member


def test_verdict_invariant_and_determinism():
    for tag in ("AP", "C0", "E", "Cub"):
        v1, v2 = classify(SIN, tag), classify(SIN, tag)
        assert v1.to_dict() == v2.to_dict()
        if v1.verdict == "member":
            assert v1.score <= v1.threshold
        elif v1.verdict == "nonmember":
            assert v1.score >= 2 * v1.threshold


def test_delta_probe_ramp():
    ramp = FunctionSignal(lambda t: t)
    r = delta_probe(ramp, "Cub")
    assert r.consistent
    assert all(v == "member" for v in r.differences.values())
    assert all(v == "member" for v in r.residuals.values())


def test_delta_probe_integral_of_blockten():
    r = delta_probe(indefinite_integral(BlockTen()), "Cub")
    assert r.consistent and all(v == "member" for v in r.residuals.values())


def test_delta_probe_chirp_inconsistent():
    r = delta_probe(Chirp(1), "APChirp")
    assert not r.consistent


def test_ma_nesting_on_members():
    params = ClassifyParams()
    for s in (SIN, TrigPoly([(1, 3), (R2, 2), (0, 0.5)])):
        if classify(s, "MA(AP,1)", params).member:
            assert classify(s, "MA(AP,2)", params).member
