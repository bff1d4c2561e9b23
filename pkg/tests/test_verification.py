import math

import numpy as np
import pytest

from meanclass.errors import UnknownName
from meanclass.membership import classify
from meanclass.norms import sup_norm
from meanclass.signals import PaperSum
from meanclass.verification import GENERATORS, builtin, gen, parse_trig, run_suite, run_suites, suite_names


def test_gen_prop3_8_tail_bound():
    f = gen("prop3_8", N=12)
    assert f.tail_bound <= 2.0**-12
    t = np.arange(0, 50, 2.0**-14)
    assert np.max(np.abs(PaperSum("prop3_8", 20)(t) - f(t))) <= 2.0**-12


def test_gen_block10_ramp_value():
    # 10.5 lies on the down-ramp from I_0 (on) into I_1 (off); the ramp ends at 10.5
    assert gen("block10")(10.5) == 0
    assert gen("block10")(10.25) == pytest.approx(0.25)


def test_gen_logosc_at_zero():
    assert gen("logosc")(0.0) == 0


def test_gen_unknown():
    with pytest.raises(UnknownName):
        gen("nope")


@pytest.mark.parametrize("name", GENERATORS)
def test_gen_deterministic(name):
    t = np.linspace(0, 200, 5001)
    assert np.array_equal(gen(name)(t), gen(name)(t))


def test_prop3_8_deriv_bounded():
    g = gen("prop3_8_deriv", 12)
    assert sup_norm(g, (0, 50), 2.0**-15) <= 1 + 2.0**-12


def test_ex3_5_decomposition_direction():
    f = gen("ex3_5", 10)
    ma = classify(f, "MA(AP,1)")
    sp = classify(f, "SpAP(1)")
    assert ma.member and sp.score > ma.score


def test_parse_trig():
    assert parse_trig("3g1+2gsqrt2+0.5").terms == ((1.0, 3), (math.sqrt(2), 2), (0.0, 0.5))
    assert parse_trig("g-2").terms == ((-2.0, 1),)
    t = np.linspace(0, 10, 11)
    assert np.allclose(parse_trig("sin1+cos2")(t), np.sin(t) + np.cos(2 * t))
    assert np.allclose(parse_trig("2gpi")(t), 2 * np.exp(1j * np.pi * t))
    assert np.allclose(builtin("sin")(t), np.sin(t))


def test_suite_names_and_aliases():
    assert suite_names()[0] == "identities" and len(suite_names()) == 11
    assert run_suite("C4").suite == "chirp_orthogonality"


def test_run_suite_chirp():
    rep = run_suite("chirp_orthogonality")
    assert rep.passed and rep.checks


def test_run_suite_identities():
    rep = run_suite("identities")
    assert rep.passed
    assert {"pass", "checks", "runtime", "suite"} <= set(rep.to_dict())


def test_run_suite_unknown():
    with pytest.raises(UnknownName):
        run_suite("nonexistent")
    with pytest.raises(UnknownName):
        run_suites("nonexistent")


def test_report_stable():
    a, b = run_suite("ergodic_rates").to_dict(), run_suite("ergodic_rates").to_dict()
    a.pop("runtime"), b.pop("runtime")
    assert a == b
