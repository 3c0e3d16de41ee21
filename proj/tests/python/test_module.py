import json
import math

import pytest

rcbound = pytest.importorskip("rcbound")


def test_gaussian_information_is_one():
    assert rcbound.fisher_p("gaussian-shift", 0.0, 2.0) == pytest.approx(1.0, rel=1e-10)


def test_lp_information_matches_gamma_oracle():
    # score of N(theta, 1) is standard normal: E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
    for p in (2.5, 3.0, 6.0):
        exact = (2 ** (p / 2) * math.gamma((p + 1) / 2) / math.sqrt(math.pi)) ** (1 / p)
        assert rcbound.fisher_p("gaussian-shift", 0.3, p) == pytest.approx(exact, rel=1e-8)


def test_lower_bound_lp():
    assert rcbound.lower_bound_lp("gaussian-shift", 0.0, 2.0) == pytest.approx(1.0)
    assert rcbound.lower_bound_lp("gaussian-shift", 0.0, 4.0 / 3.0) == pytest.approx(0.4030, abs=1e-4)


def test_constants():
    assert rcbound.rosenthal_constant(2.0) == 1.0
    assert rcbound.rosenthal_constant(4.0) == pytest.approx(1.77638 * 4 / (math.e * math.log(4)))
    assert rcbound.kb_constant(8.0) == pytest.approx(1.7768 * 8 / (math.e * math.log(8)))


def test_conjugate_and_bar():
    u = [0.0, 0.5, 2.0]
    assert rcbound.conjugate("phi_2", u) == pytest.approx([x * x / 2 for x in u], abs=1e-9)
    assert rcbound.phi_bar("phi_2", [1.0, 3.0]) == [0.5, 4.5]


def test_errors_are_typed():
    with pytest.raises(rcbound.UsageError):
        rcbound.fisher_p("no-such-family", 0.0, 2.0)
    with pytest.raises(rcbound.DomainError):
        rcbound.lower_bound_lp("gaussian-shift", 0.0, 3.0)
    assert issubclass(rcbound.DomainError, rcbound.RcboundError)


def test_verify_is_worker_invariant():
    scenario = {"family": "gaussian-shift", "n_grid": [5, 20], "reps": 2000, "seed": 11}
    a = rcbound.verify(scenario, workers=1)
    b = rcbound.verify(json.dumps(scenario), workers=3)
    assert a == b
    assert a["record"] == "bound-report"
    assert a["scenario"]["seed"] == 11
    assert a["verdict"] in ("Holds", "HoldsWithinNoise")


def test_verify_requires_seed():
    with pytest.raises(rcbound.UsageError):
        rcbound.verify({"n_grid": [5], "reps": 1000})


def test_clt_norm_normal_l2():
    values, ses = rcbound.clt_norm("normal", "lp(2)", [1, 8], 20000, seed=5)
    for v, se in zip(values, ses):
        assert abs(v - 1.0) < 4 * se
