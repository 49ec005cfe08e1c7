import cmath
import json
import math
import os
import types

import numpy as np
import pytest

from conftest import FIXTURES
from tdqwalk import (
    CoinParams,
    ConstantSchedule,
    ExplicitSchedule,
    InitialState,
    UnsupportedError,
    ab_amplitudes,
    distribution_distance,
    gaussian_reference,
    interference_c,
    pmf,
    run_walk,
)
from tdqwalk.kernels import _fallback
from tdqwalk.observables import moments
from tdqwalk.oracle import (
    DENSE_MAX_STEPS,
    chirality_formulas,
    classical_walk_mc,
    closed_form,
    dense_evolve,
    pmf_formulas_t123,
)
from tdqwalk.validation import (
    check_closed_forms,
    check_dense,
    oracle_check,
    random_coin,
    random_init,
)

PI = math.pi


def test_closed_form_first_step():
    init, p1 = InitialState(0.7, 0.3), CoinParams(0.4, 1.2, 0.9)
    a, b = ab_amplitudes(init, p1)
    cf = closed_form(init, p1, t=1)
    assert cf.amplitudes == {
        ("+", 1): pytest.approx(cmath.exp(0.4j) * a),
        ("-", -1): pytest.approx(cmath.exp(1.2j) * b),
    }


def test_closed_form_third_step_symmetric_case():
    init = InitialState(PI / 4, 0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        a1, a2, a3, b2, b3 = rng.uniform(0, 2 * PI, 5)
        b1 = PI / 2 - a1
        coins = [CoinParams(a1, b1, PI / 4), CoinParams(a2, b2, PI / 4), CoinParams(a3, b3, PI / 4)]
        c = 0.5 * math.sin((a1 - a3) - (b1 - 2 * b2 + b3))
        rho = closed_form(init, *coins, t=3).pmf()
        assert rho[1] == pytest.approx(3 / 8 + c / 2, abs=1e-14)
        assert rho[-1] == pytest.approx(3 / 8 - c / 2, abs=1e-14)
        assert rho[3] == pytest.approx(1 / 8, abs=1e-14)


def test_closed_form_blocked_middle():
    init = InitialState(0.5, 0.2)
    p = CoinParams(0.3, 0.1, 0.8)
    rho = closed_form(init, p, CoinParams(1.0, 2.0, 0.0), t=2).pmf()
    assert rho[0] == pytest.approx(0, abs=1e-30)


def test_closed_form_unit_norm():
    rng = np.random.default_rng(2)
    for _ in range(100):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        for t in (1, 2, 3):
            assert sum(closed_form(init, *coins, t=t).pmf().values()) == pytest.approx(1, abs=1e-14)


def test_closed_form_limits():
    p = CoinParams(0, 0, 0.3)
    with pytest.raises(UnsupportedError):
        closed_form(InitialState(0.1), p, p, p, t=4)
    with pytest.raises(UnsupportedError):
        closed_form(InitialState(0.1), p, t=2)


def test_dense_zero_steps():
    s = dense_evolve(InitialState(PI / 3, 0.5), ConstantSchedule(0.2), 0)
    assert s.amplitudes(0) == pytest.approx((0.5, cmath.exp(0.5j) * math.sqrt(3) / 2))


def test_dense_limit():
    with pytest.raises(UnsupportedError):
        dense_evolve(InitialState(0), ConstantSchedule(0.2), DENSE_MAX_STEPS + 1)


def test_dense_matches_closed_form_at_three():
    rng = np.random.default_rng(4)
    for _ in range(50):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        d = dense_evolve(init, ExplicitSchedule(coins), 3)
        cf = closed_form(init, *coins, t=3).to_state()
        assert np.max(np.abs(d.psi_plus - cf.psi_plus)) < 1e-13
        assert np.max(np.abs(d.psi_minus - cf.psi_minus)) < 1e-13


def test_trig_aligned_first_step():
    init = InitialState(0.6, 0.0)
    p1 = CoinParams(0.0, 0.0, 0.6)
    rho = pmf_formulas_t123(init, p1, p1, p1)
    assert rho[1][1] == pytest.approx(1, abs=1e-15)


def test_trig_symmetric_first_step():
    init, p = InitialState(PI / 4, 0), CoinParams(PI / 2, 0, PI / 4)
    rho = pmf_formulas_t123(init, p, p, p)
    assert rho[1] == pytest.approx({1: 0.5, -1: 0.5}, abs=1e-15)


def test_trig_equals_modulus_forms():
    rng = np.random.default_rng(5)
    for _ in range(200):
        init = random_init(rng)
        p1, p2, p3 = (random_coin(rng) for _ in range(3))
        a, b = ab_amplitudes(init, p1)
        rho = pmf_formulas_t123(init, p1, p2, p3)
        assert rho[1][1] == pytest.approx(abs(a) ** 2, abs=1e-14)
        assert rho[1][-1] == pytest.approx(abs(b) ** 2, abs=1e-14)
        c = interference_c(p1.alpha, p3.alpha, p1.beta, p2.beta, p3.beta, a, b)
        mix = math.sin(2 * p3.theta) * math.sin(p2.theta) ** 2 * c
        expected = (math.sin(p3.theta) ** 2 * abs(a) ** 2
                    + math.cos(p3.theta) ** 2 * math.sin(p2.theta) ** 2 * abs(b) ** 2 + mix)
        assert rho[3][1] == pytest.approx(expected, abs=1e-14)


def test_chirality_formulas_against_closed_form():
    rng = np.random.default_rng(6)
    for _ in range(100):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        f = chirality_formulas(init, *coins)
        for t in (1, 2, 3):
            amps = closed_form(init, *coins, t=t).amplitudes
            p_plus = sum(abs(v) ** 2 for (c, _), v in amps.items() if c == "+")
            assert f[t][0] == pytest.approx(p_plus, abs=1e-13)
            assert sum(f[t]) == pytest.approx(1, abs=1e-13)


def test_classical_walk_is_simple_at_quarter():
    emp = classical_walk_mc(400, 20000, seed=1)
    assert sum(emp.values()) == pytest.approx(1)
    assert all((n - 400) % 2 == 0 for n in emp)
    mean, var = moments(emp)
    assert abs(mean) < 1.0
    assert var == pytest.approx(400, rel=0.05)


def test_classical_walk_persistence():
    # steps correlated by lam = 2q - 1 spread with variance ~ t (1 + lam) / (1 - lam)
    emp = classical_walk_mc(400, 20000, seed=2, theta=PI / 3, eta=0)
    _, var = moments(emp)
    q = math.cos(PI / 3) ** 2
    lam = 2 * q - 1
    assert var == pytest.approx(400 * (1 + lam) / (1 - lam), rel=0.08)


def test_suites_pass_on_small_draw_count():
    for r in oracle_check(seed=3, draws=25):
        assert r.passed, r.line()
        assert r.checks > 0


def _sign_flip_kernel():
    def advance(src_p, src_m, dst_p, dst_m, lo, hi, u_pp, u_pm, u_mp, u_mm):
        _fallback.advance(src_p, src_m, dst_p, dst_m, lo, hi, u_pp, u_pm, u_mp, -u_mm)

    return types.SimpleNamespace(advance=advance, norm_sq=_fallback.norm_sq)


def test_sign_flip_is_caught_and_located():
    rng = np.random.default_rng(0)
    r = check_closed_forms(rng, 10, kernel=_sign_flip_kernel())
    assert not r.passed
    assert "engine vs closed form" in r.worst
    assert "psi_minus" in r.worst or "psi_plus" in r.worst
    assert "FAIL" in r.line()
    r = check_dense(np.random.default_rng(0), 10, kernel=_sign_flip_kernel())
    assert not r.passed


def test_engine_agrees_with_dense_directly():
    rng = np.random.default_rng(9)
    for _ in range(20):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(12)]
        a = run_walk(init, ExplicitSchedule(coins), 12)
        b = dense_evolve(init, ExplicitSchedule(coins), 12)
        assert np.max(np.abs(a.psi_plus - b.psi_plus)) < 1e-12
        np.testing.assert_allclose(pmf(a).values, pmf(b).values, atol=1e-12)


def test_classical_threshold_fixture_reproducible():
    with open(os.path.join(FIXTURES, "classical_tv.json")) as fh:
        fx = json.load(fh)
    values = []
    for seed in fx["seeds"]:
        emp = classical_walk_mc(fx["steps"], fx["walkers"], seed)
        mean, var = moments(emp)
        values.append(distribution_distance(emp, gaussian_reference(mean, var, fx["steps"]))[0])
    assert values == pytest.approx(fx["tv_gaussian"], abs=1e-15)
    assert round(math.fsum(values) / len(values), 4) == fx["tv_threshold"]
