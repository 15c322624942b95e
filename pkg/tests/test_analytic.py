import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beurling import ValidationError, classical_primes, enumerate_semigroup, explicit_system
from beurling.analytic import (
    density_control,
    dini_integral,
    euler_product_Fq,
    exponentiated_inequality,
    halasz_probe,
    log_Fq_hat,
    pointwise_atom_terms,
    pointwise_inequality_check,
    prime_power_atoms,
    reduce_angle,
    trig_lhs,
    write_probe_csv,
    x_schedule,
    zeta_tail_completed,
    zeta_truncated,
)
from beurling.measures import dPi_measure, exp_star, mellin, weight_distinct, weight_hq

from oracles import is_prime_td, prime_powers


@pytest.fixture(scope="module")
def classical_1e4():
    s = classical_primes(10**4)
    return s, enumerate_semigroup(s, 10**4)


def test_zeta_examples(classical_1e6, table_1e6):
    z = zeta_truncated(classical_1e6, 2, 10**6, table_1e6)
    assert abs(z.value - math.pi**2 / 6) <= 2e-6 + z.tail_bound
    assert z.truncation_X == 10**6
    assert zeta_truncated(classical_1e6, 2, 1, table_1e6).value == 1
    assert zeta_truncated(explicit_system([2]), 2, 10).value == pytest.approx(1.328125, abs=1e-15)


def test_zeta_direct_sum_oracle(classical_1e4):
    s, t = classical_1e4
    for sv in (1.5, 2 + 3j):
        direct = sum(n ** (-sv) for n in range(1, 10**4 + 1))
        assert zeta_truncated(s, sv, 10**4, t).value == pytest.approx(direct, rel=1e-13)


def test_sigma_must_exceed_one(classical_1e4):
    s, t = classical_1e4
    for fn in (lambda: zeta_truncated(s, 1.0, 100, t),
               lambda: log_Fq_hat(s, 0.5 + 2j, 1, 2, "total", 100),
               lambda: euler_product_Fq(s, 1, 1, 2, "total", 100),
               lambda: dini_integral(s, 1, 2, 0.0, 1.0, 100)):
        with pytest.raises(ValidationError):
            fn()


def test_log_Fq_hat_examples():
    two = explicit_system([2])
    v = log_Fq_hat(two, 2, 1, 2, "total", 10).value
    assert v == pytest.approx(-1 / 4 + 1 / 32 - 1 / 192, abs=1e-15)
    assert v == pytest.approx(-0.2239583, abs=1e-7)
    assert log_Fq_hat(classical_primes(100), 3 + 1j, 1, 3, "distinct", 1.5).value == 0


@pytest.mark.parametrize("variant,wf", [("total", weight_hq), ("distinct", weight_distinct)])
def test_log_Fq_hat_is_mellin_of_dPi(variant, wf):
    s = classical_primes(5000)
    for q, K in [(1, 2), (2, 5), (0, 3)]:
        sv = 1.3 + 4j
        m = mellin(dPi_measure(s, 5000, wf(q, K)), sv)
        assert log_Fq_hat(s, sv, q, K, variant, 5000).value == pytest.approx(m, rel=1e-12, abs=1e-13)


def test_exp_log_consistency_exact_on_truncation():
    # exp* turns the truncated prime-power measure into the truncated integer measure
    s = classical_primes(1000)
    dN = exp_star(dPi_measure(s, 1000), 1000)
    for sv in (1.5, 2 + 7j):
        assert mellin(dN, sv) == pytest.approx(zeta_truncated(s, sv, 1000).value, rel=1e-13)


def test_exp_log_consistency_classical(classical_1e5, table_1e5):
    X = 10**5
    for sigma in (1.5, 2.0, 3.0):
        for t in (0.0, 2.5):
            sv = complex(sigma, t)
            z = zeta_truncated(classical_1e5, sv, X, table_1e5)
            lf = log_Fq_hat(classical_1e5, sv, 0, 1, "total", X).value
            # the two series truncate differently; the gap is bounded by both tails
            gap = abs(np.exp(lf) - z.value)
            log_tail = 2 * X ** (1 - sigma) / ((sigma - 1) * math.log(X))
            assert gap <= z.tail_bound + abs(z.value) * math.expm1(log_tail)
            if sigma >= 3:
                assert gap <= 1e-6 * abs(z.value)


def test_tail_bound_soundness(classical_1e6, table_1e6):
    X = 6 * 10**4
    for sigma in np.linspace(1.5, 3, 7):
        lo = zeta_truncated(classical_1e6, sigma, X, table_1e6)
        hi = zeta_truncated(classical_1e6, sigma, 16 * X, table_1e6)
        assert abs(hi.value - lo.value) <= lo.tail_bound


def test_euler_examples(classical_1e4):
    s, t = classical_1e4
    assert euler_product_Fq(explicit_system([2]), 2, 1, 2).value == pytest.approx(0.8, abs=1e-15)
    assert euler_product_Fq(s, 2, 1, 2, "distinct", 1.9).value == 1
    e = euler_product_Fq(s, 2, 0, 2, "total", 10**4).value
    assert abs(e - zeta_truncated(s, 2, 10**4, t).value) <= 1e-4


@given(st.floats(1.2, 3), st.floats(-10, 10), st.integers(2, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_euler_vs_log_sum(sigma, t, K, data):
    s = _SMALL
    q = data.draw(st.integers(0, K - 1))
    sv = complex(sigma, t)
    for variant in ("total", "distinct"):
        e = euler_product_Fq(s, sv, q, K, variant, 2000).value
        lv = log_Fq_hat(s, sv, q, K, variant, 2000, full_powers=True).value
        assert abs(e - np.exp(lv)) <= 1e-9 * abs(e)


_SMALL = classical_primes(2000)


def test_trig_examples():
    assert trig_lhs(0.0, 5, 25) == 0
    assert trig_lhs(math.pi, 2, 4) == pytest.approx(8)
    rng = np.random.default_rng(3)
    x = rng.uniform(-math.pi, math.pi, 10**5)
    K = rng.integers(2, 11, 10**5)
    assert trig_lhs(x, K, K * K).min() >= -1e-12
    direct = 25 - 1 - 25 * np.cos(x[:100]) + np.cos(5 * x[:100])
    assert np.allclose(trig_lhs(x[:100], 5, 25), direct, atol=1e-12)


def test_trig_fails_below_threshold():
    # M < K**2 really can go negative, so the threshold is not vacuous
    x = np.linspace(-0.3, 0.3, 2001)
    assert trig_lhs(x, 4, 10).min() < 0


def test_reduce_angle():
    a = np.array([0.0, 7.0, -7.0, 1e6], dtype=np.longdouble)
    r = reduce_angle(a)
    assert np.all(np.abs(r) <= np.pi + 1e-15)
    assert np.allclose(np.cos(r.astype(float)), np.cos(a.astype(float)), atol=1e-9)


def test_prime_power_atoms_match_oracle():
    s = classical_primes(3000)
    atoms = prime_power_atoms(s, 3000)
    primes = [n for n in range(2, 3001) if is_prime_td(n)]
    expected = sorted((float(pk), k) for p, k, pk in prime_powers(primes, 3000))
    got = sorted(zip(np.exp(atoms.logu.astype(float)).round(6).tolist(), atoms.k.tolist()))
    assert [k for _, k in got] == [k for _, k in expected]
    assert np.allclose([u for u, _ in got], [u for u, _ in expected], rtol=1e-14)


def test_dini_examples(classical_1e4):
    s, _ = classical_1e4
    I = dini_integral(s, 1, 2, 0.0, 1.1, 10**4)
    direct = sum(2 * float(pk) ** -1.1 / k for p, k, pk in
                 prime_powers([n for n in range(2, 10**4 + 1) if is_prime_td(n)], 10**4))
    assert I == pytest.approx(direct, rel=1e-12)
    # atom at u = 2 with t ln 2 = 2 pi q / K contributes nothing
    t = 2 * math.pi * 1 / 3 / math.log(2)
    assert dini_integral(explicit_system([2]), 1, 3, t, 2.0, 2) == pytest.approx(0, abs=1e-16)


@given(st.floats(1.001, 3), st.floats(1.001, 3), st.floats(-20, 20), st.integers(2, 8), st.data())
@settings(max_examples=60, deadline=None)
def test_dini_nonnegative_monotone(s1, s2, t, K, data):
    q = data.draw(st.integers(0, K - 1))
    lo, hi = sorted((s1, s2))
    a = dini_integral(_SMALL, q, K, t, lo, 2000)
    b = dini_integral(_SMALL, q, K, t, hi, 2000)
    assert b >= 0
    assert a >= b


def test_pointwise_examples(classical_1e4):
    s, _ = classical_1e4
    assert pointwise_inequality_check(s, 1.3, 0.0, 0, 3, 9, 10**4) == pytest.approx(0, abs=1e-15)
    assert pointwise_inequality_check(s, 1.2, 1.0, 1, 2, 4, 10**4) >= -1e-9
    with pytest.raises(ValidationError):
        pointwise_inequality_check(s, 1.2, 1.0, 1, 3, 8, 10**4)
    with pytest.raises(ValidationError):
        exponentiated_inequality(s, 1.2, 1.0, 1, 3, 8, 10**4)


@given(st.floats(1.01, 3), st.floats(-30, 30), st.integers(2, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_exponentiated_form_at_least_one(sigma, t, K, data):
    q = data.draw(st.integers(0, K - 1))
    assert exponentiated_inequality(_SMALL, sigma, t, q, K, K * K, 2000) >= 1 - 1e-9


def test_atom_terms_nonnegative_fuzz(classical_1e5):
    rng = np.random.default_rng(11)
    atoms = prime_power_atoms(classical_1e5, 10**5)
    n = 10**5
    idx = rng.integers(0, len(atoms.k), n)
    K = rng.integers(2, 11, n)
    q = (rng.random(n) * K).astype(np.int64)
    vals = pointwise_atom_terms(atoms.logu[idx], atoms.k[idx], rng.uniform(1, 3, n) + 1e-9,
                                rng.uniform(-50, 50, n), q, K, K * K)
    assert vals.min() >= -1e-12


def test_x_schedule(classical_1e6, table_1e6):
    assert x_schedule(classical_1e6, 3.0, 10**6, table_1e6) <= 10**4
    assert x_schedule(classical_1e6, 1.01, 10**6, table_1e6) == 10**6
    small = classical_primes(500)
    assert x_schedule(small, 1.05, 10**6) == 500


def test_density_controls(classical_1e6, table_1e6):
    lit = density_control(classical_1e6, 1.5, 10**6, table_1e6)
    assert lit == pytest.approx(0.5 * 2.612375348685488, rel=1e-3)
    comp = zeta_tail_completed(classical_1e6, 1.01, 10**6, table_1e6)
    assert abs(0.01 * comp - 1) <= 0.05


def test_halasz_examples(classical_1e6, table_1e6):
    rows = halasz_probe(classical_1e6, 1, 2, [0.0], [1.5, 1.2, 1.1], table=table_1e6)
    P = [r.P_value for r in rows]
    for r in rows:
        lz = log_Fq_hat(classical_1e6, r.sigma, 0, 1, "total", r.X).value.real
        assert r.P_value == pytest.approx((r.sigma - 1) * math.exp(-lz), rel=1e-12)
        assert r.cross_check == pytest.approx(r.P_value, rel=1e-9)
        assert r.dini_I >= 0
    # (sigma-1)/zeta(sigma), via the truncated log, shrinks roughly like (sigma-1)**2
    assert P[0] > P[1] > P[2]
    assert P[2] / P[1] < 0.5
    with pytest.raises(ValidationError):
        halasz_probe(classical_1e6, 0, 2, [0.0], [1.5], table=table_1e6)


def test_halasz_trend_and_dini_monotone(classical_1e6, table_1e6):
    sigmas = [1.5, 1.3, 1.2, 1.1, 1.05]
    rows = halasz_probe(classical_1e6, 1, 2, [0.0, 0.5, 1.0], sigmas, table=table_1e6)
    for t in (0.0, 0.5, 1.0):
        P = [r.P_value for r in rows if r.t == t]
        assert all(a > b for a, b in zip(P, P[1:]))
        assert P[-1] < P[0] / 2


def test_write_probe_csv(tmp_path, classical_1e4):
    s, t = classical_1e4
    rows = halasz_probe(s, 1, 3, [0.0, 1.0], [2.0], X_schedule={2.0: 1000})
    write_probe_csv(rows, tmp_path / "p.csv")
    lines = list(csv.reader((tmp_path / "p.csv").open()))
    assert lines[0] == ["sigma", "t", "q", "K", "X", "P_value", "dini_I", "tail_bound"]
    assert len(lines) == 3
    assert lines[1][-1] == "unknown"
