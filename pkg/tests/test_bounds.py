import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from grosswald.bounds import (
    Assumption,
    InvalidStartError,
    OutOfRangeError,
    ankeny_bound,
    bach_c,
    exact_threshold,
    omega_max_primorial,
    omega_max_robin,
    round_up_significant,
    shrink_fixpoint,
    sieve_beats_trivial,
    sieve_bound,
    sieve_delta,
    solve_threshold,
    table1_constant,
    to_fraction,
    trivial_x,
)
from grosswald.arith import first_primes, primorial

TABLE1 = {2: 2.1127, 4: 1.6821, 6: 1.5556, 8: 1.496, 10: 1.4614, 12: 1.4389, 14: 1.4231, 16: 1.4114, 18: 1.4023, 20: 1.3952}


def c_reference(p, x, prec=300):
    """Straight transcription of Bach's constant at high precision."""
    with mp.workprec(prec):
        p, x = mpf(p), mpf(x)
        return mpf(2) / 3 * (1 + 2 / mp.sqrt(x) + 3 / x**1.5) * (1 + (mpf(5) / 3) / mp.log(p)) + (
            mp.log(x) + 2
        ) / (mp.sqrt(x) * mp.log(p))


def test_bach_c_table1_column():
    x = (mpf(16) / 3 * mp.log(100)) ** 2
    assert abs(float(x) - 603.24) < 0.01
    c = bach_c(100, x)
    assert abs(c - 1.05635) < 1e-5
    assert abs(2 * c - 2.1127) < 1e-4


def test_bach_c_at_most_seven_ninths():
    assert to_fraction(bach_c(10**9, 1099)) <= Fraction(7, 9)


def test_bach_c_large_x_limit():
    p = 10**12
    limit = mpf(2) / 3 * (1 + (mpf(5) / 3) / mp.log(p))
    assert abs(bach_c(p, 10**40) - limit) < 1e-15
    assert bach_c(p, 10**40) > limit


@pytest.mark.parametrize("p, x", [(1, 10), (10, 0.5), (-3, 5)])
def test_bach_c_domain(p, x):
    with pytest.raises(ValueError):
        bach_c(p, x)


def test_bach_c_is_an_upper_bound():
    rng = random.Random(1)
    for _ in range(1000):
        p = 10 ** rng.uniform(0.31, 40)
        x = 10 ** rng.uniform(0, 20)
        working = bach_c(p, x)
        assert working >= bach_c(p, x, prec=256)
        assert working >= c_reference(p, x)


def test_bach_c_decreasing_in_x_and_p():
    for p in (10**3, 10**9, 10**17):
        xs = [9 + k * 7.3 for k in range(400)] + [10**e for e in range(2, 30)]
        xs.sort()
        vals = [bach_c(p, x) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))
    for x in (9, 1099, 10**8):
        ps = sorted([2 + k * 3.7 for k in range(300)] + [10**e for e in range(3, 40)])
        vals = [bach_c(p, x) for p in ps]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_ankeny_anchor():
    ev = ankeny_bound(10**9, 1)
    assert ev.assumptions is Assumption.GRH
    assert 1099 <= ev.value <= 1100
    assert abs(ev.value - 1099.4) < 0.01


def test_ankeny_omega_two():
    with mp.workprec(300):
        expected = (mpf(8) / 5 * 3 * mp.log(10**9)) ** 2
    assert abs(ankeny_bound(10**9, 2).value - expected) < 0.5
    assert abs(float(ankeny_bound(10**9, 2).value) - 9894.6) < 0.1


def test_ankeny_at_cot_bound_with_six_primes():
    p = Fraction(25 * 10**14)
    value = ankeny_bound(p, 6).value
    assert 1.27e7 < value < 1.28e7
    assert value < trivial_x(p)
    # seven distinct primes is no longer enough
    assert ankeny_bound(p, 7).value > trivial_x(p)


@given(st.integers(min_value=10**9, max_value=10**45), st.integers(min_value=1, max_value=40))
@settings(max_examples=200, deadline=None)
def test_ankeny_matches_formula(p, omega):
    with mp.workprec(300):
        exact = (mpf(8) / 5 * (2**omega - 1) * mp.log(p)) ** 2
    value = ankeny_bound(p, omega).value
    assert value >= exact
    assert (value - exact) / exact < mpf(2) ** -100


def test_ankeny_range():
    with pytest.raises(OutOfRangeError):
        ankeny_bound(10**9 - 1, 3)
    with pytest.raises(ValueError):
        ankeny_bound(10**10, 0)


def robin_float(b):
    return math.floor(1.385 * math.log(b) / math.log(math.log(b)))


@pytest.mark.parametrize("bound, expected", [(10**49, 33), (3, 16), (10**6, 7)])
def test_omega_max_robin(bound, expected):
    assert omega_max_robin(bound) == expected == robin_float(bound)


def test_omega_max_robin_domain():
    with pytest.raises(ValueError):
        omega_max_robin(2.9)


def test_robin_bound_covers_primorials():
    for k in range(1, 40):
        n = primorial(k)
        if n >= 3:
            assert k <= omega_max_robin(n)


@pytest.mark.parametrize("bound, expected", [(30, 3), (29, 2), (10**49, 31), (10**43, 28), (1, 0), (2.5e15, 13)])
def test_omega_max_primorial(bound, expected):
    assert omega_max_primorial(bound) == expected


def test_shrink_fixpoint():
    res = shrink_fixpoint(10**49)
    assert res.chain[0] == (10**49, 31)
    assert res.final_p_max <= 10**43
    assert res.final_omega_max <= 28
    assert any(p <= 10**47 for p, _ in res.chain[1:])
    assert (res.final_p_max, res.final_omega_max) == res.chain[-1]
    assert len(res.chain) >= 2
    ps = [p for p, _ in res.chain]
    ws = [w for _, w in res.chain]
    assert all(a > b for a, b in zip(ps, ps[1:]))
    assert all(a >= b for a, b in zip(ws, ws[1:]))


def test_shrink_fixpoint_rejects_small_start():
    with pytest.raises(InvalidStartError):
        shrink_fixpoint(10**45)


def test_delta_for_fifteen():
    d = sieve_delta(first_primes(15)[3:])
    exact = 1 - sum(Fraction(1, q) for q in [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
    assert to_fraction(d) <= exact
    assert exact - to_fraction(d) < Fraction(1, 10**30)
    assert 0.3717 - 1e-4 < d < 0.3717


def test_sieve_bound_corollary_example():
    p = Fraction(32 * 10**15)
    x = trivial_x(p)
    delta = sieve_delta([7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
    ev = sieve_bound(p, x, 15, 12, delta)
    assert ev.assumptions is Assumption.GRH
    assert ev.value < x


def test_sieve_bound_s_one_versus_s_two():
    p, x, n = 10**16, 10**6, 10
    d1 = sieve_delta([29])
    d2 = sieve_delta([23, 29])
    one = sieve_bound(p, x, n, 1, d1).value
    two = sieve_bound(p, x, n, 2, d2).value
    assert (2 + 1 / d2) * 2 ** (n - 2) < 2 * 2 ** (n - 1)
    assert one > two


@pytest.mark.parametrize("delta, s, n", [(0, 3, 5), (-0.1, 3, 5), (0.5, 0, 5), (0.5, 5, 5)])
def test_sieve_bound_rejects(delta, s, n):
    with pytest.raises(ValueError):
        sieve_bound(10**16, 10**6, n, s, delta)


@pytest.mark.parametrize("k", sorted(TABLE1))
def test_table1(k):
    assert abs(table1_constant(10**k) - TABLE1[k]) <= 1e-4


def test_round_up_significant():
    assert round_up_significant(mpf("1.4230187"), 5) == Fraction(14231, 10000)
    assert round_up_significant(mpf("2.0"), 5) == 2
    assert round_up_significant(mpf("0.000123451"), 5) == Fraction(12346, 10**8)


def test_threshold_fifteen():
    delta = sieve_delta([7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
    assert exact_threshold(15, 12, delta) <= 32 * 10**15
    U = solve_threshold(15, 12, delta, 25 * 10**14)
    assert U <= 33 * 10**15


def test_threshold_fourteen():
    delta = sieve_delta(first_primes(14)[-11:])
    U = solve_threshold(14, 11, delta, 2 * 10**15)
    assert abs(U / 1.71e16 - 1) < 0.01


@pytest.mark.parametrize("n, s, M", [(14, 11, first_primes(14)[-11:]), (13, 10, first_primes(13)[-10:]), (12, 10, first_primes(12)[-10:])])
def test_threshold_a_posteriori(n, s, M):
    delta = sieve_delta(M)
    T = exact_threshold(n, s, delta)
    assert sieve_beats_trivial(T, n, s, delta)
    assert not sieve_beats_trivial(T - 1, n, s, delta)
    U = solve_threshold(n, s, delta, 10**12)
    for p in (U, 2 * U, 10 * U):
        assert sieve_beats_trivial(p, n, s, delta)
    assert not sieve_beats_trivial(int(U / 1.01), n, s, delta)
    assert T < U <= T * (1 + Fraction(1, 1000)) + 1


def test_threshold_monotone_in_delta():
    lo = solve_threshold(14, 11, 0.39, 2 * 10**15)
    hi = solve_threshold(14, 11, 0.45, 2 * 10**15)
    assert hi <= lo


def test_threshold_respects_floor():
    delta = sieve_delta(first_primes(14)[-11:])
    assert solve_threshold(14, 11, delta, 10**17) == 10**17


def test_threshold_unbounded():
    from grosswald.bounds import UnboundedCaseError

    with pytest.raises(UnboundedCaseError):
        solve_threshold(200, 199, 1e-12, 10**15)
