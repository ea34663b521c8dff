import pytest

from grosswald.arith import factorize
from grosswald.proots import (
    below_sqrt_minus_two,
    grosswald_check,
    is_e_free,
    is_primitive_root,
    least_prime_primitive_root,
    least_primitive_root,
    verify_range,
)
from oracles import divisors, least_root_brute, log_table, primes_upto, totient


@pytest.mark.parametrize("a, p, e_primes, expected", [(3, 7, {2}, True), (2, 7, {2}, False), (2, 13, {2, 3}, True)])
def test_e_free_examples(a, p, e_primes, expected):
    assert is_e_free(a, p, e_primes, factorize(p - 1)) is expected


def test_two_mod_thirteen_brute_force():
    # neither y^2 = 2 nor y^3 = 2 has a solution mod 13
    assert all(pow(y, 2, 13) != 2 and pow(y, 3, 13) != 2 for y in range(1, 13))


def test_e_free_argument_checks():
    with pytest.raises(ValueError):
        is_e_free(2, 7, {5}, factorize(6))
    with pytest.raises(ValueError):
        is_e_free(14, 7, {2}, factorize(6))
    with pytest.raises(ValueError):
        is_e_free(2, 7, {2}, factorize(10))


@pytest.mark.parametrize("a, p, expected", [(3, 7, True), (2, 7, False), (2, 13, True)])
def test_primitive_root_examples(a, p, expected):
    assert is_primitive_root(a, p, factorize(p - 1)) is expected


def test_order_of_two_mod_thirteen():
    assert [pow(2, k, 13) for k in range(1, 13)].index(1) + 1 == 12


@pytest.mark.parametrize("limit", [2000])
def test_primitive_root_matches_order_oracle(limit):
    for p in primes_upto(limit)[1:]:
        fac = factorize(p - 1)
        orders = log_table(p)
        for a in range(1, p):
            assert is_primitive_root(a, p, fac) == (orders[a] == p - 1)


def test_root_count_is_totient():
    for p in primes_upto(3000)[1:]:
        fac = factorize(p - 1)
        assert sum(is_primitive_root(a, p, fac) for a in range(1, p)) == totient(p - 1)


def test_e_free_matches_power_search():
    for p in primes_upto(200)[1:]:
        fac = factorize(p - 1)
        powers = {d: {pow(y, d, p) for y in range(1, p)} for d in divisors(p - 1)}
        for e in divisors(p - 1):
            if e % 2:
                continue
            e_primes = [q for q in fac.primes if e % q == 0]
            for a in range(1, p):
                brute = not any(a in powers[d] for d in divisors(e) if d > 1)
                assert is_e_free(a, p, e_primes, fac) == brute


@pytest.mark.parametrize("p, g, g_hat", [(7, 3, 3), (11, 2, 2), (409, 21, 29), (2791, 6, 53)])
def test_least_roots(p, g, g_hat):
    assert least_primitive_root(p) == g == least_root_brute(p)
    assert least_prime_primitive_root(p) == g_hat == least_root_brute(p, prime_only=True)


def test_least_root_of_two():
    assert least_primitive_root(2) == 1


def test_g_at_most_g_hat():
    for p in primes_upto(5000)[1:]:
        assert least_primitive_root(p) <= least_prime_primitive_root(p)


def test_thresholds_fail_themselves():
    assert (least_root_brute(409) + 2) ** 2 >= 409
    assert (least_root_brute(2791, prime_only=True) + 2) ** 2 >= 2791


@pytest.mark.parametrize("root, p, expected", [(21, 409, False), (19, 441, False), (18, 441, True), (6, 2791, True)])
def test_exact_comparison(root, p, expected):
    assert below_sqrt_minus_two(root, p) is expected


def test_grosswald_check():
    rep = grosswald_check(7)
    assert not rep.passes_g
    rep = grosswald_check(409)
    assert (rep.g, rep.g_hat) == (21, 29)
    assert not rep.passes_g and not rep.passes_g_hat
    with pytest.raises(ValueError):
        grosswald_check(2)


def test_every_prime_past_409_passes_up_to_10k():
    for p in primes_upto(10**4):
        if p > 409:
            rep = grosswald_check(p)
            assert rep.passes_g
            assert (rep.g + 2) ** 2 < p


def test_verify_small_exceptions():
    assert verify_range(2, 409, "g") == [3, 5, 7, 11, 13, 17, 23, 41, 47, 71, 191, 311, 409]
    brute = [p for p in primes_upto(409)[1:] if (least_root_brute(p) + 2) ** 2 >= p]
    assert verify_range(2, 409, "g") == brute


def test_verify_small_g_hat_exceptions():
    got = verify_range(2, 2791, "g_hat")
    assert got[-1] == 2791
    brute = [p for p in primes_upto(2791)[1:] if (least_root_brute(p, prime_only=True) + 2) ** 2 >= p]
    assert got == brute


def test_verify_partition_independent():
    assert verify_range(2, 20000, "g_hat", workers=3) == verify_range(2, 20000, "g_hat")


def test_verify_range_arguments():
    with pytest.raises(ValueError):
        verify_range(10, 5)
    with pytest.raises(ValueError):
        verify_range(2, 10**9)
    with pytest.raises(ValueError):
        verify_range(2, 100, mode="x")
