"""Exact integer arithmetic: powering, primality, factorization, primorials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# Strong-probable-prime bases 2..41 are a complete witness set below this
# bound (Sorenson and Webster, 2015).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

SMALL_PRIME_LIMIT = 10**6
TRIAL_BOUND = 1 << 12
DEFAULT_RHO_EFFORT = 1 << 22


class IncompleteFactorizationError(RuntimeError):
    """Raised when a factorization cannot be finished within the effort cap."""


def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


@lru_cache(maxsize=1)
def small_primes() -> tuple[int, ...]:
    """All primes below 10^6 (immutable, computed once)."""
    return _sieve(SMALL_PRIME_LIMIT)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def __post_init__(self):
        if math.prod(q**e for q, e in self.factors) != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")
        qs = self.primes
        if any(a >= b for a, b in zip(qs, qs[1:])):
            raise ValueError("primes must be strictly increasing")


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base, exp, modulus)


def _strong_probable_prime(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set; deterministic below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    if n < 43 * 43:
        return True
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    bases = _MR_BASES if n < MR_DETERMINISTIC_LIMIT else _MR_BASES + _EXTRA_BASES
    return all(_strong_probable_prime(n, a, d, r) for a in bases)


def _brent(n: int, c: int, max_iter: int) -> int | None:
    """One Pollard-Brent run with f(y) = y^2 + c; returns a factor or None."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    iters = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        iters += r
        if iters > max_iter:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, effort: int) -> int:
    for c in range(1, 64):
        g = _brent(n, c, effort)
        if g is not None:
            return g
    raise IncompleteFactorizationError(f"could not split {n}")


def _factor_into(n: int, out: dict[int, int], effort: int) -> None:
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _split(m, effort)
        stack += [g, m // g]


def factorize(n: int, effort: int = DEFAULT_RHO_EFFORT, seed_primes=()) -> Factorization:
    """Complete factorization: trial division, then Pollard-Brent on cofactors.

    ``seed_primes`` are tried first (known divisors speed things up).
    """
    if n < 1:
        raise ValueError(f"can only factor positive integers, got {n}")
    found: dict[int, int] = {}
    m = n
    for q in seed_primes:
        while m % q == 0:
            m //= q
            found[q] = found.get(q, 0) + 1
    for q in small_primes():
        if q > TRIAL_BOUND or q * q > m:
            break
        if m % q == 0:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            found[q] = found.get(q, 0) + e
    if m > 1:
        _factor_into(m, found, effort)
    return Factorization(n, tuple(sorted(found.items())))


def first_primes(k: int) -> list[int]:
    if k < 0:
        raise ValueError("k must be non-negative")
    table = small_primes()
    if k <= len(table):
        return list(table[:k])
    out = list(table)
    q = out[-1]
    while len(out) < k:
        q += 2
        if is_probable_prime(q):
            out.append(q)
    return out


@lru_cache(maxsize=None)
def primorial(k: int) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    return math.prod(first_primes(k))


def nth_prime(i: int) -> int:
    """The i-th prime, 1-indexed."""
    return first_primes(i)[-1]
