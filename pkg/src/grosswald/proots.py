"""Primitive roots modulo a prime, via prime-index power residues."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from grosswald.arith import Factorization, factorize, is_probable_prime, small_primes

VERIFY_CAP = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class RootReport:
    p: int
    g: int
    g_hat: int
    threshold_sq: int
    passes_g: bool
    passes_g_hat: bool

    def as_dict(self) -> dict:
        return {
            "p": str(self.p),
            "g": self.g,
            "g_hat": self.g_hat,
            "passes_g": self.passes_g,
            "passes_g_hat": self.passes_g_hat,
        }


def below_sqrt_minus_two(root: int, p: int) -> bool:
    """root < sqrt(p) - 2, decided exactly as (root + 2)^2 < p."""
    return (root + 2) ** 2 < p


def _check_residue_args(a: int, p: int, e_primes: Iterable[int], p_minus_1: Factorization) -> None:
    if p_minus_1.value != p - 1:
        raise ValueError(f"factorization is of {p_minus_1.value}, not p - 1 = {p - 1}")
    if a % p == 0:
        raise ValueError(f"{p} divides {a}")
    for q in e_primes:
        if (p - 1) % q:
            raise ValueError(f"{q} does not divide p - 1 = {p - 1}")


def is_e_free(a: int, p: int, e_primes: Iterable[int], p_minus_1: Factorization) -> bool:
    """True iff y^d = a (mod p) has no solution for every d > 1 dividing e.

    Only the primes of e matter: a is a d-th power residue for some d | e,
    d > 1, exactly when it is a q-th power residue for some prime q | e.
    """
    e_primes = tuple(e_primes)
    _check_residue_args(a, p, e_primes, p_minus_1)
    return all(pow(a, (p - 1) // q, p) != 1 for q in e_primes)


def is_primitive_root(a: int, p: int, p_minus_1: Factorization) -> bool:
    return is_e_free(a, p, p_minus_1.primes, p_minus_1)


def _is_root_fast(a: int, p: int, exponents: tuple[int, ...]) -> bool:
    return all(pow(a, e, p) != 1 for e in exponents)


def _cofactor_exponents(p: int, p_minus_1: Factorization) -> tuple[int, ...]:
    return tuple((p - 1) // q for q in p_minus_1.primes)


def _factor_p_minus_1(p: int, p_minus_1: Factorization | None) -> Factorization:
    if p_minus_1 is None:
        return factorize(p - 1)
    if p_minus_1.value != p - 1:
        raise ValueError(f"factorization is of {p_minus_1.value}, not p - 1 = {p - 1}")
    return p_minus_1


def least_primitive_root(p: int, p_minus_1: Factorization | None = None) -> int:
    if p == 2:
        return 1
    if p < 2 or p % 2 == 0:
        raise ValueError(f"{p} is not an odd prime")
    fac = _factor_p_minus_1(p, p_minus_1)
    exps = _cofactor_exponents(p, fac)
    a = 2
    while not _is_root_fast(a, p, exps):
        a += 1
    return a


def _primes_from(start: int):
    for q in small_primes():
        if q >= start:
            yield q
    q = small_primes()[-1] + 2
    while True:
        if is_probable_prime(q):
            yield q
        q += 2


def least_prime_primitive_root(p: int, p_minus_1: Factorization | None = None, start: int = 2) -> int:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"{p} is not an odd prime")
    fac = _factor_p_minus_1(p, p_minus_1)
    exps = _cofactor_exponents(p, fac)
    for q in _primes_from(start):
        if q % p and _is_root_fast(q, p, exps):
            return q
    raise AssertionError("unreachable")


def grosswald_check(p: int, p_minus_1: Factorization | None = None) -> RootReport:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"grosswald_check needs an odd prime, got {p}")
    fac = _factor_p_minus_1(p, p_minus_1)
    g = least_primitive_root(p, fac)
    # g_hat >= g, and if g is prime it is g_hat
    g_hat = least_prime_primitive_root(p, fac, start=g)
    return RootReport(
        p=p,
        g=g,
        g_hat=g_hat,
        threshold_sq=p,
        passes_g=below_sqrt_minus_two(g, p),
        passes_g_hat=below_sqrt_minus_two(g_hat, p),
    )


def _primes_in(lo: int, hi: int) -> list[int]:
    """Primes in (lo, hi] by a segmented sieve."""
    out: list[int] = []
    base = [q for q in small_primes() if q * q <= hi]
    start = lo + 1
    while start <= hi:
        stop = min(start + _CHUNK, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for q in base:
            first = max(q * q, -(-start // q) * q)
            if first >= stop:
                continue
            flags[first - start :: q] = False
        idx = np.nonzero(flags)[0] + start
        out.extend(int(v) for v in idx if v >= 2)
        start = stop
    return out


def _failures(lo: int, hi: int, mode: str) -> list[int]:
    bad = []
    for p in _primes_in(lo, hi):
        if mode == "g":
            root = least_primitive_root(p)
        else:
            root = least_prime_primitive_root(p)
        if not below_sqrt_minus_two(root, p):
            bad.append(p)
    return bad


def verify_range(lo: int, hi: int, mode: str = "g", cap: int = VERIFY_CAP, workers: int = 1) -> list[int]:
    """All primes p in (lo, hi] violating root(p) < sqrt(p) - 2, in increasing order."""
    if mode not in ("g", "g_hat", "ghat"):
        raise ValueError(f"mode must be 'g' or 'g_hat', got {mode!r}")
    mode = "g_hat" if mode == "ghat" else mode
    if not 2 <= lo < hi:
        raise ValueError(f"need 2 <= lo < hi, got ({lo}, {hi})")
    if hi > cap:
        raise ValueError(f"upper end {hi} exceeds the cap {cap}")
    if workers <= 1:
        return _failures(lo, hi, mode)
    step = max(1, math.ceil((hi - lo) / (4 * workers)))
    edges = list(range(lo, hi, step)) + [hi]
    with ProcessPoolExecutor(workers) as pool:
        parts = pool.map(_failures, edges[:-1], edges[1:], [mode] * (len(edges) - 1))
        return [p for part in parts for p in part]
