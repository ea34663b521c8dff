"""Explicit GRH-conditional bounds on the least prime primitive root.

Every real quantity is evaluated in rigorous interval arithmetic
(``mpmath.iv``) and the appropriate endpoint is returned: upper endpoints
for anything used as an upper bound, lower endpoints for the sieve
parameter delta.  Natural logarithms throughout.
"""

from __future__ import annotations

import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from mpmath import iv, mp, mpf

from grosswald.arith import primorial

WORKING_PREC = 128
THRESHOLD_CAP = 10**60
THRESHOLD_REL_TOL = Fraction(1, 1000)
# sqrt(p) - 2 >= 1 needs p >= 9; every predicate below is false there
_SEARCH_BASE = 9
ANKENY_MIN_P = 10**9

iv.prec = WORKING_PREC


class Assumption(str, enum.Enum):
    GRH = "GRH-conditional"
    UNCONDITIONAL = "unconditional"
    MIXED = "mixed"


class OutOfRangeError(ValueError):
    """Raised when a bound is requested outside the range where it is proven."""


class InvalidStartError(ValueError):
    pass


class UnboundedCaseError(RuntimeError):
    """No finite threshold exists (or none below the internal cap)."""


@dataclass(frozen=True)
class BoundEvaluation:
    value: mpf
    assumptions: Assumption
    inputs: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class ShrinkResult:
    chain: list[tuple[int, int]]
    final_p_max: int
    final_omega_max: int


@contextmanager
def _precision(bits: int) -> Iterator[None]:
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _iv(value) -> "iv.mpf":
    """Enclose a real input (int, float, Fraction, mpf, decimal string) in an interval."""
    if isinstance(value, Fraction):
        return iv.mpf(value.numerator) / iv.mpf(value.denominator)
    if isinstance(value, str):
        return iv.mpf([value, value])
    return iv.mpf(value)


def _exact_real(value) -> Fraction | int:
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        return Fraction(value)
    return to_fraction(value)


def _upper(v) -> mpf:
    return mp.make_mpf(v._mpi_[1])


def _lower(v) -> mpf:
    return mp.make_mpf(v._mpi_[0])


def _bach_c_iv(p, x):
    logp = iv.log(p)
    sx = iv.sqrt(x)
    first = iv.mpf(2) / 3 * (1 + 2 / sx + 3 / (x * sx)) * (1 + (iv.mpf(5) / 3) / logp)
    return first + (iv.log(x) + 2) / (sx * logp)


def bach_c(p, x, prec: int = WORKING_PREC) -> mpf:
    """Bach's constant c(p, x), rounded up."""
    if not p >= 2:
        raise ValueError(f"bach_c needs p >= 2, got {p}")
    if not x >= 1:
        raise ValueError(f"bach_c needs x >= 1, got {x}")
    with _precision(prec):
        return _upper(_bach_c_iv(_iv(p), _iv(x)))


def _ankeny_iv(p, omega: int):
    return (iv.mpf(8) / 5 * (2**omega - 1) * iv.log(p)) ** 2


def ankeny_bound(p, omega: int) -> BoundEvaluation:
    """Upper bound ((8/5)(2^omega - 1) log p)^2 on the least prime primitive root."""
    if omega < 1:
        raise ValueError(f"omega must be >= 1, got {omega}")
    if not p >= ANKENY_MIN_P:
        raise OutOfRangeError(f"bound only proven for p >= 10^9, got {p}")
    value = _upper(_ankeny_iv(_iv(p), omega))
    return BoundEvaluation(value, Assumption.GRH, {"p": p, "omega": omega})


def omega_max_robin(bound) -> int:
    """floor(1.385 log b / log log b), an upper bound for omega(n), 3 <= n <= b."""
    if not bound >= 3:
        raise ValueError(f"Robin's bound needs n >= 3, got {bound}")
    lb = iv.log(_iv(bound))
    val = iv.mpf("1.385") * lb / iv.log(lb)
    # bound is increasing for b >= e^e; below that the value at 3 dominates
    return int(mp.floor(_upper(val)))


def omega_max_primorial(bound) -> int:
    """Largest k with primorial(k) <= bound."""
    if not bound >= 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    limit = math.floor(_exact_real(bound))
    k = 0
    while primorial(k + 1) <= limit:
        k += 1
    return k


def trivial_x(p) -> mpf:
    """sqrt(p) - 2, rounded down."""
    return _lower(iv.sqrt(_iv(p)) - 2)


def ankeny_beats_trivial(p, omega: int) -> bool:
    """True when ankeny_bound(p, omega) < sqrt(p) - 2, decided conservatively."""
    return ankeny_bound(p, omega).value < trivial_x(p)


def _least_threshold(holds: Callable[[int], bool], start: int, cap: int = THRESHOLD_CAP) -> int:
    """Least integer T > base with holds(T), for a predicate monotone in p.

    ``start`` is only a hint for where to begin: the search doubles upward
    from it, or bisects below it when it already holds.
    """
    if holds(start):
        lo, hi = _SEARCH_BASE, start
    else:
        lo, hi = start, 2 * start
        while not holds(hi):
            if hi > cap:
                raise UnboundedCaseError(f"no threshold below {cap:.3g}")
            lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _robin_entry_ok(start: int) -> bool:
    # With omega replaced by the continuous Robin bound w(t), t = log p, the
    # condition reads 2 log(1.6 (2^w(t) - 1) t) < t/2.  Dividing by t, the
    # left side is decreasing for t >= e, so checking at the start suffices.
    t = iv.log(_iv(start))
    w = iv.mpf("1.385") * t / iv.log(t)
    lhs = 2 * iv.log(iv.mpf(8) / 5 * (iv.mpf(2) ** w - 1) * t)
    sqrt_side = iv.exp(t / 2) - 2
    return bool(_upper(lhs) < _lower(iv.log(sqrt_side)))


def shrink_fixpoint(start_bound=10**49) -> ShrinkResult:
    """Alternate primorial omega-bounds and Ankeny thresholds until stable."""
    start = math.ceil(_exact_real(start_bound))
    if start < ANKENY_MIN_P or not _robin_entry_ok(start):
        raise InvalidStartError(f"start bound {start_bound} does not clear Robin's omega bound")
    p_max = start
    omega = omega_max_primorial(p_max)
    chain = [(p_max, omega)]
    while True:
        nxt = _least_threshold(lambda q: q >= ANKENY_MIN_P and ankeny_beats_trivial(q, omega), p_max)
        if nxt >= p_max:
            break
        p_max = nxt
        omega = omega_max_primorial(p_max)
        chain.append((p_max, omega))
    return ShrinkResult(chain, chain[-1][0], chain[-1][1])


def sieve_delta(primes) -> mpf:
    """1 - sum(1/q) over the sieving primes, rounded down."""
    exact = 1 - sum((Fraction(1, q) for q in primes), Fraction(0))
    return _lower(_iv(exact))


def _sieve_iv(p, x, n: int, s: int, delta):
    return (2 * _bach_c_iv(p, x) * (2 + (s - 1) / delta) * iv.mpf(2) ** (n - s) * iv.log(p)) ** 2


def _check_sieve_args(n: int, s: int, delta) -> None:
    if not delta > 0:
        raise ValueError(f"sieve needs delta > 0, got {delta}")
    if not 1 <= s <= n - 1:
        raise ValueError(f"need 1 <= s <= n-1, got s={s}, n={n}")


def sieve_bound(p, x, n: int, s: int, delta) -> BoundEvaluation:
    """(2 c(p,x) (2 + (s-1)/delta) 2^(n-s) log p)^2, valid when the least prime root exceeds x."""
    _check_sieve_args(n, s, delta)
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if not x >= 1:
        raise ValueError(f"x must be >= 1, got {x}")
    value = _upper(_sieve_iv(_iv(p), _iv(x), n, s, _iv(delta)))
    return BoundEvaluation(value, Assumption.GRH, {"p": p, "x": x, "n": n, "s": s, "delta": delta})


def sieve_beats_trivial(p, n: int, s: int, delta) -> bool:
    """True when the sieve bound at x = sqrt(p) - 2 is below sqrt(p) - 2."""
    P = _iv(p)
    x = iv.sqrt(P) - 2
    if _lower(x) < 1:
        return False
    return _upper(_sieve_iv(P, x, n, s, _iv(delta))) < _lower(x)


def exact_threshold(n: int, s: int, delta, start=10**15) -> int:
    """Least integer p with the sieve bound at x = sqrt(p) - 2 below sqrt(p) - 2."""
    _check_sieve_args(n, s, delta)
    holds = lambda q: sieve_beats_trivial(q, n, s, delta)  # noqa: E731
    guess = _float_threshold(n, s, float(delta), float(start))
    if guess is not None and guess > 2 * THRESHOLD_CAP:
        raise UnboundedCaseError(f"no threshold below {THRESHOLD_CAP:.3g}")
    if guess is not None:
        # the float estimate is good to far better than 1e-9; confirm rigorously
        lo, hi = int(guess * (1 - 1e-9)) - 2, int(guess * (1 + 1e-9)) + 2
        if lo > _SEARCH_BASE and not holds(lo) and holds(hi):
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if holds(mid):
                    hi = mid
                else:
                    lo = mid
            return hi
    return _least_threshold(holds, max(int(start), 10))


def _float_threshold(n: int, s: int, delta: float, start: float) -> float | None:
    def holds(p: float) -> bool:
        x = math.sqrt(p) - 2
        if x < 1:
            return False
        lp = math.log(p)
        c = 2 / 3 * (1 + 2 / math.sqrt(x) + 3 / x**1.5) * (1 + (5 / 3) / lp) + (math.log(x) + 2) / (math.sqrt(x) * lp)
        return (2 * c * (2 + (s - 1) / delta) * 2.0 ** (n - s) * lp) ** 2 < x

    lo, hi = float(_SEARCH_BASE), max(start, 10.0)
    while not holds(hi):
        if hi > 1e300:
            return None
        lo, hi = hi, 2 * hi
    for _ in range(200):
        mid = (lo + hi) / 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def solve_threshold(n: int, s: int, delta, floor_p, rel_tol=THRESHOLD_REL_TOL) -> int:
    """Upper end U >= floor_p beyond which the sieve bound beats sqrt(p) - 2.

    The exact integer threshold T is found by doubling and bisection (the
    predicate is monotone in p) and then padded upward by ``rel_tol``, so U
    overshoots the minimal value by at most that relative amount.  Pass
    rel_tol=0 for T itself.
    """
    _check_sieve_args(n, s, delta)
    floor_int = math.ceil(_exact_real(floor_p))
    T = exact_threshold(n, s, delta, start=max(floor_int, 10))
    pad = Fraction(str(rel_tol)) if isinstance(rel_tol, float) else Fraction(rel_tol)
    return max(floor_int, T + math.ceil(T * pad))


def table1_constant(p0) -> float:
    """C(p0) = 2 c(p0, ((4/3) 4 log p0)^2), rounded up at the fifth significant digit."""
    if not p0 >= 100:
        raise ValueError(f"p0 must be >= 10^2, got {p0}")
    P = _iv(p0)
    x = (iv.mpf(16) / 3 * iv.log(P)) ** 2
    value = _upper(2 * _bach_c_iv(P, x))
    return float(round_up_significant(value, 5))


def to_fraction(value) -> Fraction:
    """The exact rational value of a binary float (mpf or float)."""
    if not isinstance(value, mpf):
        value = mpf(value)  # floats are exact at the default 53 bits
    man, exp = value.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def round_up_significant(value, digits: int) -> Fraction:
    exact = to_fraction(value)
    if exact <= 0:
        raise ValueError("value must be positive")
    k = math.floor(math.log10(exact.numerator) - math.log10(exact.denominator))
    # guard log10 rounding at exact powers of ten
    while Fraction(10) ** k > exact:
        k -= 1
    while Fraction(10) ** (k + 1) <= exact:
        k += 1
    scale = Fraction(10) ** (digits - 1 - k)
    return Fraction(math.ceil(exact * scale)) / scale
