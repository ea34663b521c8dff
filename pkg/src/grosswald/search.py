"""Recursive case splitting on the small prime divisors of p - 1.

For a target n = omega(p - 1) and constraints (X divides p - 1, Y does not),
the sieve bound gives an upper end for possible exceptions and the primorial
of the first n primes outside Y a lower end.  Cases whose interval is still
too long are split on the next prime; short ones are enumerated directly.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from grosswald.arith import Factorization, factorize, first_primes, is_probable_prime, small_primes
from grosswald.bounds import THRESHOLD_REL_TOL, Assumption, UnboundedCaseError, sieve_delta, solve_threshold
from grosswald.proots import RootReport, grosswald_check

log = logging.getLogger(__name__)

DEFAULT_FLOOR = 2 * 10**15
COT_FLOOR = 25 * 10**14
DEFAULT_ENUM_CAP = 10**6
SEGMENT = 1 << 22
# trial primes for the per-segment omega sieve; cofactors above this squared
# are resolved one by one
OMEGA_SIEVE_BOUND = 1 << 16
_INT64_SAFE = 1 << 62


class MustSplit(Exception):
    """The case has more candidates than the enumeration cap allows."""


class RecursionDepthError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    floor: int = DEFAULT_FLOOR
    enum_cap: int = DEFAULT_ENUM_CAP
    max_split_primes: int = 64
    workers: int = 1
    segment: int = SEGMENT
    threshold_rel_tol: object = THRESHOLD_REL_TOL


@dataclass(frozen=True)
class CaseConstraints:
    n: int
    X: tuple[int, ...] = (2,)
    Y: tuple[int, ...] = ()

    def __post_init__(self):
        X, Y = tuple(sorted(set(self.X))), tuple(sorted(set(self.Y)))
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        if set(X) & set(Y):
            raise ValueError(f"X and Y overlap: {set(X) & set(Y)}")
        k = len(X) + len(Y)
        if sorted(X + Y) != first_primes(k):
            raise ValueError("X and Y must together be the first |X| + |Y| primes")

    @property
    def prod_x(self) -> int:
        return math.prod(self.X)

    def next_prime(self) -> int:
        return first_primes(len(self.X) + len(self.Y) + 1)[-1]

    def split(self) -> tuple["CaseConstraints", "CaseConstraints"]:
        q = self.next_prime()
        return replace(self, X=self.X + (q,)), replace(self, Y=self.Y + (q,))

    def as_dict(self) -> dict:
        return {"n": self.n, "X": list(self.X), "Y": list(self.Y)}


@dataclass(frozen=True)
class SieveParams:
    n: int
    s: int
    delta: object
    M: tuple[int, ...]
    L: tuple[int, ...]


@dataclass(frozen=True)
class SearchInterval:
    lower: int
    upper: int

    @property
    def empty(self) -> bool:
        return self.upper <= self.lower

    def k_range(self, prod_x: int) -> range:
        """The k with lower <= k * prod_x + 1 <= upper."""
        if self.empty:
            return range(0)
        k_lo = -(-(self.lower - 1) // prod_x)
        k_hi = (self.upper - 1) // prod_x
        return range(k_lo, k_hi + 1)


@dataclass
class ExceptionRecord:
    p: int
    factorization: Factorization
    case: CaseConstraints
    report: RootReport | None = None

    def check_invariants(self) -> None:
        fac, case = self.factorization, self.case
        assert fac.value == self.p - 1
        assert is_probable_prime(self.p)
        assert fac.omega == case.n
        assert all((self.p - 1) % q == 0 for q in case.X)
        assert all((self.p - 1) % q for q in case.Y)

    def as_dict(self) -> dict:
        out = {
            "p": str(self.p),
            "n": self.case.n,
            "factors": [[str(q), e] for q, e in self.factorization.factors],
            "case_X": list(self.case.X),
            "case_Y": list(self.case.Y),
        }
        if self.report is not None:
            out.update(
                g=self.report.g,
                g_hat=self.report.g_hat,
                passes_g=self.report.passes_g,
                passes_g_hat=self.report.passes_g_hat,
            )
        return out


@dataclass
class CaseSummary:
    """One line of the search trace: the chosen sieve parameters for a case."""

    case: CaseConstraints
    s: int | None
    delta: object
    M: tuple[int, ...]
    interval: SearchInterval
    action: str

    def as_dict(self) -> dict:
        return {
            "n": self.case.n,
            "X": list(self.case.X),
            "Y": list(self.case.Y),
            "s": self.s,
            "delta": None if self.delta is None else str(self.delta),
            "M": list(self.M),
            "lower": str(self.interval.lower),
            "upper": str(self.interval.upper),
            "action": self.action,
        }


@dataclass
class CaseReport:
    n: int
    config: SearchConfig
    records: list[ExceptionRecord]
    summaries: list[CaseSummary] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def counterexamples(self) -> list[ExceptionRecord]:
        return [r for r in self.records if r.report is not None and not r.report.passes_g_hat]

    @property
    def holds(self) -> bool:
        return all(r.report is not None and r.report.passes_g_hat for r in self.records)

    @property
    def assumptions(self) -> Assumption:
        return Assumption.MIXED if self.records else Assumption.GRH

    def summary(self) -> dict:
        return {
            "n": self.n,
            "exceptions": len(self.records),
            "counterexamples": [str(r.p) for r in self.counterexamples],
            "holds": self.holds,
            "cases": len(self.summaries),
            "leaves": sum(1 for c in self.summaries if c.action == "enumerate"),
            "assumptions": self.assumptions.value,
        }


def primes_not_in(count: int, excluded: Iterable[int]) -> tuple[int, ...]:
    excluded = set(excluded)
    out: list[int] = []
    k = count + len(excluded)
    while len(out) < count:
        out = [q for q in first_primes(k) if q not in excluded][:count]
        k *= 2
    return tuple(out)


def lower_end(n: int, Y: Iterable[int], floor: int) -> int:
    return max(math.prod(primes_not_in(n, Y)) + 1, floor)


@lru_cache(maxsize=4096)
def _best(n: int, Y: tuple[int, ...], floor: int, rel_tol):
    L = primes_not_in(n, Y)
    best = None
    for s in range(1, n):
        M = L[-s:]
        delta = sieve_delta(M)
        if delta <= 0:
            continue
        try:
            # rank on the unclamped threshold so that s is meaningful below the floor
            raw = solve_threshold(n, s, delta, 0, rel_tol)
        except UnboundedCaseError:
            continue
        if best is None or raw < best[1]:
            best = (SieveParams(n, s, delta, M, L), raw)
    if best is None:
        raise UnboundedCaseError(f"no usable sieve parameters for n={n}, Y={list(Y)}")
    params, raw = best
    return params, max(raw, floor), raw


def best_sieve_params(n: int, Y: Iterable[int] = (), floor: int = DEFAULT_FLOOR, rel_tol=THRESHOLD_REL_TOL):
    """The s (and its delta, M) giving the smallest threshold; returns (params, upper).

    ``upper`` is clamped to ``floor``; see raw_threshold for the unclamped value.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    params, upper, _ = _best(n, tuple(sorted(Y)), floor, rel_tol)
    return params, upper


def raw_threshold(n: int, Y: Iterable[int] = (), rel_tol=THRESHOLD_REL_TOL) -> int:
    """Best threshold over s, without the floor clamp."""
    return _best(n, tuple(sorted(Y)), 0, rel_tol)[2]


def case_interval(case: CaseConstraints, config: SearchConfig) -> tuple[SieveParams, SearchInterval]:
    params, upper = best_sieve_params(case.n, case.Y, config.floor, config.threshold_rel_tol)
    return params, SearchInterval(lower_end(case.n, case.Y, config.floor), upper)


def _segment_candidates(
    n: int, X: tuple[int, ...], Y: tuple[int, ...], k_lo: int, k_hi: int, p_min: int
) -> list[int]:
    """Primes p = k * prod(X) + 1 with k_lo <= k <= k_hi, no q in Y dividing k, omega(p-1) = n."""
    P = math.prod(X)
    size = k_hi - k_lo + 1
    if size <= 0:
        return []
    if k_hi * P + 1 >= _INT64_SAFE:
        return _segment_candidates_slow(n, X, Y, k_lo, k_hi)
    k = np.arange(k_lo, k_hi + 1, dtype=np.int64)
    keep = np.ones(size, dtype=bool)
    for q in Y:
        keep[(-k_lo) % q :: q] = False
    rem = k.copy()
    count = np.zeros(size, dtype=np.int16)
    xs = set(X)
    bound = max(min(math.isqrt(k_hi), OMEGA_SIEVE_BOUND), max(X + Y, default=2))
    for r in small_primes():
        if r > bound:
            break
        first = (-k_lo) % r
        if first < size:
            if r not in xs:
                count[first::r] += 1
            rem[first::r] //= r
            pw = r * r
            while pw <= k_hi:
                start = (-k_lo) % pw
                if start < size:
                    rem[start::pw] //= r
                pw *= r
        if r not in xs and r < p_min:
            # r divides p = kP + 1 exactly when k = -1/P mod r
            start = (-pow(P, -1, r) - k_lo) % r
            keep[start::r] = False
    large = rem > 1
    resolved = (rem <= bound * bound) | (bound >= math.isqrt(k_hi))
    omega = len(X) + count + large
    exact = keep & resolved & (omega == n)
    pending = keep & ~resolved & (omega <= n)
    out = []
    for i in np.flatnonzero(exact):
        p = int(k[i]) * P + 1
        if is_probable_prime(p):
            out.append(p)
    for i in np.flatnonzero(pending):
        p = int(k[i]) * P + 1
        if is_probable_prime(p):
            extra = factorize(int(rem[i])).omega
            if len(X) + int(count[i]) + extra == n:
                out.append(p)
    return sorted(out)


def _segment_candidates_slow(n, X, Y, k_lo, k_hi) -> list[int]:
    P = math.prod(X)
    out = []
    for k in range(k_lo, k_hi + 1):
        if any(k % q == 0 for q in Y):
            continue
        p = k * P + 1
        if is_probable_prime(p) and factorize(p - 1, seed_primes=X).omega == n:
            out.append(p)
    return out


def _segments(case: CaseConstraints, interval: SearchInterval, segment: int) -> Iterator[tuple]:
    ks = interval.k_range(case.prod_x)
    for start in range(ks.start, ks.stop, segment):
        stop = min(start + segment, ks.stop)
        yield (case, start, stop - 1, max(interval.lower, 2))


def _run_segment(task) -> list[ExceptionRecord]:
    case, k_lo, k_hi, p_min = task
    primes = _segment_candidates(case.n, case.X, case.Y, k_lo, k_hi, p_min)
    return [ExceptionRecord(p, factorize(p - 1, seed_primes=case.X), case) for p in primes]


def _check_cap(case: CaseConstraints, interval: SearchInterval, cap: int) -> None:
    if not interval.empty and (interval.upper - interval.lower) > cap * case.prod_x:
        raise MustSplit(f"{(interval.upper - interval.lower) // case.prod_x} candidates exceed cap {cap}")


def enumerate_candidates(
    case: CaseConstraints, interval: SearchInterval, config: SearchConfig = SearchConfig()
) -> list[ExceptionRecord]:
    """All admissible primes of the case inside the interval, sorted by p."""
    _check_cap(case, interval, config.enum_cap)
    records = []
    for task in _segments(case, interval, config.segment):
        records += _run_segment(task)
    return records


def plan_cases(root: CaseConstraints, config: SearchConfig) -> tuple[list[CaseSummary], list[tuple]]:
    """Walk the case tree (bounds only); return the trace and the leaf segments."""
    trace: list[CaseSummary] = []
    tasks: list[tuple] = []
    split_limit = first_primes(config.max_split_primes)[-1]
    stack = [root]
    while stack:
        case = stack.pop()
        params, interval = case_interval(case, config)
        if interval.empty:
            action = "nothing"
        elif interval.upper - interval.lower > config.enum_cap * case.prod_x:
            action = "split"
        else:
            action = "enumerate"
        trace.append(CaseSummary(case, params.s, params.delta, params.M, interval, action))
        log.debug("n=%d s=%d delta=%s M=%s lower=%d upper=%d %s X=%s Y=%s", case.n, params.s,
                  params.delta, params.M, interval.lower, interval.upper, action, case.X, case.Y)
        if action == "split":
            if case.next_prime() > split_limit:
                raise RecursionDepthError(f"splitting beyond the first {config.max_split_primes} primes")
            with_q, without_q = case.split()
            # divisor branch first: push it last
            stack += [without_q, with_q]
        elif action == "enumerate":
            tasks += list(_segments(case, interval, config.segment))
    return trace, tasks


def _map(fn, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def grosswald_recurse(case: CaseConstraints, config: SearchConfig = SearchConfig()) -> list[ExceptionRecord]:
    records, _ = _recurse(case, config)
    return records


def _recurse(case: CaseConstraints, config: SearchConfig):
    trace, tasks = plan_cases(case, config)
    parts = _map(_run_segment, tasks, config.workers)
    records = sorted((r for part in parts for r in part), key=lambda r: r.p)
    return records, trace


def _check_chunk(records: list[ExceptionRecord]) -> list[RootReport]:
    return [grosswald_check(r.p, r.factorization) for r in records]


def attach_reports(records: list[ExceptionRecord], workers: int = 1) -> None:
    size = max(1, math.ceil(len(records) / max(1, 4 * workers)))
    chunks = [records[i : i + size] for i in range(0, len(records), size)]
    reports = _map(_check_chunk, chunks, workers)
    for rec, rep in zip(records, (r for chunk in reports for r in chunk)):
        rec.report = rep


def run_case(n: int, config: SearchConfig = SearchConfig()) -> CaseReport:
    """Search the full case tree for omega(p - 1) = n and check every exception directly."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    t0 = time.perf_counter()
    records, trace = _recurse(CaseConstraints(n, (2,), ()), config)
    attach_reports(records, config.workers)
    return CaseReport(n, config, records, trace, time.perf_counter() - t0)


def write_exceptions(records: Iterable[ExceptionRecord], path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.as_dict(), separators=(",", ":")) + "\n")


def read_exceptions(path: str | os.PathLike) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
