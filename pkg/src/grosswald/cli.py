"""Command-line entry point: ``grosswald <command> ...``.

Every command prints JSON lines on stdout; wall-clock timing goes to stderr
so that repeated runs produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from grosswald import bounds, proots, search
from grosswald.arith import IncompleteFactorizationError, factorize, is_probable_prime
from grosswald.bounds import Assumption

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_CAP = 3

# the conjecture is claimed above these primes
G_THRESHOLD = 409
G_HAT_THRESHOLD = 2791

# published values of C(p0), for side-by-side comparison
TABLE1_REFERENCE = {
    2: "2.1127",
    4: "1.6821",
    6: "1.5556",
    8: "1.496",
    10: "1.4614",
    12: "1.4389",
    14: "1.4231",
    16: "1.4114",
    18: "1.4023",
    20: "1.3952",
}


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    assumptions: Assumption
    timing: float = 0.0
    extra_lines: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "assumptions": self.assumptions.value,
        }


def big_int(text: str) -> int:
    """Parse a decimal integer, also accepting exact scientific notation like 2.5e15."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def real(text: str) -> Decimal:
    try:
        return Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _exact(value: Decimal):
    """Hand a Decimal to the bounds module without losing exactness."""
    if value == value.to_integral_value():
        return int(value)
    return Fraction(value)


def default_threads() -> int:
    env = os.environ.get("GROSSWALD_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_table1(args) -> RunReport:
    rows = []
    for k, ref in TABLE1_REFERENCE.items():
        c = bounds.table1_constant(10**k)
        rows.append({"p0": f"1e{k}", "C": f"{c:.5g}", "reference": ref, "abs_diff": float(f"{abs(c - float(ref)):.3g}")})
    worst = max(r["abs_diff"] for r in rows)
    return RunReport("table1", {}, {"rows": rows, "max_abs_diff": worst}, Assumption.GRH)


def cmd_shrink(args) -> RunReport:
    res = bounds.shrink_fixpoint(args.start)
    chain = [{"p_max": str(p), "p_max_approx": f"{p:.3e}", "omega_max": w} for p, w in res.chain]
    results = {
        "chain": chain,
        "final_p_max": str(res.final_p_max),
        "final_p_max_approx": f"{res.final_p_max:.3e}",
        "final_omega_max": res.final_omega_max,
        "robin_omega_at_start": bounds.omega_max_robin(args.start),
    }
    return RunReport("shrink", {"start": str(args.start)}, results, Assumption.GRH)


def cmd_search(args) -> RunReport:
    config = search.SearchConfig(floor=args.floor, enum_cap=args.cap, workers=args.threads)
    report = search.run_case(args.n, config)
    if args.out:
        search.write_exceptions(report.records, args.out)
    inputs = {"n": args.n, "floor": str(args.floor), "cap": args.cap, "out": args.out}
    lines = [{"case": c.as_dict()} for c in report.summaries]
    return RunReport("search", inputs, report.summary(), report.assumptions, extra_lines=lines)


def cmd_verify(args) -> RunReport:
    mode = "g_hat" if args.mode in ("ghat", "g_hat") else "g"
    bad = proots.verify_range(args.lo, args.hi, mode, workers=args.threads)
    inputs = {"from": str(args.lo), "to": str(args.hi), "mode": mode}
    limit = G_THRESHOLD if mode == "g" else G_HAT_THRESHOLD
    results = {"failures": [str(p) for p in bad], "counterexamples": [str(p) for p in bad if p > limit]}
    return RunReport("verify", inputs, results, Assumption.UNCONDITIONAL)


def cmd_check(args) -> RunReport:
    if not is_probable_prime(args.p):
        raise ValueError(f"{args.p} is not prime")
    rep = proots.grosswald_check(args.p)
    results = rep.as_dict()
    results["counterexample"] = (args.p > G_THRESHOLD and not rep.passes_g) or (
        args.p > G_HAT_THRESHOLD and not rep.passes_g_hat
    )
    return RunReport("check", {"p": str(args.p)}, results, Assumption.UNCONDITIONAL)


def cmd_recheck(args) -> RunReport:
    """Independently re-verify every record of an exceptions file."""
    rows = search.read_exceptions(args.file)
    problems = []
    failing = []
    for row in rows:
        p = int(row["p"])
        fac = factorize(p - 1)
        claimed = [[int(q), e] for q, e in row["factors"]]
        ok = (
            is_probable_prime(p)
            and [list(f) for f in fac.factors] == claimed
            and fac.omega == row["n"]
            and all((p - 1) % q == 0 for q in row["case_X"])
            and all((p - 1) % q for q in row["case_Y"])
        )
        rep = proots.grosswald_check(p, fac)
        if "g_hat" in row and (rep.g_hat != row["g_hat"] or rep.g != row["g"]):
            ok = False
        if not ok:
            problems.append(row["p"])
        if not rep.passes_g_hat:
            failing.append(row["p"])
    results = {"records": len(rows), "inconsistent": problems, "counterexamples": failing}
    return RunReport("recheck", {"file": args.file}, results, Assumption.UNCONDITIONAL)


def cmd_bounds(args) -> RunReport:
    if args.formula == "c":
        value = bounds.bach_c(_exact(args.p), _exact(args.x))
        inputs = {"p": str(args.p), "x": str(args.x)}
        kind = Assumption.GRH
    elif args.formula == "ankeny":
        value = bounds.ankeny_bound(_exact(args.p), args.omega).value
        inputs = {"p": str(args.p), "omega": args.omega}
        kind = Assumption.GRH
    elif args.formula == "sieve":
        x = _exact(args.x) if args.x is not None else bounds.trivial_x(_exact(args.p))
        value = bounds.sieve_bound(_exact(args.p), x, args.n, args.s, _exact(args.delta)).value
        inputs = {"p": str(args.p), "x": str(x), "n": args.n, "s": args.s, "delta": str(args.delta)}
        kind = Assumption.GRH
    else:  # threshold
        params, upper = search.best_sieve_params(args.n, args.Y, args.floor)
        inputs = {"n": args.n, "Y": args.Y, "floor": str(args.floor)}
        results = {
            "s": params.s,
            "delta": str(params.delta),
            "M": list(params.M),
            "lower": str(search.lower_end(args.n, args.Y, args.floor)),
            "upper": str(upper),
        }
        return RunReport("bounds", {"formula": "threshold", **inputs}, results, Assumption.GRH)
    return RunReport("bounds", {"formula": args.formula, **inputs}, {"value": str(value)}, kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grosswald", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", help="recompute the C(p0) constants").set_defaults(func=cmd_table1)

    p = sub.add_parser("shrink", help="iterate the omega / size reduction for large p")
    p.add_argument("--start", type=big_int, default=10**49)
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("search", help="run the case-splitting search for omega(p-1) = n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--floor", type=big_int, default=search.DEFAULT_FLOOR)
    p.add_argument("--cap", type=big_int, default=search.DEFAULT_ENUM_CAP)
    p.add_argument("--out", default=None, help="exceptions file (JSON lines)")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check root(p) < sqrt(p) - 2 for all primes in (from, to]")
    p.add_argument("--from", dest="lo", type=big_int, required=True)
    p.add_argument("--to", dest="hi", type=big_int, required=True)
    p.add_argument("--mode", choices=["g", "ghat", "g_hat"], default="g")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="least (prime) primitive root of one prime")
    p.add_argument("--p", type=big_int, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("recheck", help="re-verify an exceptions file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_recheck)

    p = sub.add_parser("bounds", help="evaluate a bound formula directly")
    p.add_argument("formula", choices=["c", "ankeny", "sieve", "threshold"])
    p.add_argument("--p", type=real)
    p.add_argument("--x", type=real)
    p.add_argument("--omega", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--delta", type=real)
    p.add_argument("--Y", type=int, nargs="*", default=[])
    p.add_argument("--floor", type=big_int, default=search.DEFAULT_FLOOR)
    p.set_defaults(func=cmd_bounds)
    return parser


_REQUIRED = {
    "c": ("p", "x"),
    "ankeny": ("p", "omega"),
    "sieve": ("p", "n", "s", "delta"),
    "threshold": ("n",),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if getattr(args, "threads", 0) is None:
        args.threads = default_threads()
    if args.command == "bounds":
        missing = [k for k in _REQUIRED[args.formula] if getattr(args, k) is None]
        if missing:
            parser.error(f"bounds {args.formula} needs --{', --'.join(missing)}")

    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except (bounds.UnboundedCaseError, search.RecursionDepthError, IncompleteFactorizationError, search.MustSplit) as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}), file=sys.stdout)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.timing = time.perf_counter() - t0

    for line in report.extra_lines:
        print(json.dumps(line, separators=(",", ":")))
    print(json.dumps(report.as_dict(), separators=(",", ":")))
    print(json.dumps({"command": report.command, "seconds": round(report.timing, 3)}), file=sys.stderr)
    return _exit_code(report)


def _exit_code(report: RunReport) -> int:
    res = report.results
    if res.get("counterexamples") or res.get("counterexample") or res.get("inconsistent"):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
