"""Recompute the C(p0) constants and compare them with the published column."""

import argparse

from grosswald import bounds
from grosswald.cli import TABLE1_REFERENCE


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tol", type=float, default=1e-4)
    args = parser.parse_args()
    worst = 0.0
    print(f"{'p0':>6} {'C(p0)':>8} {'reference':>9}")
    for k, ref in TABLE1_REFERENCE.items():
        c = bounds.table1_constant(10**k)
        worst = max(worst, abs(c - float(ref)))
        print(f"{'1e' + str(k):>6} {c:>8.5g} {ref:>9}")
    print(f"max abs difference {worst:.2e} ({'ok' if worst <= args.tol else 'FAILS'} at tol {args.tol})")


if __name__ == "__main__":
    main()
