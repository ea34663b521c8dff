"""How the exception counts move with the relative padding of the sieve threshold.

Each threshold T is replaced by T + ceil(T * pad). The default pad is 1/1000;
this scans pads around it and reruns the enumeration (without root checks).
"""

import argparse
from fractions import Fraction

from grosswald import search


def count(n, pad):
    config = search.SearchConfig(threshold_rel_tol=pad)
    return len(search.grosswald_recurse(search.CaseConstraints(n), config))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="*", default=[13, 12])
    parser.add_argument("--pads", nargs="*", default=["0", "1/2000", "9/10000", "19/20000", "1/1000", "21/20000", "11/10000"])
    args = parser.parse_args()
    for text in args.pads:
        pad = Fraction(text)
        counts = {n: count(n, pad) for n in args.n}
        print(f"pad={text:>10} ({float(pad):.5f})  " + "  ".join(f"n={n}: {c}" for n, c in counts.items()), flush=True)


if __name__ == "__main__":
    main()
