"""Print the alternating omega / size reduction chain for large p."""

import argparse

from grosswald import bounds
from grosswald.cli import big_int


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--start", type=big_int, default=10**49)
    args = parser.parse_args()
    res = bounds.shrink_fixpoint(args.start)
    for p, w in res.chain:
        print(f"p <= {p:.4e}  omega(p-1) <= {w}")


if __name__ == "__main__":
    main()
