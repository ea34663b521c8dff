"""Run the full case search for n = 12, 13, 14 and write one exceptions file per n."""

import argparse
import pathlib

from grosswald import search

EXPECTED = {12: 61114, 13: 6916, 14: 0}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--n", type=int, nargs="*", default=sorted(EXPECTED))
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = search.SearchConfig(workers=args.threads)
    for n in args.n:
        report = search.run_case(n, config)
        search.write_exceptions(report.records, out / f"exceptions_n{n}.jsonl")
        s = report.summary()
        want = EXPECTED.get(n, "?")
        print(
            f"n={n}: {s['exceptions']} exceptions (expected {want}), {s['cases']} cases, "
            f"{s['leaves']} leaves, holds={s['holds']}, {report.seconds:.1f} s"
        )


if __name__ == "__main__":
    main()
