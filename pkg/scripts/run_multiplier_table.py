#!/usr/bin/env python3
"""Rashomon-multiplier table for one or more datasets.

For each dataset, reports the smallest epsilon whose Rashomon set reaches
10^1 .. 10^4 trees (extend with --powers). Example:

    python scripts/run_multiplier_table.py data/monk1.txt --depth 4
"""
import argparse
import sys

from rashenum import find_min_multiplier, load_dataset


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("datasets", nargs="+", help="dataset files")
    parser.add_argument("--depth", type=int, default=4)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.01)
    parser.add_argument("--powers", default="1,2,3,4")
    args = parser.parse_args(argv)
    powers = [int(p) for p in args.powers.split(",")]

    print("dataset,target,epsilon,achieved_count")
    for path in args.datasets:
        ds = load_dataset(path)
        for p in powers:
            res = find_min_multiplier(ds, args.depth, args.lam, 10 ** p)
            eps = "undefined" if res.epsilon is None else f"{res.epsilon:.4f}"
            print(f"{path},{10 ** p},{eps},{res.achieved_count}")
            sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
