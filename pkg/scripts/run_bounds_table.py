#!/usr/bin/env python3
"""Print the lower/upper bound table over a (k, t, m) grid.

Columns per cell: the trivial product lower bound (m-1)(t+1), the random-
recipe scale m^2 t / log^2(mt), the certified vertex count when the
certification pipeline succeeds (blank when it refuses or fails, with the
reason in the last column), and the k-color upper bound with caller-supplied
c1.

    python scripts/run_bounds_table.py --k 2 3 4 --t 10 100 --m 10000 1000000
"""

import argparse
import csv
import json
import sys

from ramseycert.bounds import bounds_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--t", type=int, nargs="+", default=[4, 16])
    ap.add_argument("--m", type=int, nargs="+", default=[10**6, 10**8])
    ap.add_argument("--c1", type=float, default=1.0)
    ap.add_argument("--format", choices=["text", "csv", "json"], default="text")
    args = ap.parse_args(argv)

    rows = bounds_table(args.k, args.t, args.m, c1=args.c1)
    if args.format == "json":
        print(json.dumps({"rows": rows}, indent=2, sort_keys=True))
        return 0
    cols = ["k", "t", "m", "simple_lower", "random_recipe_scale",
            "certified_n", "prop1_upper", "certify_failure"]
    if args.format == "csv":
        w = csv.DictWriter(sys.stdout, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)
        return 0
    print(" ".join(f"{c:>20s}" for c in cols))
    for r in rows:
        cells = []
        for c in cols:
            v = r[c]
            if isinstance(v, float):
                v = f"{v:.4g}"
            cells.append(f"{'' if v is None else v:>20}")
        print(" ".join(cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
