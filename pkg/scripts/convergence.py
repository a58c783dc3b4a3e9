"""Scaled error L*e[L] of the optimal split against its limiting constant.

    python scripts/convergence.py --users 2 3 5 --l-max 1000 > convergence.csv
"""

import argparse
import csv
import sys

from drs.gaussian_core import GaussianChannel, error_curve, limit_constant


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--users", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--power", type=float, default=1.0)
    ap.add_argument("--noise", type=float, default=1.0)
    ap.add_argument("--l-max", type=int, default=1000)
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["M", "L", "error", "scaled_error", "limit", "ratio"])
    for M in args.users:
        ch = GaussianChannel.symmetric(M, args.power, args.noise)
        const = limit_constant(ch)
        for rec in error_curve(ch, args.l_max):
            w.writerow([M, rec.L, f"{rec.error:.12g}", f"{rec.scaled_error:.12g}", f"{const:.12g}",
                        f"{rec.scaled_error / const:.12g}"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
