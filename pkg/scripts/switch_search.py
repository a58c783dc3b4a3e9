"""Grid search for the best finite-L switch on the binary adder channel.

With two users the uniform switch wins; with three a skewed switch beats it.

    python scripts/switch_search.py --users 2 3 --levels 2 3
"""

import argparse
import sys

from drs.dmc_core import binary_adder
from drs.oracles import grid_optimal_switch


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--users", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--levels", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--resolution", type=float, default=1e-3)
    args = ap.parse_args(argv)

    print("M,L,uniform_total,best_total,gain,best_weights")
    for M in args.users:
        ch = binary_adder(M, "bit")
        for L in args.levels:
            res = grid_optimal_switch(ch, M, L, args.resolution)
            weights = " ".join(f"{x:.4f}" for x in res.best.weights)
            print(f"{M},{L},{res.uniform_total:.9f},{res.best_total:.9f},{res.gain:.3e},{weights}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
