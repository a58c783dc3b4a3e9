"""Random unequal-count trials for both decoding protocols.

Reports the smallest slack seen; a negative value below -1e-12 means a
schedule that does not decode.

    python scripts/protocol_trials.py --gaussian 1000 --dmc 500 --seed 0
"""

import argparse
import sys

import numpy as np

from drs.dmc_core import binary_adder, binary_xor, mi_table
from drs.dmc_protocol import protocol2_build, run_protocol2, verify_schedule_dmc
from drs.gaussian_core import GaussianChannel
from drs.gaussian_protocol import build_virtual_users, run_protocol1, verify_schedule


def gaussian_trials(rng, n):
    worst = (np.inf, None)
    for _ in range(n):
        M = int(rng.integers(1, 7))
        counts = rng.integers(1, 11, size=M).tolist()
        ch = GaussianChannel.symmetric(M, float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.1, 5.0)))
        users = build_virtual_users(ch, counts)
        s = verify_schedule(users, run_protocol1(users, ch), ch).min_slack
        worst = min(worst, (s, counts), key=lambda t: t[0])
    return worst


def dmc_trials(rng, n):
    chans = {(k, M): f(M, "bit") for k, f in (("adder", binary_adder), ("xor", binary_xor)) for M in (1, 2, 3, 4)}
    tables = {k: mi_table(c) for k, c in chans.items()}
    worst = (np.inf, None)
    for _ in range(n):
        key = (("adder", "xor")[int(rng.integers(2))], int(rng.integers(1, 5)))
        counts = rng.integers(1, 7, size=key[1]).tolist()
        system = protocol2_build(chans[key], counts, tables[key])
        s = verify_schedule_dmc(chans[key], system, run_protocol2(system)).min_slack
        worst = min(worst, (s, (key[0], counts)), key=lambda t: t[0])
    return worst


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--gaussian", type=int, default=1000)
    ap.add_argument("--dmc", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    g, d = gaussian_trials(rng, args.gaussian), dmc_trials(rng, args.dmc)
    print(f"gaussian: {args.gaussian} trials, min slack {g[0]:.3e} (counts {g[1]})")
    print(f"dmc:      {args.dmc} trials, min slack {d[0]:.3e} (channel/counts {d[1]})")
    return 0 if min(g[0], d[0]) >= -1e-12 else 1


if __name__ == "__main__":
    sys.exit(main())
