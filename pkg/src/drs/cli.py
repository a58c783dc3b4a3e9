"""Command-line front end: ``drs split``, ``drs sweep``, ``drs schedule``.

Exit codes: 0 ok, 1 precondition violated, 2 bad flags or unreadable
channel file, 3 schedule failed verification.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import dmc_core, dmc_protocol, gaussian_core as gc, gaussian_protocol as gp
from .schedule import DecodingSchedule, VerificationReport

SWEEP_COLUMNS = ("L", "total", "r_star", "error", "scaled_error")
EXIT_PRECONDITION, EXIT_USAGE, EXIT_VERIFY = 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _order(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        try:
            i, k = item.split(":")
            out.append((int(i), int(k)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"order entries look like owner:index, got {item!r}") from exc
    return out


def _add_channel_flags(p: argparse.ArgumentParser, users_required: bool = False) -> None:
    p.add_argument("--users", type=int, help="number of real users M")
    power = p.add_mutually_exclusive_group()
    power.add_argument("--power", type=float, help="common per-user power P")
    power.add_argument("--powers", type=_float_list, help="per-user powers p1,p2,...")
    p.add_argument("--noise", type=float, default=1.0, help="noise variance N (default 1)")
    p.add_argument("--base", choices=("nat", "bit"), default="nat")


def _channel(args, M_hint: int | None = None) -> gc.GaussianChannel:
    if args.powers is not None:
        if args.users is not None and args.users != len(args.powers):
            raise ValueError("--users disagrees with the number of --powers")
        return gc.GaussianChannel(len(args.powers), tuple(args.powers), args.noise, args.base)
    M = args.users if args.users is not None else M_hint
    if M is None:
        raise UsageError("--users is required with --power")
    P = 1.0 if args.power is None else args.power
    return gc.GaussianChannel.symmetric(M, P, args.noise, args.base)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drs", description="Distributed rate splitting calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="power split, rates and SIRs for one L")
    _add_channel_flags(p)
    p.add_argument("--levels", type=int, required=True, help="virtual users per real user L")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("sweep", help="CSV of total rate and error against L")
    _add_channel_flags(p)
    p.add_argument("--l-max", type=int, required=True)
    p.add_argument("--family", choices=sorted(gc.FAMILIES), default="optimal")

    p = sub.add_parser("schedule", help="decode order and per-step slack for unequal counts")
    _add_channel_flags(p)
    p.add_argument("--counts", type=_int_list, required=True, help="virtual users per real user L1,L2,...")
    p.add_argument("--channel", help="DMC description (JSON); omit for the Gaussian channel")
    p.add_argument("--order", type=_order, help="verify this order (owner:index,...) instead of the protocol's")
    p.add_argument("--parallel", type=int, default=None,
                   help="leading entries of --order decoded jointly (default: number of users)")
    p.add_argument("--json", action="store_true")
    return parser


def cmd_split(args, out) -> int:
    ch = _channel(args)
    L = args.levels
    if L < 1:
        raise ValueError("--levels must be >= 1")
    if ch.is_symmetric:
        split = gc.optimal_split(ch, L)
        alloc = gc.rate_allocation(ch, split)
        r_star = gc.max_equal_rate(ch)
        result = {
            "users": ch.num_users, "power": ch.power, "noise": ch.noise, "base": ch.log_base, "L": L,
            "levels": list(split.levels), "sirs": list(alloc.sirs), "rates": list(alloc.rates),
            "total": alloc.total, "r_star": r_star, "error": r_star - alloc.total,
        }
        if args.json:
            out.write(json.dumps(result, indent=1) + "\n")
            return 0
        out.write(f"{'k':>4} {'power':>16} {'SIR':>16} {'rate':>16}\n")
        for k, (p, s, r) in enumerate(zip(split.levels, alloc.sirs, alloc.rates), start=1):
            out.write(f"{k:>4} {fmt(p):>16} {fmt(s):>16} {fmt(r):>16}\n")
        out.write(f"total  {fmt(alloc.total)} {ch.log_base}s\n")
        out.write(f"R*     {fmt(r_star)} {ch.log_base}s\n")
        out.write(f"e[L]   {fmt(r_star - alloc.total)} {ch.log_base}s\n")
        return 0

    gam = gc.asymmetric_fractions(ch, L)
    allocs = gc.asymmetric_rates(ch, gam)
    limits = gc.asymmetric_limit_rates(ch)
    result = {
        "users": ch.num_users, "powers": list(ch.powers), "noise": ch.noise, "base": ch.log_base, "L": L,
        "fractions": list(gam),
        "per_user": [
            {"power": P_i, "levels": [g * P_i for g in gam], "rates": list(a.rates), "total": a.total,
             "limit": lim}
            for P_i, a, lim in zip(ch.powers, allocs, limits)
        ],
    }
    if args.json:
        out.write(json.dumps(result, indent=1) + "\n")
        return 0
    out.write("gamma  " + " ".join(fmt(g) for g in gam) + "\n")
    out.write(f"{'user':>4} {'power':>12} {'total':>16} {'limit':>16}\n")
    for i, (P_i, a, lim) in enumerate(zip(ch.powers, allocs, limits), start=1):
        out.write(f"{i:>4} {fmt(P_i):>12} {fmt(a.total):>16} {fmt(lim):>16}\n")
    return 0


def sweep_rows(ch: gc.GaussianChannel, l_max: int, family: str = "optimal"):
    if l_max < 1:
        raise ValueError("--l-max must be >= 1")
    r_star = gc.max_equal_rate(ch)
    if family == "optimal":
        for rec in gc.error_curve(ch, l_max):
            yield rec.L, rec.achieved, rec.target, rec.error, rec.scaled_error
        return
    totals = gc.general_split_limit_check(ch, gc.FAMILIES[family], l_max)
    for L, t in enumerate(totals, start=1):
        yield L, t, r_star, r_star - t, L * (r_star - t)


def cmd_sweep(args, out) -> int:
    ch = _channel(args)
    if not ch.is_symmetric:
        raise ValueError("sweep needs equal powers")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for L, *vals in sweep_rows(ch, args.l_max, args.family):
        writer.writerow([L] + [fmt(v) for v in vals])
    return 0


def _load_channel(path: str, base: str) -> dmc_core.DmcChannel:
    try:
        return dmc_core.DmcChannel.load(path, base)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read channel file {path}: {exc}") from exc


def cmd_schedule(args, out) -> int:
    counts = args.counts
    if any(c < 1 for c in counts):
        raise ValueError("counts must be ≥ 1")
    if args.channel:
        ch = _load_channel(args.channel, args.base)
        system = dmc_protocol.protocol2_build(ch, counts)
        schedule = dmc_protocol.run_protocol2(system)
        if args.order:
            schedule = DecodingSchedule(tuple(args.order), args.parallel if args.parallel is not None else len(counts))
        report = dmc_protocol.verify_schedule_dmc(ch, system, schedule)
        kind = "dmc"
    else:
        ch = _channel(args, M_hint=len(counts))
        users = gp.build_virtual_users(ch, counts)
        schedule = gp.run_protocol1(users, ch)
        if args.order:
            schedule = DecodingSchedule(tuple(args.order), args.parallel if args.parallel is not None else len(counts))
        report = gp.verify_schedule(users, schedule, ch)
        kind = "gaussian"
    write_report(out, report, kind, args.json)
    return 0 if report.ok else EXIT_VERIFY


def write_report(out, report: VerificationReport, kind: str, as_json: bool) -> None:
    if as_json:
        d = report.to_dict()
        d["channel"] = kind
        out.write(json.dumps(d, indent=1) + "\n")
        return
    out.write("order  " + ",".join(report.schedule.labels()) + "\n")
    out.write(f"{'step':>4} {'vu':>5} {'tolerance':>16} {'actual':>16} {'slack':>16}\n")
    for n, s in enumerate(report.steps, start=1):
        out.write(f"{n:>4} {f'{s.owner}{s.index}':>5} {fmt(s.tolerance):>16} {fmt(s.actual):>16} {fmt(s.slack):>16}\n")
    out.write("verdict OK\n" if report.ok else
              f"verdict FAIL at {report.first_failure.owner}{report.first_failure.index}\n")


COMMANDS = {"split": cmd_split, "sweep": cmd_sweep, "schedule": cmd_schedule}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"drs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"drs: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
