"""Unequal virtual-user counts on the Gaussian MAC.

Each user picks its own number of levels ``L_i`` and applies the optimal
split for that count; the receiver decodes with a min-cumulative-power
rule so every virtual user meets the interference its rate can tolerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .gaussian_core import GaussianChannel, optimal_split, rate_allocation
from .schedule import (
    DecodingSchedule,
    StepRecord,
    VerificationReport,
    check_counts,
    check_covers,
    greedy_order,
)


@dataclass(frozen=True)
class VirtualUser:
    owner: int
    index: int
    power: float
    rate: float  # in the channel's log base


def build_virtual_users(ch: GaussianChannel, counts: Sequence[int]) -> list[VirtualUser]:
    counts = check_counts(counts)
    if len(counts) != ch.num_users:
        raise ValueError(f"need one count per user ({ch.num_users}), got {len(counts)}")
    users = []
    for i, L in enumerate(counts, start=1):
        split = optimal_split(ch, L)
        alloc = rate_allocation(ch, split)
        users.extend(
            VirtualUser(i, k, p, r)
            for k, (p, r) in enumerate(zip(split.levels, alloc.rates), start=1)
        )
    return users


def _counts_of(users: Sequence[VirtualUser]) -> list[int]:
    M = max(u.owner for u in users)
    counts = [0] * M
    for u in users:
        counts[u.owner - 1] = max(counts[u.owner - 1], u.index)
    return counts


def run_protocol1(users: Sequence[VirtualUser], ch: GaussianChannel) -> DecodingSchedule:
    by_id = {(u.owner, u.index): u for u in users}
    counts = _counts_of(users)
    start = [by_id[(i, 1)].power for i in range(1, len(counts) + 1)]
    return greedy_order(counts, start, lambda i, k: by_id[(i, k)].power)


def verify_schedule(
    users: Sequence[VirtualUser], schedule: DecodingSchedule, ch: GaussianChannel
) -> VerificationReport:
    """Compare tolerated against actual interference at every decode step.

    The tolerance follows from the virtual user's rate,
    ``p / (exp(2 r) - 1)``; the actual interference is everything not yet
    decoded other than the user itself, plus noise.
    """
    by_id = {(u.owner, u.index): u for u in users}
    if len(by_id) != len(users):
        raise ValueError("duplicate (owner, index) among virtual users")
    check_covers(schedule, _counts_of(users))
    total = math.fsum(u.power for u in users)
    to_nats = 1.0 / ch.scale

    removed = 0.0
    pending = 0.0
    steps = []
    for n, vid in enumerate(schedule.order):
        u = by_id[vid]
        tolerance = u.power / math.expm1(2 * u.rate * to_nats)
        actual = total - removed - u.power + ch.noise
        steps.append(StepRecord(u.owner, u.index, tolerance, actual, tolerance - actual))
        if n < schedule.parallel:
            pending += u.power
            if n == schedule.parallel - 1:
                removed += pending
        else:
            removed += u.power
    return VerificationReport(schedule, tuple(steps))
