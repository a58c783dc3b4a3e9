"""Unequal virtual-user counts on the DMC with uniform switches.

User ``i`` draws its switch uniformly over ``L_i`` positions and rates its
k-th virtual user by the binomial mixture at ``(k-1)/L_i``. The receiver
decodes whichever owner has made the least fractional progress.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dmc_core import (
    DmcChannel,
    MutualInfoTable,
    SwitchDistribution,
    binomial_rates,
    check_assumptions,
    mi_table,
)
from .schedule import (
    SLACK_TOL,
    DecodingSchedule,
    StepRecord,
    VerificationReport,
    check_counts,
    check_covers,
    greedy_order,
)


@dataclass(frozen=True)
class SwitchSystem:
    counts: tuple[int, ...]
    rates: tuple[tuple[float, ...], ...]  # rates[i-1][k-1], channel base
    table: MutualInfoTable

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, L) for L in self.counts)

    def totals(self) -> tuple[float, ...]:
        return tuple(float(sum(r)) for r in self.rates)


def protocol2_build(ch: DmcChannel, counts: Sequence[int], table: MutualInfoTable | None = None) -> SwitchSystem:
    counts = check_counts(counts)
    if len(counts) != ch.num_users:
        raise ValueError(f"need one count per user ({ch.num_users}), got {len(counts)}")
    if not check_assumptions(ch).symmetric:
        raise ValueError("the uniform-switch protocol needs a symmetric channel")
    table = table or mi_table(ch)
    # the rule uses user 1's information levels for everyone
    levels = table.levels(1)
    rates = tuple(tuple(binomial_rates(levels, SwitchDistribution.uniform(L)).tolist()) for L in counts)
    system = SwitchSystem(counts, rates, table)
    limit = table.total / ch.num_users
    assert all(t <= limit + SLACK_TOL for t in system.totals())
    return system


def run_protocol2(sys: SwitchSystem) -> DecodingSchedule:
    """Min-progress order; progress is kept as exact fractions so ties are exact."""
    start = [Fraction(1, L) for L in sys.counts]
    return greedy_order(sys.counts, start, lambda i, k: Fraction(1, sys.counts[i - 1]))


def available_information(table: MutualInfoTable, user: int, L_user: int,
                          known_fraction: Sequence[float]) -> float:
    """``I(X_ik; Y, switches, decoded virtual users)``.

    Conditioned on its own switch landing on position k (probability
    ``1/L_user``) the virtual user is the real input. Every other user j is
    known with probability ``known_fraction[j-1]``, independently.
    """
    rest = table.others(user)
    acc = 0.0
    for r in range(len(rest) + 1):
        for S in itertools.combinations(rest, r):
            w = 1.0
            for j in rest:
                w *= known_fraction[j - 1] if j in S else 1 - known_fraction[j - 1]
            if w:
                acc += w * table.single[(user, frozenset(S))]
    return acc / L_user


def verify_schedule_dmc(ch: DmcChannel, sys: SwitchSystem, schedule: DecodingSchedule) -> VerificationReport:
    check_covers(schedule, sys.counts)
    M = len(sys.counts)
    decoded = [0] * M
    pending = []
    steps = []
    for n, (i, k) in enumerate(schedule.order):
        frac = [decoded[j] / sys.counts[j] for j in range(M)]
        mi = available_information(sys.table, i, sys.counts[i - 1], frac)
        rate = sys.rates[i - 1][k - 1]
        steps.append(StepRecord(i, k, mi, rate, mi - rate))
        if n < schedule.parallel:
            pending.append(i)
            if n == schedule.parallel - 1:
                for j in pending:
                    decoded[j - 1] += 1
        else:
            decoded[i - 1] += 1
    return VerificationReport(schedule, tuple(steps))


def rate_loss(sys: SwitchSystem) -> np.ndarray:
    """Per-user gap to the symmetric limit ``I(X_1..X_M;Y)/M``."""
    limit = sys.table.total / len(sys.counts)
    return limit - np.array(sys.totals())
