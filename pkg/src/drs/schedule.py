"""Decode orders and per-step verification records shared by both protocols."""

from __future__ import annotations

import heapq
import json
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

SLACK_TOL = 1e-12

VirtualUserId = tuple[int, int]  # (owner, index), both 1-based


@dataclass(frozen=True)
class DecodingSchedule:
    """Decode order; the first ``parallel`` entries are decoded jointly.

    A jointly decoded group sees none of its own members removed, which is
    the conservative reading of "decode in any order or in parallel".
    """

    order: tuple[VirtualUserId, ...]
    parallel: int = 0

    def __post_init__(self):
        object.__setattr__(self, "order", tuple((int(i), int(k)) for i, k in self.order))

    def labels(self) -> list[str]:
        return [f"{i}{k}" if i < 10 and k < 10 else f"{i}.{k}" for i, k in self.order]


@dataclass(frozen=True)
class StepRecord:
    """One decode step.

    For the Gaussian channel ``tolerance`` and ``actual`` are
    interference-plus-noise powers. For the DMC ``tolerance`` is the mutual
    information available to the virtual user and ``actual`` its rate.
    """

    owner: int
    index: int
    tolerance: float
    actual: float
    slack: float


@dataclass(frozen=True)
class VerificationReport:
    schedule: DecodingSchedule
    steps: tuple[StepRecord, ...]

    @property
    def min_slack(self) -> float:
        return min(s.slack for s in self.steps)

    @property
    def ok(self) -> bool:
        return all(s.slack >= -SLACK_TOL for s in self.steps)

    @property
    def first_failure(self) -> StepRecord | None:
        return next((s for s in self.steps if s.slack < -SLACK_TOL), None)

    def to_dict(self) -> dict:
        return {
            "order": [list(v) for v in self.schedule.order],
            "parallel": self.schedule.parallel,
            "steps": [asdict(s) for s in self.steps],
            "ok": self.ok,
            "min_slack": self.min_slack,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        sched = DecodingSchedule(tuple(tuple(v) for v in d["order"]), d["parallel"])
        return cls(sched, tuple(StepRecord(**s) for s in d["steps"]))


def check_counts(counts: Sequence[int]) -> tuple[int, ...]:
    counts = tuple(int(c) for c in counts)
    if not counts:
        raise ValueError("need at least one user")
    if any(c < 1 for c in counts):
        raise ValueError("counts must be ≥ 1")
    return counts


def greedy_order(counts: Sequence[int], start: Sequence, step: Callable[[int, int], object]) -> DecodingSchedule:
    """Min-first decoding order common to both protocols.

    All first virtual users go in one parallel stage (ascending owner). Then
    the owner with the smallest progress key decodes its next virtual user;
    ``step(owner, index)`` is the key increment for decoding ``(owner, index)``.
    Ties go to the lowest owner id; finished owners leave the heap.
    """
    counts = check_counts(counts)
    order = [(i, 1) for i in range(1, len(counts) + 1)]
    heap = [(start[i - 1], i) for i in range(1, len(counts) + 1) if counts[i - 1] > 1]
    heapq.heapify(heap)
    decoded = [1] * len(counts)
    while heap:
        key, i = heapq.heappop(heap)
        k = decoded[i - 1] + 1
        order.append((i, k))
        decoded[i - 1] = k
        if k < counts[i - 1]:
            heapq.heappush(heap, (key + step(i, k), i))
    return DecodingSchedule(tuple(order), parallel=len(counts))


def check_covers(schedule: DecodingSchedule, counts: Sequence[int]) -> None:
    expected = {(i, k) for i, L in enumerate(counts, start=1) for k in range(1, L + 1)}
    if len(schedule.order) != len(expected) or set(schedule.order) != expected:
        raise ValueError("schedule must cover every virtual user exactly once")
    if not 0 <= schedule.parallel <= len(schedule.order):
        raise ValueError("parallel stage larger than the schedule")
