"""Distributed rate splitting over the Gaussian multiple-access channel.

Every real user splits its power over ``L`` virtual users; the receiver
decodes virtual users class by class, treating undecoded signals as noise.
All rate arithmetic is done in nats and converted to the channel's
``log_base`` on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

LN2 = math.log(2.0)
_REL_SUM_TOL = 1e-9


def base_scale(log_base: str) -> float:
    """Multiplier turning nats into ``log_base`` units."""
    if log_base == "nat":
        return 1.0
    if log_base == "bit":
        return 1.0 / LN2
    raise ValueError(f"unknown log base {log_base!r} (expected 'nat' or 'bit')")


@dataclass(frozen=True)
class GaussianChannel:
    num_users: int
    powers: tuple[float, ...]
    noise: float
    log_base: str = "nat"

    def __post_init__(self):
        powers = tuple(float(p) for p in self.powers)
        object.__setattr__(self, "powers", powers)
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")
        if len(powers) != self.num_users:
            raise ValueError(f"expected {self.num_users} powers, got {len(powers)}")
        if not self.noise > 0:
            raise ValueError("noise must be > 0")
        if any(p < 0 or not math.isfinite(p) for p in powers):
            raise ValueError("powers must be finite and nonnegative")
        base_scale(self.log_base)

    @classmethod
    def symmetric(cls, num_users: int, power: float, noise: float, log_base: str = "nat"):
        return cls(num_users, (power,) * num_users, noise, log_base)

    @property
    def is_symmetric(self) -> bool:
        return all(p == self.powers[0] for p in self.powers)

    @property
    def power(self) -> float:
        """Common per-user power; only defined for symmetric channels."""
        if not self.is_symmetric:
            raise ValueError("channel has unequal powers; use the asymmetric operations")
        return self.powers[0]

    @property
    def total_power(self) -> float:
        return float(sum(self.powers))

    @property
    def snr_factor(self) -> float:
        """``A = 1 + (sum of powers) / N``."""
        return 1.0 + self.total_power / self.noise

    @property
    def scale(self) -> float:
        return base_scale(self.log_base)


@dataclass(frozen=True)
class PowerSplit:
    """Per-virtual-user power levels of one real user, in decoding order."""

    levels: tuple[float, ...]
    owner: int = 1

    def __post_init__(self):
        levels = tuple(float(p) for p in self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise ValueError("a split needs at least one level")
        if any(not (p > 0) or not math.isfinite(p) for p in levels):
            raise ValueError("all split levels must be positive and finite")

    def __len__(self):
        return len(self.levels)

    @property
    def total(self) -> float:
        return math.fsum(self.levels)

    def fractions(self) -> tuple[float, ...]:
        t = self.total
        return tuple(p / t for p in self.levels)

    def cumulative(self) -> np.ndarray:
        """``beta_k``: power of levels 1..k."""
        return np.cumsum(self.levels)


@dataclass(frozen=True)
class RateAllocation:
    rates: tuple[float, ...]
    sirs: tuple[float, ...]
    log_base: str = "nat"
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", math.fsum(self.rates))


@dataclass(frozen=True)
class ConvergenceRecord:
    L: int
    achieved: float
    target: float
    error: float
    scaled_error: float


def _check_split(ch: GaussianChannel, split: PowerSplit, power: float) -> None:
    if abs(split.total - power) > _REL_SUM_TOL * max(power, ch.noise):
        raise ValueError(f"split levels sum to {split.total!r}, expected {power!r}")


def _tail_sums(levels: np.ndarray) -> np.ndarray:
    """``sum_{j>k} p_j`` for each k, accumulated from the small end."""
    tails = np.zeros_like(levels)
    tails[:-1] = np.cumsum(levels[::-1])[::-1][1:]
    return tails


def split_sirs(ch: GaussianChannel, levels: Sequence[float]) -> np.ndarray:
    """SIR of each level when every user applies the same split.

    The interference at level k is ``M*P - M*sum_{j<k} p_j - p_k + N``,
    evaluated as ``(M-1) p_k + M sum_{j>k} p_j + N`` to avoid cancellation.
    """
    p = np.asarray(levels, dtype=float)
    M = ch.num_users
    denom = (M - 1) * p + M * _tail_sums(p) + ch.noise
    assert np.all(denom > 0), "interference plus noise must be positive"
    return p / denom


def max_equal_rate(ch: GaussianChannel) -> float:
    """Largest rate every user can get simultaneously, ``log(1+MP/N)/(2M)``."""
    if not ch.is_symmetric:
        raise ValueError("max_equal_rate needs equal powers; use asymmetric_limit_rates")
    M = ch.num_users
    return math.log1p(M * ch.power / ch.noise) / (2 * M) * ch.scale


def optimal_split(ch: GaussianChannel, L: int) -> PowerSplit:
    """Closed-form equal-SIR split, the unique throughput maximiser for ``L`` levels."""
    if L < 1:
        raise ValueError("L must be >= 1")
    P, N, M = ch.power, ch.noise, ch.num_users
    if P <= 0:
        raise ValueError("optimal_split needs positive power")
    fractions = _optimal_fractions(M * P / N, L)
    return PowerSplit(tuple(P * fractions))


def _optimal_fractions(snr: float, L: int) -> np.ndarray:
    """Fractions ``gamma_k`` of the total power for aggregate SNR ``snr``.

    gamma_k = A^{(L-k)/L} (A^{1/L} - 1) / (A - 1), with ``A = 1 + snr``; the
    last factor is rewritten with expm1 so small SNR stays accurate.
    """
    log_a = math.log1p(snr)
    k = np.arange(1, L + 1)
    gam = np.exp((L - k) / L * log_a) * math.expm1(log_a / L) / snr
    # absorb rounding so the fractions sum to one
    gam[0] = 1.0 - math.fsum(gam[1:])
    return gam


def common_sir(ch: GaussianChannel, L: int) -> float:
    """``(A^{1/L}-1)/((M-1)A^{1/L}+1)``, the SIR shared by every optimal level."""
    M = ch.num_users
    a = ch.snr_factor ** (1.0 / L)
    return (a - 1) / ((M - 1) * a + 1)


def recursive_split(ch: GaussianChannel, L: int, tol: float = 1e-13) -> PowerSplit:
    """Equal-SIR split built by bisecting on the last level's power.

    For a trial ``p_L`` the levels below it are the unique equal-SIR split
    of the remaining power. Their common SIR decreases in ``p_L`` while
    ``SIR_L`` increases, so the crossing is bracketed by ``[0, P]``. The lower
    system is not re-solved at every trial: it has SIR at least ``SIR_L(p_L)``
    exactly when the power needed to reach that SIR (by back-substitution
    from level L-1 down) fits in ``P - p_L``.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    P, N, M = ch.power, ch.noise, ch.num_users
    if L == 1:
        return PowerSplit((P,))

    def levels_for(p_last: float) -> list[float]:
        s = p_last / ((M - 1) * p_last + N)
        levels = [p_last]
        tail = p_last
        for _ in range(L - 1):
            p = s * (M * tail + N) / (1 - (M - 1) * s)
            levels.append(p)
            tail += p
        return levels[::-1]

    guard = 1e-15 * P
    lo, hi = 0.0, P - (L - 1) * guard
    # sign convention: positive means the lower levels have power to spare,
    # i.e. s*(p_L) > SIR_L(p_L)
    if not (math.fsum(levels_for(lo)) - P < 0 < math.fsum(levels_for(hi)) - P):
        raise AssertionError("bisection is not bracketed")
    while hi - lo > tol * P:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if math.fsum(levels_for(mid)) < P:
            lo = mid
        else:
            hi = mid
    levels = levels_for(0.5 * (lo + hi))
    levels[0] = P - math.fsum(levels[1:])
    return PowerSplit(tuple(levels))


def _induction_split(M: int, power: float, noise: float, L: int, tol: float = 1e-12) -> list[float]:
    """Literal nested-bisection form of the uniqueness induction.

    Fixing ``p_L``, the first L-1 levels form an (L-1)-level system with
    power ``P - p_L`` whose noise floor is raised by ``M p_L``. Cost grows
    like ``(log 1/tol)^(L-1)``; meant as a cross-check for small L.
    """
    if L == 1:
        return [power]

    def gap(p_last):
        inner = _induction_split(M, power - p_last, noise + M * p_last, L - 1, tol)
        last_inner = inner[-1]
        s_inner = last_inner / ((M - 1) * last_inner + noise + M * p_last)
        return s_inner - p_last / ((M - 1) * p_last + noise)

    lo, hi = 1e-15 * power, power * (1 - 1e-15)
    while hi - lo > tol * power:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    p_last = 0.5 * (lo + hi)
    return _induction_split(M, power - p_last, noise + M * p_last, L - 1, tol) + [p_last]


def rate_allocation(ch: GaussianChannel, split: PowerSplit) -> RateAllocation:
    """Rates and SIRs of an arbitrary split used by every user."""
    _check_split(ch, split, ch.power)
    sirs = split_sirs(ch, split.levels)
    rates = 0.5 * np.log1p(sirs) * ch.scale
    return RateAllocation(tuple(rates.tolist()), tuple(sirs.tolist()), ch.log_base)


def split_last(ch: GaussianChannel, split: PowerSplit) -> PowerSplit:
    """Divide the last level into two equal-SIR halves, keeping the rest."""
    _check_split(ch, split, ch.power)
    M, N = ch.num_users, ch.noise
    c = split.levels[-1]
    A = M * c + N
    # p* = (A - sqrt(A (A - M c))) / M, rewritten to avoid cancellation
    first = c * A / (A + math.sqrt(A * N))
    second = c - first
    return PowerSplit(split.levels[:-1] + (first, second), split.owner)


def _total_optimal_nats(M: int, log_a: float, L: int) -> float:
    """``(L/2) log(M/(M-1+A^{-1/L}))`` computed without cancellation."""
    return -0.5 * L * math.log1p(math.expm1(-log_a / L) / M)


def limit_constant(ch: GaussianChannel) -> float:
    """``lim L e[L] = (M-1)(log A)^2/(4 M^2)`` in the channel's base."""
    M = ch.num_users
    log_a = math.log1p(M * ch.power / ch.noise)
    return (M - 1) * log_a**2 / (4 * M**2) * ch.scale


def error_curve(ch: GaussianChannel, L_max: int) -> list[ConvergenceRecord]:
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    M = ch.num_users
    log_a = math.log1p(M * ch.power / ch.noise)
    target_nats = log_a / (2 * M)
    out = []
    for L in range(1, L_max + 1):
        achieved = _total_optimal_nats(M, log_a, L)
        err = target_nats - achieved
        out.append(ConvergenceRecord(
            L, achieved * ch.scale, target_nats * ch.scale, err * ch.scale, L * err * ch.scale,
        ))
    return out


# -- split families ---------------------------------------------------------

SplitFamily = Callable[[GaussianChannel, int], Sequence[float]]


def optimal_family(ch: GaussianChannel, L: int) -> np.ndarray:
    return np.asarray(optimal_split(ch, L).levels)


def uniform_family(ch: GaussianChannel, L: int) -> np.ndarray:
    return np.full(L, ch.power / L)


def heavy_head_family(head_share: float) -> SplitFamily:
    """First level keeps ``head_share`` of the power whatever L is."""
    if not 0 < head_share < 1:
        raise ValueError("head_share must lie in (0, 1)")

    def family(ch: GaussianChannel, L: int) -> np.ndarray:
        P = ch.power
        if L == 1:
            return np.array([P])
        return np.concatenate([[head_share * P], np.full(L - 1, (1 - head_share) * P / (L - 1))])

    return family


def heavy_head_limit(ch: GaussianChannel, head_share: float) -> float:
    """Limit total of :func:`heavy_head_family`: one fixed level plus a vanishing tail."""
    M, P, N = ch.num_users, ch.power, ch.noise
    head = head_share * P
    first = 0.5 * math.log1p(head / (M * P - head + N))
    tail = math.log1p(M * (1 - head_share) * P / N) / (2 * M)
    return (first + tail) * ch.scale


FAMILIES: dict[str, SplitFamily] = {"optimal": optimal_family, "uniform": uniform_family}


def split_total(ch: GaussianChannel, levels: Sequence[float]) -> float:
    """Per-user throughput of a split, skipping the dataclass round-trip."""
    sirs = split_sirs(ch, levels)
    return float(0.5 * math.fsum(np.log1p(sirs)) * ch.scale)


def general_split_limit_check(
    ch: GaussianChannel, split_family: SplitFamily, L_max: int, Ls: Sequence[int] | None = None
) -> list[float]:
    """Per-user totals of ``split_family`` for L = 1..L_max (or the given ``Ls``)."""
    P = ch.power
    totals = []
    for L in Ls if Ls is not None else range(1, L_max + 1):
        levels = np.asarray(split_family(ch, L), dtype=float)
        if len(levels) != L or np.any(levels <= 0):
            raise ValueError(f"family produced an invalid split at L={L}")
        if abs(math.fsum(levels) - P) > _REL_SUM_TOL * P:
            raise ValueError(f"family violates power conservation at L={L}")
        totals.append(split_total(ch, levels))
    return totals


# -- asymmetric powers --------------------------------------------------------

def asymmetric_fractions(ch: GaussianChannel, L: int) -> tuple[float, ...]:
    """Common fractions ``gamma_k`` with the total power in place of ``M P``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return tuple(_optimal_fractions(ch.total_power / ch.noise, L).tolist())


def asymmetric_split(ch: GaussianChannel, L: int) -> list[PowerSplit]:
    if any(P_i <= 0 for P_i in ch.powers):
        raise ValueError("every user needs positive power to split it")
    gam = asymmetric_fractions(ch, L)
    return [PowerSplit(tuple(g * P_i for g in gam), owner=i) for i, P_i in enumerate(ch.powers, start=1)]


def asymmetric_rates(ch: GaussianChannel, fractions: Sequence[float]) -> list[RateAllocation]:
    """Rates of every user when all apply the same fractions to their own power."""
    gam = np.asarray(fractions, dtype=float)
    if abs(math.fsum(gam) - 1) > _REL_SUM_TOL or np.any(gam <= 0):
        raise ValueError("fractions must be positive and sum to 1")
    S, N = ch.total_power, ch.noise
    tail = _tail_sums(gam)
    out = []
    for P_i in ch.powers:
        own = gam * P_i
        # everyone's undecoded power from level k on, minus own level k
        denom = S * (gam + tail) - own + N
        sirs = own / denom
        rates = 0.5 * np.log1p(sirs) * ch.scale
        out.append(RateAllocation(tuple(rates.tolist()), tuple(sirs.tolist()), ch.log_base))
    return out


def asymmetric_limit_rates(ch: GaussianChannel) -> tuple[float, ...]:
    """Dominant-face point ``P_i/(2 sum P) log(1 + sum P / N)``."""
    S = ch.total_power
    if S <= 0:
        raise ValueError("at least one user needs positive power")
    half_log = 0.5 * math.log1p(S / ch.noise) * ch.scale
    return tuple(P_i / S * half_log for P_i in ch.powers)
