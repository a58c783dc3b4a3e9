"""Random-switch rate splitting over the discrete memoryless MAC.

Mutual information is computed by exact summation over the joint law of
``(X_1, ..., X_M, Y)`` with independent inputs. Users are 1-based in the
public API; subsets are sets of user ids.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .gaussian_core import base_scale

SCHEMA = "drs-dmc-1"
_PROB_TOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True, eq=False)
class DmcChannel:
    """Channel law ``W(y | x_1..x_M)`` plus a fixed product input distribution.

    ``W`` has one row per input tuple in row-major order (user 1 slowest).
    """

    alphabet_sizes: tuple[int, ...]
    output_size: int
    W: np.ndarray
    inputs: tuple[np.ndarray, ...]
    log_base: str = "nat"

    def __post_init__(self):
        sizes = tuple(int(a) for a in self.alphabet_sizes)
        object.__setattr__(self, "alphabet_sizes", sizes)
        W = np.asarray(self.W, dtype=float)
        inputs = tuple(np.asarray(p, dtype=float) for p in self.inputs)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "inputs", inputs)
        base_scale(self.log_base)
        if not sizes or any(a < 1 for a in sizes):
            raise ValueError("alphabet sizes must be >= 1")
        if W.shape != (math.prod(sizes), self.output_size):
            raise ValueError(f"W must have shape {(math.prod(sizes), self.output_size)}, got {W.shape}")
        if len(inputs) != len(sizes):
            raise ValueError("need one input distribution per user")
        for a, p in zip(sizes, inputs):
            if p.shape != (a,):
                raise ValueError("input distribution length must match its alphabet")
        for name, arr, rows in (("W", W, W), *((f"input {i + 1}", p, p[None, :]) for i, p in enumerate(inputs))):
            if np.any(arr < 0) or np.any(arr > 1):
                raise ValueError(f"{name} has entries outside [0, 1]")
            if np.any(np.abs(rows.sum(axis=1) - 1) > _PROB_TOL):
                raise ValueError(f"{name} rows must sum to 1")

    @property
    def num_users(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def scale(self) -> float:
        return base_scale(self.log_base)

    @cached_property
    def joint(self) -> np.ndarray:
        """``P(x_1, ..., x_M, y)`` as an (M+1)-dimensional array."""
        px = self.inputs[0]
        for p in self.inputs[1:]:
            px = np.multiply.outer(px, p)
        W = self.W.reshape(self.alphabet_sizes + (self.output_size,))
        j = px[..., None] * W
        j[j < _TINY] = 0.0
        return j

    def with_base(self, log_base: str) -> "DmcChannel":
        return DmcChannel(self.alphabet_sizes, self.output_size, self.W, self.inputs, log_base)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "alphabets": list(self.alphabet_sizes),
            "output": self.output_size,
            "W": self.W.tolist(),
            "inputs": [p.tolist() for p in self.inputs],
        }

    @classmethod
    def from_dict(cls, d: dict, log_base: str = "nat") -> "DmcChannel":
        schema = d.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ValueError(f"unsupported channel schema {schema!r}")
        missing = {"alphabets", "output", "W", "inputs"} - d.keys()
        if missing:
            raise ValueError(f"channel document lacks {sorted(missing)}")
        return cls(tuple(d["alphabets"]), int(d["output"]), np.array(d["W"], dtype=float),
                   tuple(np.array(p, dtype=float) for p in d["inputs"]), log_base)

    @classmethod
    def load(cls, path: str | Path, log_base: str = "nat") -> "DmcChannel":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), log_base)

    def dump(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)


def from_function(alphabet_sizes: Sequence[int], output_size: int, fn, inputs=None,
                  log_base: str = "nat") -> DmcChannel:
    """Deterministic channel ``y = fn(x_1, ..., x_M)``."""
    tuples = list(itertools.product(*(range(a) for a in alphabet_sizes)))
    W = np.zeros((len(tuples), output_size))
    for row, xs in enumerate(tuples):
        W[row, fn(*xs)] = 1.0
    if inputs is None:
        inputs = [np.full(a, 1.0 / a) for a in alphabet_sizes]
    return DmcChannel(tuple(alphabet_sizes), output_size, W, tuple(inputs), log_base)


def binary_adder(M: int = 2, log_base: str = "nat") -> DmcChannel:
    """``Y = X_1 + ... + X_M`` over binary inputs, uniform input law."""
    return from_function((2,) * M, M + 1, lambda *xs: sum(xs), log_base=log_base)


def binary_xor(M: int = 2, log_base: str = "nat") -> DmcChannel:
    return from_function((2,) * M, 2, lambda *xs: sum(xs) % 2, log_base=log_base)


# -- mutual information -------------------------------------------------------

def _marginal(joint: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    keep = set(keep)
    drop = tuple(a for a in range(joint.ndim) if a not in keep)
    return joint.sum(axis=drop, keepdims=True)


def _axes(users: Iterable[int]) -> list[int]:
    return [u - 1 for u in users]


def _validate(ch: DmcChannel, target: Iterable[int], given: Iterable[int]) -> tuple[frozenset, frozenset]:
    S, T = frozenset(target), frozenset(given)
    if S & T:
        raise ValueError("target and given subsets must be disjoint")
    bad = [u for u in S | T if not 1 <= u <= ch.num_users]
    if bad:
        raise ValueError(f"user ids out of range: {sorted(bad)}")
    return S, T


def mutual_information(ch: DmcChannel, target: Iterable[int], given: Iterable[int] = ()) -> float:
    """``I(X_S; Y, X_T)`` by direct summation of ``p log p/(p_S p_{T,Y})``.

    With independent inputs this equals ``I(X_S; Y | X_T)``.
    """
    S, T = _validate(ch, target, given)
    if not S:
        return 0.0
    y = ch.num_users
    j = _marginal(ch.joint, _axes(S | T) + [y])
    p_s = _marginal(j, _axes(S))
    p_ty = _marginal(j, _axes(T) + [y])
    mask = j > 0
    ratio = j[mask] / np.broadcast_to(p_s * p_ty, j.shape)[mask]
    return float(np.sum(j[mask] * np.log(ratio))) * ch.scale


def conditional_information(ch: DmcChannel, S: Iterable[int]) -> float:
    """``I(X_S; Y | X_{S^c})``."""
    S = frozenset(S)
    rest = frozenset(range(1, ch.num_users + 1)) - S
    return mutual_information(ch, S, rest)


def _subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


@dataclass
class MutualInfoTable:
    """Every ``I(X_i; Y, X_S)`` and ``I(X_S; Y | X_{S^c})`` of a channel."""

    num_users: int
    single: dict[tuple[int, frozenset], float]
    conditional: dict[frozenset, float]
    total: float = field(init=False)

    def __post_init__(self):
        self.total = self.conditional[frozenset(range(1, self.num_users + 1))]

    def others(self, i: int) -> list[int]:
        return [j for j in range(1, self.num_users + 1) if j != i]

    def levels(self, user: int = 1) -> list[float]:
        """``I_l = I(X_i; Y, X_{first l other users})`` for l = 0..M-1."""
        rest = self.others(user)
        return [self.single[(user, frozenset(rest[:l]))] for l in range(self.num_users)]


def mi_table(ch: DmcChannel) -> MutualInfoTable:
    users = list(range(1, ch.num_users + 1))
    single = {}
    for i in users:
        for S in _subsets([j for j in users if j != i]):
            single[(i, S)] = mutual_information(ch, {i}, S)
    conditional = {S: conditional_information(ch, S) for S in _subsets(users)}
    return MutualInfoTable(ch.num_users, single, conditional)


@dataclass(frozen=True)
class AssumptionReport:
    symmetric: bool
    strict_gain: bool
    worst_asymmetry: float
    worst_gain: float
    failing_pair: tuple[frozenset, frozenset] | None = None


def check_assumptions(ch: DmcChannel, tol: float = 1e-9) -> AssumptionReport:
    """Symmetry of ``I(X_S;Y|X_{S^c})`` across equal-size ``S`` and strict gain from conditioning."""
    users = list(range(1, ch.num_users + 1))
    cond = {S: conditional_information(ch, S) for S in _subsets(users)}
    spread = 0.0
    for r in range(1, len(users) + 1):
        vals = [v for S, v in cond.items() if len(S) == r]
        spread = max(spread, max(vals) - min(vals))

    worst, failing = math.inf, None
    for S in _subsets(users):
        if not S:
            continue
        plain = mutual_information(ch, S)
        for T in _subsets([u for u in users if u not in S]):
            if not T:
                continue
            gain = mutual_information(ch, S, T) - plain
            if gain < worst:
                worst, failing = gain, (S, T)
    if failing is None:  # single user: no disjoint nonempty pair
        worst = math.inf
    strict = worst > tol
    return AssumptionReport(spread <= tol, strict, spread, worst, None if strict else failing)


# -- switches -----------------------------------------------------------------

@dataclass(frozen=True)
class SwitchDistribution:
    """``P(S_i = k) = weights[k-1]``."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("switch needs at least one position")
        if any(x < 0 for x in w):
            raise ValueError("switch weights must be nonnegative")
        if abs(math.fsum(w) - 1) > _PROB_TOL:
            raise ValueError("switch weights must sum to 1")

    @classmethod
    def uniform(cls, L: int) -> "SwitchDistribution":
        return cls((1.0 / L,) * L)

    @classmethod
    def geometric_tail(cls, L: int, decay: float = 3.0) -> "SwitchDistribution":
        """``lambda_k`` proportional to ``exp(-decay k / L)``; max weight is O(1/L)."""
        w = np.exp(-decay * np.arange(1, L + 1) / L)
        w /= w.sum()
        return cls(tuple(w))

    def __len__(self):
        return len(self.weights)

    def before(self) -> np.ndarray:
        """``beta_{k-1}``: probability the switch sits below position k."""
        w = np.asarray(self.weights)
        b = np.concatenate([[0.0], np.cumsum(w)[:-1]])
        return np.clip(b, 0.0, 1.0)


def binomial_coefficients(M: int, beta: np.ndarray) -> np.ndarray:
    """``C(M-1, l) beta^l (1-beta)^(M-1-l)`` for l = 0..M-1, one row per beta."""
    beta = np.asarray(beta, dtype=float)[:, None]
    l = np.arange(M)[None, :]
    comb = np.array([math.comb(M - 1, x) for x in range(M)])[None, :]
    return comb * beta**l * (1 - beta) ** (M - 1 - l)


def binomial_rates(levels: Sequence[float], switch: SwitchDistribution) -> np.ndarray:
    """Symmetric-channel rates: ``lambda_k sum_l C(M-1,l) b^l (1-b)^(M-1-l) I_l``."""
    I = np.asarray(levels, dtype=float)
    coeffs = binomial_coefficients(len(I), switch.before())
    return np.asarray(switch.weights) * (coeffs @ I)


def subset_rates(table: MutualInfoTable, switch: SwitchDistribution, user: int) -> np.ndarray:
    """Rates of ``user``'s virtual users, averaging over which other users are already known.

    Each other user's signal is known with probability ``beta_{k-1}``
    independently, so subset ``S`` carries weight
    ``beta^|S| (1-beta)^(M-1-|S|)``.
    """
    beta = switch.before()
    rest = table.others(user)
    acc = np.zeros_like(beta)
    for S in _subsets(rest):
        acc += beta ** len(S) * (1 - beta) ** (len(rest) - len(S)) * table.single[(user, S)]
    return np.asarray(switch.weights) * acc


def switch_rates(ch: DmcChannel, switch: SwitchDistribution, user: int = 1,
                 table: MutualInfoTable | None = None, method: str = "auto") -> np.ndarray:
    """Rates ``r_{X_ik}`` for k = 1..L under switch ``switch``.

    ``method`` is ``"binomial"`` (symmetric channels), ``"subset"`` (any
    channel) or ``"auto"``, which picks binomial when the channel is symmetric.
    """
    if not 1 <= user <= ch.num_users:
        raise ValueError("user out of range")
    table = table or mi_table(ch)
    if method == "auto":
        method = "binomial" if check_assumptions(ch).symmetric else "subset"
    if method == "binomial":
        return binomial_rates(table.levels(user), switch)
    if method == "subset":
        return subset_rates(table, switch, user)
    raise ValueError(f"unknown method {method!r}")


def limit_rates(ch: DmcChannel, table: MutualInfoTable | None = None) -> tuple[float, ...]:
    """Per-user limits as the largest switch weight goes to zero.

    ``(1/M) sum_j avg_{|S|=j, S in -i} I(X_i; Y, X_S)``. On a symmetric
    channel this is ``I(X_1..X_M; Y)/M`` for every user.
    """
    table = table or mi_table(ch)
    M = ch.num_users
    out = []
    for i in range(1, M + 1):
        rest = table.others(i)
        acc = 0.0
        for j in range(M):
            subsets = [frozenset(c) for c in itertools.combinations(rest, j)]
            acc += math.fsum(table.single[(i, S)] for S in subsets) / len(subsets)
        out.append(acc / M)
    return tuple(out)


def two_user_error_term(ch: DmcChannel, L: int, table: MutualInfoTable | None = None) -> float:
    """``(I(X_1;Y,X_2) - I(X_1;Y)) / (2L)``, the exact uniform-switch gap for two users."""
    if ch.num_users != 2:
        raise ValueError("the closed-form error term is for two users")
    if L < 1:
        raise ValueError("L must be >= 1")
    I0, I1 = (table or mi_table(ch)).levels(1)
    return (I1 - I0) / (2 * L)


def lattice_peak(M: int, i: int) -> float:
    """``C(M-1,i) x^i (1-x)^(M-1-i)`` at its maximiser ``x = i/(M-1)`` (``0^0 = 1``)."""
    if M == 1:
        return 1.0
    x = i / (M - 1)
    return math.comb(M - 1, i) * x**i * (1 - x) ** (M - 1 - i)


def uniform_bound(ch: DmcChannel, M: int, L: int, table: MutualInfoTable | None = None) -> float:
    """``M alpha / L`` bounding the uniform-switch error."""
    if M != ch.num_users:
        raise ValueError("M must equal the channel's number of users")
    levels = (table or mi_table(ch)).levels(1)
    alpha = max(lattice_peak(M, i) * I for i, I in enumerate(levels))
    return M * alpha / L


def mixture_coefficients(M: int, switch: SwitchDistribution) -> np.ndarray:
    """``c_l = sum_k lambda_k C(M-1,l) b^l (1-b)^(M-1-l)``; each tends to 1/M."""
    coeffs = binomial_coefficients(M, switch.before())
    return np.asarray(switch.weights) @ coeffs


def refinement_gain(table: MutualInfoTable, switch: SwitchDistribution, alpha: float) -> float:
    """Two-user gain from splitting the last switch position by ``alpha``."""
    I0, I1 = table.levels(1)
    lam = switch.weights[-1]
    return alpha * (1 - alpha) * lam**2 * (I1 - I0)


def refine_last(switch: SwitchDistribution, alpha: float) -> SwitchDistribution:
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    lam = switch.weights[-1]
    return SwitchDistribution(switch.weights[:-1] + (alpha * lam, (1 - alpha) * lam))
