"""Brute-force references for the closed forms.

Nothing here calls the closed-form solvers it is meant to check: grid
searches score candidates with the plain rate formulas, and the mutual
information oracles work from joint entropies.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.stats import entropy

from .dmc_core import DmcChannel, SwitchDistribution, binomial_coefficients, mi_table
from .gaussian_core import GaussianChannel, PowerSplit, rate_allocation

_CHUNK = 2_000_000


def equal_rate_integral(ch: GaussianChannel) -> float:
    """``1/2 int_0^P dx / (M P + N - M x)`` by quadrature."""
    M, P, N = ch.num_users, ch.power, ch.noise
    val, _ = integrate.quad(lambda x: 1.0 / (M * P + N - M * x), 0.0, P, epsabs=1e-14, epsrel=1e-13)
    return 0.5 * val * ch.scale


def _sum_rate_log(M, P, N, columns):
    """Sum of ``log(1 + SIR_k)`` for candidate splits given level by level."""
    acc = np.ones_like(columns[0])
    decoded = np.zeros_like(columns[0])
    for p in columns:
        acc *= 1 + p / (M * P - M * decoded - p + N)
        decoded += p
    return np.log(acc)


def grid_optimal_split(ch: GaussianChannel, L: int, resolution: float = 1e-4) -> PowerSplit:
    """Exhaustive search over the interior simplex grid with step ``resolution * P``.

    Ties keep the lexicographically first grid point.
    """
    if L not in (2, 3):
        raise ValueError("grid search is limited to L in {2, 3}")
    if not 0 < resolution <= 1e-3:
        raise ValueError("resolution must be in (0, 1e-3] (fraction of P)")
    M, P, N = ch.num_users, ch.power, ch.noise
    K = int(round(1.0 / resolution))
    h = P / K
    if L == 2:
        n1 = np.arange(1, K)
        cols = [n1 * h, (K - n1) * h]
        best = int(np.argmax(_sum_rate_log(M, P, N, cols)))
        return PowerSplit(tuple(c[best] for c in cols))

    best_val, best_pt = -math.inf, None
    rows_per_chunk = max(1, _CHUNK // K)
    for start in range(1, K - 1, rows_per_chunk):
        n1 = np.arange(start, min(start + rows_per_chunk, K - 1))
        # all (n1, n2) with n2 >= 1 and n3 = K - n1 - n2 >= 1
        N1 = np.repeat(n1, K - 1 - n1)
        # n2 runs 1..K-1-n1 within each n1 block
        block_start = np.repeat(np.cumsum(K - 1 - n1) - (K - 1 - n1), K - 1 - n1)
        offsets = np.arange(len(N1)) - block_start + 1
        cols = [N1 * h, offsets * h, (K - N1 - offsets) * h]
        vals = _sum_rate_log(M, P, N, cols)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_pt = vals[i], tuple(c[i] for c in cols)
    return PowerSplit(best_pt)


def grid_rate(ch: GaussianChannel, split: PowerSplit) -> float:
    return rate_allocation(ch, split).total


@dataclass(frozen=True)
class SwitchSearch:
    best: SwitchDistribution
    best_total: float
    uniform_total: float

    @property
    def gain(self) -> float:
        return self.best_total - self.uniform_total


def _switch_totals(levels: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Total symmetric-channel rate for each row of switch weights."""
    M = len(levels)
    before = np.concatenate([np.zeros((weights.shape[0], 1)), np.cumsum(weights, axis=1)[:, :-1]], axis=1)
    before = np.clip(before, 0.0, 1.0)
    coeffs = binomial_coefficients(M, before.ravel()).reshape(before.shape + (M,))
    return np.sum(weights * (coeffs @ levels), axis=1)


def grid_optimal_switch(ch: DmcChannel, M: int, L: int, resolution: float = 1e-3) -> SwitchSearch:
    """Grid search over switch weights (simplex step ``resolution``, zeros allowed)."""
    if M != ch.num_users:
        raise ValueError("M must equal the channel's number of users")
    if L not in (1, 2, 3):
        raise ValueError("grid search is limited to L <= 3")
    if M > 3:
        raise ValueError("grid search is limited to M <= 3")
    levels = np.asarray(mi_table(ch).levels(1))
    uniform = float(_switch_totals(levels, np.full((1, L), 1.0 / L))[0])
    if L == 1:
        return SwitchSearch(SwitchDistribution((1.0,)), uniform, uniform)
    K = int(round(1.0 / resolution))
    if L == 2:
        n1 = np.arange(0, K + 1)
        weights = np.stack([n1, K - n1], axis=1) / K
    else:
        pts = [(a, b, K - a - b) for a in range(K + 1) for b in range(K + 1 - a)]
        weights = np.array(pts, dtype=float) / K
    totals = _switch_totals(levels, weights)
    i = int(np.argmax(totals))
    w = weights[i]
    return SwitchSearch(SwitchDistribution(tuple(w / w.sum())), float(totals[i]), uniform)


# -- mutual information from entropies ----------------------------------------

def _h(p: np.ndarray) -> float:
    p = p.ravel()
    return float(entropy(p[p > 0]))


def mi_entropy_oracle(ch: DmcChannel, target: Sequence[int], given: Sequence[int] = ()) -> float:
    """``H(Y, X_T) + H(X_S) - H(Y, X_T, X_S)`` from marginals of the joint law."""
    S, T = sorted(set(target)), sorted(set(given))
    if set(S) & set(T):
        raise ValueError("target and given subsets must be disjoint")
    if not S:
        return 0.0
    j = ch.joint
    y = ch.num_users

    def marg(axes):
        others = tuple(a for a in range(j.ndim) if a not in axes)
        return j.sum(axis=others)

    s_ax = [u - 1 for u in S]
    t_ax = [u - 1 for u in T]
    return (_h(marg(t_ax + [y])) + _h(marg(s_ax)) - _h(marg(s_ax + t_ax + [y]))) * ch.scale


# -- exact enumeration over the switch-extended channel -----------------------

def virtual_user_information(
    ch: DmcChannel,
    switches: Sequence[SwitchDistribution],
    target: tuple[int, int],
    decoded: Sequence[tuple[int, int]] = (),
) -> float:
    """``I(X_target; Y, S_1..S_M, X_decoded)`` by enumerating every switch and virtual input.

    The state space is ``prod_i L_i * |X_i|^{L_i} * |Y|``; keep it small.
    """
    M = ch.num_users
    counts = [len(s) for s in switches]
    virtual = [(i, k) for i in range(1, M + 1) for k in range(1, counts[i - 1] + 1)]
    pos = {v: n for n, v in enumerate(virtual)}
    alph = [ch.alphabet_sizes[i - 1] for i, _ in virtual]
    px = [ch.inputs[i - 1] for i, _ in virtual]
    W = ch.W.reshape(tuple(ch.alphabet_sizes) + (ch.output_size,))
    t = pos[target]
    d = [pos[v] for v in decoded]

    joint: dict[tuple, float] = defaultdict(float)
    for svec in itertools.product(*(range(L) for L in counts)):
        ps = math.prod(switches[i].weights[s] for i, s in enumerate(svec))
        if ps == 0:
            continue
        for xs in itertools.product(*(range(a) for a in alph)):
            pxv = ps * math.prod(px[n][x] for n, x in enumerate(xs))
            if pxv == 0:
                continue
            sent = tuple(xs[pos[(i + 1, s + 1)]] for i, s in enumerate(svec))
            obs = tuple(xs[n] for n in d)
            for y in range(ch.output_size):
                pr = pxv * W[sent + (y,)]
                if pr > 0:
                    joint[(xs[t], y, svec, obs)] += pr

    a_marg: dict = defaultdict(float)
    b_marg: dict = defaultdict(float)
    for (a, *b), pr in joint.items():
        a_marg[a] += pr
        b_marg[tuple(b)] += pr

    def H(dist):
        return -math.fsum(p * math.log(p) for p in dist.values() if p > 0)

    return (H(a_marg) + H(b_marg) - H(joint)) * ch.scale
