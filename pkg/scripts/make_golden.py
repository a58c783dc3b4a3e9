"""Regenerate tests/golden/derived_values.csv from brute-force oracles.

None of the generators below calls the closed forms that the test suite
checks against these values: rates come from quadrature, scalar
optimisation, a symbolic limit, entropy arithmetic or exhaustive
enumeration of the switch-extended channel.

    python scripts/make_golden.py            # rewrite the golden file
    python scripts/make_golden.py --check    # compare without writing
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import sympy as sp
from scipy import integrate, optimize

from drs.dmc_core import SwitchDistribution, binary_adder, binary_xor
from drs.oracles import mi_entropy_oracle, virtual_user_information

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden" / "derived_values.csv"
COMMAND = "python scripts/make_golden.py"
FIELDS = ("case_id", "quantity", "value", "provenance_command")


def _level_rates(M, P, N, levels):
    out, decoded = [], 0.0
    for p in levels:
        out.append(0.5 * math.log(1 + p / (M * P - M * decoded - p + N)))
        decoded += p
    return out


def quad_equal_rate(M, P, N):
    val, _ = integrate.quad(lambda x: 1 / (M * P + N - M * x), 0, P, epsabs=1e-14, epsrel=1e-13)
    return 0.5 * val


def best_two_level(M, P, N):
    res = optimize.minimize_scalar(lambda p: -sum(_level_rates(M, P, N, (p, P - p))),
                                   bounds=(0, P), method="bounded", options={"xatol": 1e-13})
    return res.x


def sympy_limit_constant(M, P, N):
    L = sp.symbols("L", positive=True)
    A = sp.Integer(1) + sp.Rational(M) * sp.nsimplify(P) / sp.nsimplify(N)
    expr = L * (sp.log(A) / (2 * M) - L / 2 * sp.log(M / (M - 1 + A ** (-1 / L))))
    return float(sp.limit(expr, L, sp.oo))


def best_common_fraction(powers, N, user):
    S = sum(powers)

    def user_total(g1):
        gam = (g1, 1 - g1)
        decoded, tot = 0.0, 0.0
        for g in gam:
            own = g * powers[user]
            tot += 0.5 * math.log(1 + own / (S * (1 - decoded) - own + N))
            decoded += g
        return -tot

    return optimize.minimize_scalar(user_total, bounds=(0, 1), method="bounded", options={"xatol": 1e-13}).x


def quad_user_limit(powers, N, user):
    S = sum(powers)
    val, _ = integrate.quad(lambda x: powers[user] / (S * (1 - x) + N), 0, 1, epsabs=1e-14, epsrel=1e-13)
    return 0.5 * val


def generate() -> list[dict]:
    rows = []

    def add(case, quantity, value, oracle):
        rows.append({"case_id": case, "quantity": quantity, "value": f"{value:.15g}",
                     "provenance_command": f"{COMMAND}  # {oracle}"})

    # Gaussian, nats
    add("g_M2_P1_N1", "r_star", quad_equal_rate(2, 1.0, 1.0), "quad_equal_rate")
    add("g_M1_P1_N1", "r_star", quad_equal_rate(1, 1.0, 1.0), "quad_equal_rate")
    p1 = best_two_level(2, 1.0, 1.0)
    r = _level_rates(2, 1.0, 1.0, (p1, 1.0 - p1))
    add("g_M2_P1_N1_L2", "level_1", p1, "best_two_level")
    add("g_M2_P1_N1_L2", "level_2", 1.0 - p1, "best_two_level")
    add("g_M2_P1_N1_L2", "rate_each", r[0], "best_two_level")
    add("g_M2_P1_N1_L2", "sir_each", math.expm1(2 * r[0]), "best_two_level")
    add("g_M2_P1_N1_L2", "total", sum(r), "best_two_level")
    add("g_M2_P1_N1_L2", "error", quad_equal_rate(2, 1.0, 1.0) - sum(r), "quad_equal_rate - best_two_level")
    add("g_M2_P1_N1_L1", "rate", _level_rates(2, 1.0, 1.0, (1.0,))[0], "direct")
    add("g_M2_P1_N1", "limit_constant", sympy_limit_constant(2, 1, 1), "sympy_limit_constant")
    for M in (3, 5):
        add(f"g_M{M}_P1_N1", "limit_constant", sympy_limit_constant(M, 1, 1), "sympy_limit_constant")
    uni = _level_rates(2, 1.0, 1.0, (0.5, 0.5))
    add("g_M2_P1_N1_uniform2", "total", sum(uni), "direct")
    g1 = best_common_fraction((2.0, 1.0), 1.0, 0)
    add("g_P2,1_N1_L2", "gamma_1", g1, "best_common_fraction")
    add("g_P2,1_N1_L2", "gamma_2", 1 - g1, "best_common_fraction")
    add("g_P2,1_N1", "limit_user1", quad_user_limit((2.0, 1.0), 1.0, 0), "quad_user_limit")
    add("g_P2,1_N1", "limit_user2", quad_user_limit((2.0, 1.0), 1.0, 1), "quad_user_limit")

    # DMC, bits
    adder, adder3, xor2 = binary_adder(2, "bit"), binary_adder(3, "bit"), binary_xor(2, "bit")
    I0 = mi_entropy_oracle(adder, [1])
    I1 = mi_entropy_oracle(adder, [1], [2])
    add("adder2", "I(X1;Y)", I0, "mi_entropy_oracle")
    add("adder2", "I(X1;Y,X2)", I1, "mi_entropy_oracle")
    add("adder2", "I(X1,X2;Y)", mi_entropy_oracle(adder, [1, 2]), "mi_entropy_oracle")
    add("xor2", "I(X1;Y)", mi_entropy_oracle(xor2, [1]), "mi_entropy_oracle")
    add("xor2", "I(X1;Y,X2)", mi_entropy_oracle(xor2, [1], [2]), "mi_entropy_oracle")
    add("xor2", "I(X1,X2;Y)", mi_entropy_oracle(xor2, [1, 2]), "mi_entropy_oracle")
    for l, (S, T) in enumerate((([1], []), ([1], [2]), ([1], [2, 3]))):
        add("adder3", f"I_{l}", mi_entropy_oracle(adder3, S, T), "mi_entropy_oracle")

    U = SwitchDistribution.uniform
    r11 = virtual_user_information(adder, [U(2), U(2)], (1, 1))
    r12 = virtual_user_information(adder, [U(2), U(2)], (1, 2), [(1, 1), (2, 1)])
    add("adder2_uniform2", "rate_1", r11, "virtual_user_information")
    add("adder2_uniform2", "rate_2", r12, "virtual_user_information")
    add("adder2_uniform2", "total", r11 + r12, "virtual_user_information")
    add("adder2_uniform2", "error", (I0 + I1) / 2 - (r11 + r12), "mi_entropy_oracle - virtual_user_information")

    # (2,3) walkthrough: MI available at step 22 and its slack against the rule's rate
    mi22 = virtual_user_information(adder, [U(2), U(3)], (2, 2), [(1, 1), (2, 1)])
    rule22 = (2 * I0 + I1) / 9
    add("adder2_counts2,3", "mi_step22", mi22, "virtual_user_information")
    add("adder2_counts2,3", "slack_step22", mi22 - rule22, "virtual_user_information - rule")
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    rows = generate()
    if args.check:
        with open(GOLDEN) as fh:
            old = {(r["case_id"], r["quantity"]): float(r["value"]) for r in csv.DictReader(fh)}
        bad = [r for r in rows if abs(old[(r["case_id"], r["quantity"])] - float(r["value"])) > 1e-12]
        for r in bad:
            print("mismatch", r["case_id"], r["quantity"], file=sys.stderr)
        return 1 if bad else 0
    GOLDEN.parent.mkdir(parents=True, exist_ok=True)
    with open(GOLDEN, "w", newline="") as fh:
        w = csv.DictWriter(fh, FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
