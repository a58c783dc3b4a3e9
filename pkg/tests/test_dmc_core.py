import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drs.dmc_core import (
    DmcChannel,
    SwitchDistribution,
    binary_adder,
    binary_xor,
    binomial_coefficients,
    check_assumptions,
    conditional_information,
    from_function,
    lattice_peak,
    limit_rates,
    mi_table,
    mixture_coefficients,
    mutual_information,
    refine_last,
    refinement_gain,
    subset_rates,
    switch_rates,
    two_user_error_term,
    uniform_bound,
)
from drs.oracles import mi_entropy_oracle, virtual_user_information

from conftest import CHANNELS

U = SwitchDistribution.uniform


def random_channel(rng, alphabets, out):
    W = rng.dirichlet(np.ones(out), size=int(np.prod(alphabets)))
    inputs = [rng.dirichlet(np.ones(a)) for a in alphabets]
    return DmcChannel(tuple(alphabets), out, W, inputs, log_base="bit")


def all_subset_pairs(M):
    users = range(1, M + 1)
    for r in range(M + 1):
        for S in itertools.combinations(users, r):
            rest = [u for u in users if u not in S]
            for q in range(len(rest) + 1):
                for T in itertools.combinations(rest, q):
                    yield S, T


# -- channel type ------------------------------------------------------------------

def test_rejects_bad_rows():
    with pytest.raises(ValueError):
        DmcChannel((2,), 2, [[0.5, 0.6], [1.0, 0.0]], [[0.5, 0.5]])


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        DmcChannel((2,), 2, [[1.0, 0.0], [0.0, 1.0]], [[0.5, 0.4]])


def test_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        DmcChannel((2, 2), 2, [[1.0, 0.0], [0.0, 1.0]], [[0.5, 0.5], [0.5, 0.5]])


def test_json_round_trip(tmp_path):
    ch = random_channel(np.random.default_rng(3), (2, 3), 3)
    path = tmp_path / "ch.json"
    ch.dump(path)
    doc = json.loads(path.read_text())
    assert doc["schema"] == "drs-dmc-1"
    assert set(doc) >= {"alphabets", "output", "W", "inputs"}
    again = DmcChannel.load(path, "bit")
    assert np.array_equal(again.W, ch.W)
    assert mutual_information(again, [1, 2]) == mutual_information(ch, [1, 2])


@pytest.mark.parametrize("name,M", [("binary_adder_2", 2), ("binary_adder_3", 3), ("binary_xor_2", 2)])
def test_shipped_channels(name, M):
    ch = DmcChannel.load(CHANNELS / f"{name}.json", "bit")
    ref = (binary_adder if "adder" in name else binary_xor)(M, "bit")
    assert np.allclose(ch.W, ref.W)
    assert mutual_information(ch, range(1, M + 1)) == pytest.approx(mutual_information(ref, range(1, M + 1)), abs=1e-15)


# -- mutual information --------------------------------------------------------------

def test_adder_values(adder2, golden):
    assert mutual_information(adder2, [1]) == pytest.approx(0.5, abs=1e-15)
    assert mutual_information(adder2, [1], [2]) == pytest.approx(1.0, abs=1e-15)
    assert mutual_information(adder2, [1, 2]) == pytest.approx(1.5, abs=1e-15)
    assert mutual_information(adder2, [1]) == pytest.approx(golden[("adder2", "I(X1;Y)")], abs=1e-14)
    assert mutual_information(adder2, [1, 2]) == pytest.approx(golden[("adder2", "I(X1,X2;Y)")], abs=1e-14)


def test_xor_values(xor2, golden):
    assert mutual_information(xor2, [1]) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(xor2, [1], [2]) == pytest.approx(golden[("xor2", "I(X1;Y,X2)")], abs=1e-14)
    assert mutual_information(xor2, [1, 2]) == pytest.approx(1.0, abs=1e-15)


def test_empty_target_is_zero(adder2):
    assert mutual_information(adder2, []) == 0.0


def test_overlap_rejected(adder2):
    with pytest.raises(ValueError):
        mutual_information(adder2, [1], [1])


def test_nats_and_bits(adder2):
    nat = adder2.with_base("nat")
    assert mutual_information(nat, [1, 2]) == pytest.approx(1.5 * math.log(2), abs=1e-15)


def test_conditional_form_equals_given_complement(adder3):
    for S in ([1], [1, 2], [1, 2, 3]):
        rest = [u for u in (1, 2, 3) if u not in S]
        assert conditional_information(adder3, S) == mutual_information(adder3, S, rest)


@pytest.mark.parametrize("seed", range(6))
def test_engine_agrees_with_entropy_oracle(seed):
    rng = np.random.default_rng(seed)
    M = 2 + seed % 2
    ch = random_channel(rng, tuple(rng.integers(2, 5, size=M)), int(rng.integers(2, 5)))
    for S, T in all_subset_pairs(M):
        assert abs(mutual_information(ch, S, T) - mi_entropy_oracle(ch, S, T)) < 1e-12


def test_single_is_monotone_in_conditioning(adder3):
    table = mi_table(adder3)
    for (i, S), v in table.single.items():
        for (j, T), w in table.single.items():
            if i == j and S <= T:
                assert v <= w + 1e-14
        assert v >= 0


def test_three_user_adder_levels(adder3, golden):
    levels = mi_table(adder3).levels(1)
    assert levels == pytest.approx([golden[("adder3", f"I_{l}")] for l in range(3)], abs=1e-14)
    assert levels[1:] == pytest.approx([0.5, 1.0], abs=1e-15)


# -- assumptions ------------------------------------------------------------------------

def test_adder_assumptions(adder2):
    rep = check_assumptions(adder2)
    assert rep.symmetric and rep.strict_gain


def test_copy_channel_has_no_gain(copy_first):
    rep = check_assumptions(copy_first)
    assert not rep.strict_gain
    assert rep.failing_pair == (frozenset({1}), frozenset({2}))


def test_xor_assumptions(xor2):
    rep = check_assumptions(xor2)
    assert rep.symmetric and rep.strict_gain


def test_asymmetric_random_channel_detected():
    assert not check_assumptions(random_channel(np.random.default_rng(1), (2, 3), 3)).symmetric


# -- switches ----------------------------------------------------------------------------------

def test_switch_validation():
    with pytest.raises(ValueError):
        SwitchDistribution((0.5, 0.4))
    with pytest.raises(ValueError):
        SwitchDistribution((1.2, -0.2))
    with pytest.raises(ValueError):
        SwitchDistribution(())


def test_uniform_two_positions(adder2):
    r = switch_rates(adder2, U(2))
    assert r == pytest.approx([0.25, 0.375], abs=1e-15)
    assert r.sum() == pytest.approx(0.625, abs=1e-15)


def test_single_position_is_plain_mi(adder2):
    assert switch_rates(adder2, SwitchDistribution((1.0,))) == pytest.approx([0.5], abs=1e-15)


@given(lam=st.floats(0.0, 1.0))
def test_two_position_general(lam):
    adder2 = binary_adder(2, "bit")
    r = switch_rates(adder2, SwitchDistribution((lam, 1 - lam)))
    assert r[0] == pytest.approx(lam * 0.5, abs=1e-15)
    assert r[1] == pytest.approx((1 - lam) * (lam * 1.0 + (1 - lam) * 0.5), abs=1e-15)


def test_rates_match_switch_extended_enumeration(adder2, golden):
    sw = [U(2), U(2)]
    r1 = virtual_user_information(adder2, sw, (1, 1))
    r2 = virtual_user_information(adder2, sw, (1, 2), [(1, 1), (2, 1)])
    assert switch_rates(adder2, U(2)) == pytest.approx([r1, r2], abs=1e-12)
    assert r1 + r2 == pytest.approx(golden[("adder2_uniform2", "total")], abs=1e-12)


@pytest.mark.parametrize("weights", [(0.3, 0.7), (0.2, 0.5, 0.3)])
def test_general_channel_rates_match_enumeration(weights):
    ch = random_channel(np.random.default_rng(7), (2, 2), 3)
    sw = SwitchDistribution(weights)
    L = len(weights)
    for k in range(1, L + 1):
        decoded = [(i, j) for j in range(1, k) for i in (1, 2)]
        exact = virtual_user_information(ch, [sw, sw], (1, k), decoded)
        assert switch_rates(ch, sw, method="subset")[k - 1] == pytest.approx(exact, abs=1e-12)


def test_binomial_and_subset_agree_on_symmetric(adder3):
    sw = SwitchDistribution.geometric_tail(25)
    assert np.allclose(switch_rates(adder3, sw, method="binomial"),
                       switch_rates(adder3, sw, method="subset"), atol=1e-14, rtol=0)


def test_switch_rates_rejects_bad_args(adder2):
    with pytest.raises(ValueError):
        switch_rates(adder2, U(2), user=3)
    with pytest.raises(ValueError):
        switch_rates(adder2, U(2), method="magic")


# -- limits ----------------------------------------------------------------------------------------

def test_adder_limits(adder2):
    assert limit_rates(adder2) == pytest.approx((0.75, 0.75), abs=1e-15)


def test_single_user_limit():
    ch = from_function((2,), 2, lambda a: a, inputs=[[0.3, 0.7]], log_base="bit")
    assert limit_rates(ch) == pytest.approx((mutual_information(ch, [1]),), abs=1e-15)


def test_asymmetric_limit_formula_and_convergence():
    ch = random_channel(np.random.default_rng(11), (2, 3), 3)
    table = mi_table(ch)
    lims = limit_rates(ch, table)
    for i, j in ((1, 2), (2, 1)):
        expected = 0.5 * table.single[(i, frozenset())] + 0.5 * table.single[(i, frozenset({j}))]
        assert lims[i - 1] == pytest.approx(expected, abs=1e-15)
        total = switch_rates(ch, U(10_000), user=i, table=table, method="subset").sum()
        assert abs(total - lims[i - 1]) < 1e-3


@pytest.mark.parametrize("fixture", ["adder2", "adder3", "xor2"])
def test_symmetric_limit_is_equal_share(fixture, request):
    ch = request.getfixturevalue(fixture)
    lims = limit_rates(ch)
    assert lims == pytest.approx((mutual_information(ch, range(1, ch.num_users + 1)) / ch.num_users,) * ch.num_users,
                                 abs=1e-14)


@pytest.mark.parametrize("family", [U, SwitchDistribution.geometric_tail])
@pytest.mark.parametrize("fixture", ["adder2", "adder3"])
def test_vanishing_switch_convergence(family, fixture, request):
    ch = request.getfixturevalue(fixture)
    total = switch_rates(ch, family(10_000)).sum()
    assert abs(total - limit_rates(ch)[0]) < 1e-3


def test_two_user_error_exact(adder2):
    table = mi_table(adder2)
    lim = limit_rates(adder2, table)[0]
    for L in list(range(1, 101)) + [500, 1000, 10_000]:
        achieved = switch_rates(adder2, U(L), table=table).sum()
        assert abs(two_user_error_term(adder2, L, table) - (lim - achieved)) < 1e-12
    assert two_user_error_term(adder2, 2) == 0.125
    assert two_user_error_term(adder2, 1) == 0.25


def test_two_user_error_rejects(adder3, adder2):
    with pytest.raises(ValueError):
        two_user_error_term(adder3, 2)
    with pytest.raises(ValueError):
        two_user_error_term(adder2, 0)


def test_uniform_bound(adder2, adder3):
    assert uniform_bound(adder2, 2, 2) == pytest.approx(1.0)
    for L in (2, 10, 100):
        for ch in (adder2, adder3):
            M = ch.num_users
            err = limit_rates(ch)[0] - switch_rates(ch, U(L)).sum()
            assert 0 <= err <= uniform_bound(ch, M, L)


def test_lattice_peak_endpoints():
    assert lattice_peak(3, 0) == 1.0 and lattice_peak(3, 2) == 1.0
    assert lattice_peak(3, 1) == pytest.approx(0.5)
    assert lattice_peak(1, 0) == 1.0


@pytest.mark.parametrize("M", [2, 3, 4])
@pytest.mark.parametrize("L", [10, 100, 1000])
def test_mixture_coefficients_tend_to_equal_share(M, L):
    c = mixture_coefficients(M, U(L))
    assert c.sum() == pytest.approx(1.0, abs=1e-12)
    for i in range(M):
        assert abs(c[i] - 1 / M) <= lattice_peak(M, i) / L


def test_binomial_coefficients_rows_sum_to_one():
    rows = binomial_coefficients(4, np.linspace(0, 1, 11))
    assert np.allclose(rows.sum(axis=1), 1.0)


@given(weights=st.lists(st.floats(0.01, 1.0), min_size=1, max_size=8), alpha=st.floats(0.01, 0.99))
def test_refinement_gain_matches_recomputation(weights, alpha):
    adder2 = binary_adder(2, "bit")
    table = mi_table(adder2)
    w = np.array(weights) / sum(weights)
    sw = SwitchDistribution(tuple(w))
    finer = refine_last(sw, alpha)
    gain = switch_rates(adder2, finer, table=table).sum() - switch_rates(adder2, sw, table=table).sum()
    assert gain == pytest.approx(refinement_gain(table, sw, alpha), abs=1e-12)
    assert gain > 0


def test_refine_last_rejects_alpha():
    with pytest.raises(ValueError):
        refine_last(U(2), 1.0)


def test_subset_rates_on_xor(xor2):
    # knowing the other input turns a useless observation into a full bit
    assert subset_rates(mi_table(xor2), U(2), 1) == pytest.approx([0.0, 0.25], abs=1e-15)
