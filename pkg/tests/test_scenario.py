import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewlgames.scenario import (
    ConstraintError,
    PayoffTable2x2,
    battle_sexes_scenario,
    constant_scenario,
    minority_scenario,
    modulo4_scenario,
    prisoners_dilemma_scenario,
)


def minority_oracle(y):
    n = len(y)
    return tuple(1 if len([b for b in y if b == yi]) < n / 2 else 0 for yi in y)


@pytest.mark.parametrize(
    "y, expected",
    [((0, 0, 0, 1), (0, 0, 0, 1)), ((1, 1, 0, 0), (0, 0, 0, 0)), ((1, 0, 1, 1), (0, 1, 0, 0))],
)
def test_minority_examples(y, expected):
    assert tuple(minority_scenario(4).payoff(None, y)) == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_minority_matches_cardinality_rule(n):
    s = minority_scenario(n)
    assert not s.has_input
    for y in itertools.product((0, 1), repeat=n):
        assert tuple(s.payoff(None, y)) == minority_oracle(y)


def test_minority_odd_n_strict_rule():
    # n=5: a bit shared by 2 players is a minority (2 < 2.5)
    assert tuple(minority_scenario(5).payoff(None, (0, 0, 1, 1, 1))) == (1, 1, 0, 0, 0)


@pytest.mark.parametrize("n", [1, 6])
def test_minority_range(n):
    with pytest.raises(ValueError):
        minority_scenario(n)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 1), min_size=n, max_size=n), st.permutations(range(n)))))
def test_minority_permutation_equivariant(case):
    y, perm = case
    s = minority_scenario(len(y))
    pay = s.payoff(None, y)
    permuted = s.payoff(None, [y[i] for i in perm])
    assert np.array_equal(permuted, pay[list(perm)])


def test_prisoners_dilemma_default():
    s = prisoners_dilemma_scenario()
    assert tuple(s.payoff(None, (1, 1))) == (1, 1)
    assert tuple(s.payoff(None, (1, 0))) == (5, 0)


def test_prisoners_dilemma_rejects_averaging_violation():
    t = PayoffTable2x2.prisoners_dilemma(t=5, r=2, p=1, s=0)
    with pytest.raises(ConstraintError, match=r"\(\$1\(1,0\) \+ \$1\(0,1\)\) / 2"):
        prisoners_dilemma_scenario(t)


def test_battle_sexes_default_and_rejection():
    s = battle_sexes_scenario()
    assert tuple(s.payoff(None, (0, 0))) == (2, 1)
    with pytest.raises(ConstraintError):
        battle_sexes_scenario(PayoffTable2x2.battle_sexes(high=1, low=1))


def pd_oracle(t, r, p, s):
    return t > r > p > s and r >= (t + s) / 2


def bos_oracle(h, l, m):
    return h > l > m


values = st.integers(-3, 6)


@settings(max_examples=300, deadline=None)
@given(values, values, values, values)
def test_pd_validation_total(t, r, p, s):
    table = PayoffTable2x2.prisoners_dilemma(t, r, p, s)
    if pd_oracle(t, r, p, s):
        prisoners_dilemma_scenario(table)
    else:
        with pytest.raises(ConstraintError):
            prisoners_dilemma_scenario(table)


@settings(max_examples=200, deadline=None)
@given(values, values, values)
def test_bos_validation_total(h, l, m):
    table = PayoffTable2x2.battle_sexes(h, l, m)
    if bos_oracle(h, l, m):
        battle_sexes_scenario(table)
    else:
        with pytest.raises(ConstraintError):
            battle_sexes_scenario(table)


def test_asymmetric_tables_rejected_with_named_equality():
    vals = dict(PayoffTable2x2.prisoners_dilemma().values)
    vals[(1, 0)] = (5, 0.5)
    with pytest.raises(ConstraintError, match=r"\$1\(0,1\) = \$2\(1,0\)"):
        prisoners_dilemma_scenario(PayoffTable2x2(vals))


def test_table_dict_round_trip():
    t = PayoffTable2x2.battle_sexes()
    assert PayoffTable2x2.from_dict(t.to_dict()) == t


@pytest.mark.parametrize(
    "x, y, expected",
    [((0, 0, 0), (0, 0, 0), (1, 1, 1)), ((1, 1, 0), (1, 0, 0), (1, 1, 1)), ((1, 1, 0), (0, 0, 0), (0, 0, 0))],
)
def test_modulo4_examples(x, y, expected):
    assert tuple(modulo4_scenario().payoff(x, y)) == expected


def test_modulo4_structure():
    s = modulo4_scenario()
    assert s.n == 3 and s.has_input
    assert sorted(s.inputs) == [x for x in itertools.product((0, 1), repeat=3) if sum(x) % 2 == 0]
    for x in s.inputs:
        wins = [y for y in s.outputs if s.payoff(x, y)[0] == 1]
        assert len(wins) == 4
        assert len({sum(y) % 2 for y in wins}) == 1


def test_payoff_array_layout():
    arr = modulo4_scenario().payoff_array()
    assert arr.shape == (4, 8, 3)
    # input (0,1,1) wins on odd-sum outputs such as 001 (index 1)
    assert arr[1, 1, 0] == 1 and arr[1, 0, 0] == 0


def test_constant_scenario():
    s = constant_scenario(3, 1.0)
    assert s.payoff_range() == (1.0, 1.0)
