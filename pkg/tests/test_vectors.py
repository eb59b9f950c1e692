from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from normset.core import FinVec, as_rat, combine, format_rat

rats = st.fractions(min_value=-4, max_value=4, max_denominator=6)
vecs = st.dictionaries(st.integers(1, 12), rats, max_size=6).map(FinVec)


def test_as_rat_accepts_exact_inputs():
    assert as_rat(3) == 3
    assert as_rat("3/4") == Fraction(3, 4)
    assert as_rat("-2") == -2
    assert as_rat(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, "abc", None])
def test_as_rat_rejects_inexact(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rat(bad)


def test_format_rat_is_p_over_q():
    assert format_rat(Fraction(3, 2)) == "3/2"
    assert format_rat(1) == "1/1"
    assert format_rat(Fraction(-1, 4)) == "-1/4"


def test_zeros_are_dropped_and_order_is_canonical():
    x = FinVec({5: 1, 2: 0, 3: Fraction(-1, 2)})
    assert x.entries == ((3, Fraction(-1, 2)), (5, Fraction(1)))
    assert x == FinVec({3: "-1/2", 5: 1})
    assert hash(x) == hash(FinVec({5: 1, 3: Fraction(-1, 2)}))


def test_support_bounds():
    x = FinVec.flat(range(4, 8))
    assert x.support == (4, 5, 6, 7)
    assert (x.min_supp, x.max_supp) == (4, 7)
    empty = FinVec()
    assert not empty
    assert empty.min_supp == float("inf") and empty.max_supp == 0


def test_block_order():
    assert FinVec.basis(1).precedes(FinVec.basis(2))
    assert not FinVec.flat([1, 3]).precedes(FinVec.basis(2))
    assert FinVec().precedes(FinVec.basis(1))


def test_restrict_and_flip():
    x = FinVec({1: 1, 2: 2, 3: 3})
    assert x.restrict([1, 3]) == FinVec({1: 1, 3: 3})
    assert x.flip([2]) == FinVec({1: 1, 2: -2, 3: 3})


def test_combine_length_mismatch():
    with pytest.raises(ValueError):
        combine([FinVec.basis(1)], [1, 2])


def test_nonpositive_index_rejected():
    with pytest.raises(ValueError):
        FinVec({0: 1})


@given(vecs, vecs, rats)
def test_linear_structure(x, y, c):
    assert (x + y) - y == x
    assert (x + y).scale(c) == x.scale(c) + y.scale(c)
    assert x.abs().sup_norm() == x.sup_norm()
    assert x.l1_norm() >= x.sup_norm()
