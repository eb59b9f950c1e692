import itertools
from fractions import Fraction

import pytest

from normset.core import FinVec, SchClass
from normset.seqlab.selection import (EARLY, EXHAUSTED, SelectionError, SeqArray, asymptotic_model_weights,
                                      default_coefficients, diagonal_value, sandwich_check, select_indices,
                                      symmetry_check)
from normset.seqlab.sequences import BASIS, FLAT_BLOCKS, SequenceError, interleaved_pair, make_seq, mix_seq

EPS = Fraction(1, 4)


def basis_tails(n, length=12):
    seq = make_seq(BASIS, length)
    return SeqArray(tuple(seq for _ in range(n)))


def test_single_row_early_takes_first_index_past_anchor(engine):
    arr = SeqArray((make_seq(BASIS, 12),), FinVec.flat([1, 2, 3]))
    sel = select_indices(arr, EPS, engine, order=EARLY)
    assert sel.indices == [4]
    assert sel.ok


def test_basis_tails_three_rows(engine):
    arr = basis_tails(3)
    sel = select_indices(arr, EPS, engine)
    i = sel.indices
    assert i[0] < i[1] < i[2]
    pts = sel.picked(arr)
    assert pts[0].precedes(pts[1]) and pts[1].precedes(pts[2])
    assert sel.ok and not any(sel.raised)
    assert all(a <= Fraction(1, 2 * x.min_supp) for a, x in zip(sel.surrogates, pts))


def test_checks_are_the_defining_inequalities(engine):
    arr = basis_tails(3)
    sel = select_indices(arr, EPS, engine)
    for ip, i, v, bound in sel.checks:
        assert v < bound
        assert bound == sel.surrogates[i - 1] + EPS / 6
    # the zero anchor imposes nothing; pick i' constrains every later pick
    assert [(ip, i) for ip, i, _, _ in sel.checks] == [(1, 2), (1, 3), (2, 3)]


def test_caps_too_small_exhausts(engine):
    flat = make_seq(FLAT_BLOCKS, 5)
    arr = SeqArray((flat, flat))
    with pytest.raises(SelectionError) as err:
        select_indices(arr, EPS, engine, caps=1, raise_surrogates=False)
    assert err.value.tag == EXHAUSTED


def test_rows_too_short_exhausts(engine):
    row = make_seq(BASIS, 2)
    with pytest.raises(SelectionError):
        select_indices(SeqArray((row, row, row)), EPS, engine)


def test_bad_arguments(engine):
    arr = basis_tails(2)
    for kw in ({"caps": [1]}, {"streak": 0}, {"order": "middle"}, {"caps": 0}):
        with pytest.raises(ValueError):
            select_indices(arr, EPS, engine, **kw)
    with pytest.raises(ValueError):
        select_indices(arr, 0, engine)
    with pytest.raises(SequenceError):
        SeqArray(())


def test_streak_window(engine):
    arr = basis_tails(2)
    sel = select_indices(arr, EPS, engine, streak=3)
    assert sel.ok


def test_sandwich_basis_tails(engine):
    rep = sandwich_check(basis_tails(2), EPS, engine)
    assert rep.ok
    assert rep.max_norm == 1
    assert rep.lower - EPS <= rep.value <= rep.upper + EPS
    d = rep.to_dict()
    assert d["ok"] is True and isinstance(d["value"], str)


def test_sandwich_flat_blocks_one_shot_rows(engine):
    flat = make_seq(FLAT_BLOCKS, 5)
    arr = SeqArray((flat.tail(3, 3), flat.tail(4, 4), flat.tail(5, 5)))
    rep = sandwich_check(arr, EPS, engine)
    assert rep.selection.indices == [3, 4, 5]
    assert rep.value >= Fraction(3, 2)
    assert rep.alpha_sum >= 3 * Fraction(1, 2) - EPS
    assert rep.ok


def test_sandwich_single_row(engine):
    row = make_seq(FLAT_BLOCKS, 4)
    rep = sandwich_check(SeqArray((row,)), EPS, engine)
    x = rep.selection.picked(SeqArray((row,)))[0]
    a = rep.selection.surrogates[0]
    nx = engine.norm(x)
    assert rep.value == nx
    assert max(nx, a) - EPS <= rep.value <= 2 * nx + 2 * a + EPS


def test_sandwich_with_anchor(engine):
    arr = SeqArray((make_seq(BASIS, 12), make_seq(FLAT_BLOCKS, 5)), FinVec.flat([1, 2]))
    rep = sandwich_check(arr, EPS, engine)
    assert rep.ok
    assert rep.selection.picked(arr)[0].min_supp > 2


def test_symmetry_identity_and_swap(engine):
    arr = SeqArray((make_seq(BASIS, 12), make_seq(FLAT_BLOCKS, 5)))
    same = symmetry_check(arr, (0, 1), EPS, engine)
    assert same.ratio == 1 and same.ok
    swap = symmetry_check(arr, (1, 0), EPS, engine)
    assert swap.ok and Fraction(1, 4) <= swap.ratio <= 4


def test_symmetry_all_permutations_of_three_rows(engine):
    xs, ys = interleaved_pair(5)
    arr = SeqArray((make_seq(BASIS, 12), make_seq(FLAT_BLOCKS, 5), mix_seq(xs, ys, Fraction(1, 2), engine)))
    for perm in itertools.permutations(range(3)):
        assert symmetry_check(arr, perm, EPS, engine).ok
    with pytest.raises(ValueError):
        arr.permuted((0, 0, 1))


def test_asmodel_basis(engine):
    rep = asymptotic_model_weights(basis_tails(2), EPS, engine=engine)
    assert rep.ok
    assert all(w <= Fraction(1, 4) for w in rep.weights)
    assert len(rep.rows) == 24
    for lam, v, lo, hi, ok in rep.rows:
        m = max(abs(l) for l in lam)
        assert v <= 2 * m + 2 * sum(rep.weights) * m + EPS


def test_asmodel_mix_weights_ordered(engine):
    xs, ys = interleaved_pair(5)
    rows = tuple(mix_seq(xs, ys, w, engine) for w in (0, Fraction(1, 2), 1))
    rep = asymptotic_model_weights(SeqArray(rows), EPS, engine=engine)
    assert rep.ok
    assert rep.weights == sorted(rep.weights)


def test_asmodel_one_nonzero(engine):
    arr = basis_tails(2)
    rep = asymptotic_model_weights(arr, EPS, coefficients=[(1, 0), (0, Fraction(-1, 2))], engine=engine)
    pts = rep.selection.picked(arr)
    (l1, v1, lo1, hi1, _), (l2, v2, lo2, hi2, _) = rep.rows
    assert v1 == engine.norm(pts[0]) and lo1 == max(1, rep.weights[0])
    assert hi2 == 1 + rep.weights[1]
    with pytest.raises(ValueError):
        asymptotic_model_weights(arr, EPS, coefficients=[(2, 0)], engine=engine)


def test_default_coefficients():
    cs = default_coefficients(2)
    assert len(cs) == 24 and (0, 0) not in cs


def test_diagonal_value_basis(engine):
    for j in (3, 7, 20):
        assert diagonal_value(FinVec.basis(j), 3, engine) == Fraction(1, 2 * j)
        assert engine.value(FinVec.basis(j), SchClass(j, 3)) == Fraction(1, 2 * j)
