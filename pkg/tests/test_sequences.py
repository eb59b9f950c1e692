from fractions import Fraction

import pytest

from normset.core import FinVec
from normset.seqlab.sequences import (AVERAGE, BASIS, CUSTOM, FLAT_BLOCKS, SUM, BlockSeq, SequenceError,
                                      block_seq, check_family, dyadic_family, interleaved_pair, make_seq,
                                      mix_seq, named_row, normalize_seq)


def test_basis():
    seq = make_seq(BASIS, 5)
    assert list(seq) == [FinVec.basis(i) for i in range(1, 6)]
    assert seq.normalized


def test_flat_blocks_dyadic():
    seq = make_seq(FLAT_BLOCKS, 4)
    assert [x.support for x in seq] == [(1,), (2, 3), tuple(range(4, 8)), tuple(range(8, 16))]


def test_family_checks():
    with pytest.raises(SequenceError):
        make_seq(FLAT_BLOCKS, 1, family=[(1, 2)])
    with pytest.raises(SequenceError):
        check_family([(2, 3), (4,)])  # shrinking sizes
    with pytest.raises(SequenceError):
        check_family([(2, 3), (3, 4)])
    assert check_family([(3, 2), (5, 4)]) == ((2, 3), (4, 5))


def test_block_validation():
    with pytest.raises(SequenceError):
        BlockSeq((FinVec.basis(2), FinVec.basis(2)))
    with pytest.raises(SequenceError):
        BlockSeq((FinVec(),))


def test_custom_file(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("1:1\n2:1 3:-1/2\n")
    seq = make_seq(CUSTOM, 0, path=p)
    assert seq[2] == FinVec({2: 1, 3: Fraction(-1, 2)})
    p.write_text("1:1 3:1\n2:1\n")
    with pytest.raises(SequenceError, match="members 1 and 2"):
        make_seq(CUSTOM, 0, path=p)


def test_blockings():
    basis = make_seq(BASIS, 15)
    assert list(block_seq(basis, dyadic_family(4), SUM)) == list(make_seq(FLAT_BLOCKS, 4))
    avg = block_seq(basis, [(1,), (2, 3)], AVERAGE)
    assert list(avg) == [FinVec.basis(1), FinVec({2: Fraction(1, 2), 3: Fraction(1, 2)})]
    same = block_seq(basis, [(2,), (5,), (9,)], SUM)
    assert list(same) == [basis[2], basis[5], basis[9]]
    with pytest.raises(SequenceError):
        block_seq(basis, [(16,)], SUM)


def test_mix(engine):
    xs = BlockSeq(tuple(FinVec.basis(2 * j - 1) for j in range(1, 5)))
    ys = BlockSeq(tuple(FinVec.basis(2 * j) for j in range(1, 5)))
    z0 = mix_seq(xs, ys, 0, engine)
    assert list(z0) == list(xs)
    z1 = mix_seq(xs, ys, 1, engine)
    for j in z1.indices:
        v = FinVec.basis(2 * j - 1) + FinVec.basis(2 * j)
        assert z1[j] == v.scale(1 / engine.norm(v))
        assert engine.norm(z1[j]) == 1
    with pytest.raises(SequenceError, match="j=1"):
        mix_seq(ys, xs, 1, engine)
    with pytest.raises(SequenceError):
        mix_seq(xs, ys, Fraction(3, 2), engine)


def test_interleaved_pair_and_named_rows(engine):
    xs, ys = interleaved_pair(5)
    for j in xs.indices:
        assert xs[j].precedes(ys[j])
        if j < xs.last:
            assert ys[j].precedes(xs[j + 1])
    assert len(named_row("basis", engine)) == 12
    assert named_row("flat@2-3", engine).indices == range(2, 4)
    m = named_row("mix:1/2", engine)
    assert all(engine.norm(x) == 1 for x in m)
    with pytest.raises(SequenceError):
        named_row("nope", engine)
    with pytest.raises(SequenceError):
        named_row("mix", engine)


def test_tail_and_normalize(engine):
    seq = make_seq(FLAT_BLOCKS, 4)
    t = seq.tail(2, 3)
    assert t.start == 2 and t[3] == seq[3]
    with pytest.raises(SequenceError):
        seq.tail(3, 9)
    n = normalize_seq(seq, engine)
    assert all(engine.norm(x) == 1 for x in n)
