"""Finite block sequences, their blockings and mixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..core.textio import read_vectors
from ..core.vectors import FinVec, as_rat, combine

BASIS = "basis"
FLAT_BLOCKS = "flat_blocks"
CUSTOM = "custom"


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class BlockSeq:
    """Members ``x_start, x_{start+1}, ...`` with successive supports.

    Members are addressed by their index in the parent sequence, so tails and
    one-member rows keep the indices of the sequence they were cut from.
    """

    members: tuple[FinVec, ...]
    start: int = 1
    kind: str = CUSTOM
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.start < 1:
            raise SequenceError("sequence indices start at 1 or later")
        for k, x in enumerate(self.members):
            if not x:
                raise SequenceError(f"member {self.start + k} is the zero vector")
        check_block(self.members, self.start)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, j: int) -> FinVec:
        if not self.start <= j <= self.last:
            raise IndexError(f"index {j} outside {self.start}..{self.last}")
        return self.members[j - self.start]

    def __iter__(self):
        return iter(self.members)

    @property
    def last(self) -> int:
        return self.start + len(self.members) - 1

    @property
    def indices(self) -> range:
        return range(self.start, self.last + 1)

    def tail(self, j0: int, stop: int | None = None) -> "BlockSeq":
        """Members with indices ``j0 .. stop`` (inclusive), indices preserved."""
        stop = self.last if stop is None else stop
        if not (self.start <= j0 <= stop <= self.last):
            raise SequenceError(f"tail {j0}..{stop} outside {self.start}..{self.last}")
        return BlockSeq(self.members[j0 - self.start: stop - self.start + 1], j0, self.kind, self.normalized)

    def scaled(self, a) -> "BlockSeq":
        a = as_rat(a)
        return BlockSeq(tuple(x.scale(a) for x in self.members), self.start, self.kind,
                        self.normalized and abs(a) == 1)

    def describe(self) -> str:
        return f"{self.kind}[{self.start}..{self.last}]"


def check_block(members: Sequence[FinVec], start: int = 1) -> None:
    for k in range(1, len(members)):
        if not members[k - 1].precedes(members[k]):
            raise SequenceError(
                f"members {start + k - 1} and {start + k} are not successive "
                f"(max supp {members[k - 1].max_supp} >= min supp {members[k].min_supp})"
            )


Family = tuple[tuple[int, ...], ...]


def check_family(family: Sequence[Sequence[int]]) -> Family:
    """Successive sets with ``#F_n <= min F_n`` and ``#F_n`` nondecreasing."""
    fam = tuple(tuple(sorted(set(F))) for F in family)
    for n, F in enumerate(fam, start=1):
        if not F:
            raise SequenceError(f"F_{n} is empty")
        if len(F) > F[0]:
            raise SequenceError(f"#F_{n} = {len(F)} exceeds min F_{n} = {F[0]}")
        if n > 1:
            prev = fam[n - 2]
            if prev[-1] >= F[0]:
                raise SequenceError(f"F_{n - 1} and F_{n} are not successive")
            if len(F) < len(prev):
                raise SequenceError(f"#F_{n} = {len(F)} is smaller than #F_{n - 1} = {len(prev)}")
    return fam


def dyadic_family(length: int) -> Family:
    """``F_n = {2^(n-1), ..., 2^n - 1}``, n = 1..length."""
    return tuple(tuple(range(2 ** (n - 1), 2 ** n)) for n in range(1, length + 1))


def make_seq(kind: str, length: int, family=None, path: str | Path | None = None) -> BlockSeq:
    if kind == BASIS:
        return BlockSeq(tuple(FinVec.basis(i) for i in range(1, length + 1)), 1, BASIS, True)
    if kind == FLAT_BLOCKS:
        fam = check_family(family if family is not None else dyadic_family(length))
        if len(fam) < length:
            raise SequenceError(f"family has {len(fam)} sets, {length} requested")
        return BlockSeq(tuple(FinVec.flat(F) for F in fam[:length]), 1, FLAT_BLOCKS, False)
    if kind == CUSTOM:
        if path is None:
            raise SequenceError("custom sequences need a vector file")
        xs = read_vectors(path)
        if length:
            xs = xs[:length]
        return BlockSeq(tuple(xs), 1, CUSTOM, False)
    raise SequenceError(f"unknown sequence kind {kind!r}")


SUM = "sum"
AVERAGE = "average"


def block_seq(seq: BlockSeq, family, mode: str = SUM) -> BlockSeq:
    """``y_n = sum_{i in F_n} x_i`` (SUM) or its average over ``F_n`` (AVERAGE)."""
    fam = check_family(family)
    out = []
    for n, F in enumerate(fam, start=1):
        if F[0] < seq.start or F[-1] > seq.last:
            raise SequenceError(f"F_{n} reaches outside member indices {seq.start}..{seq.last}")
        y = combine([seq[i] for i in F], [1] * len(F))
        if mode == AVERAGE:
            y = y.scale(Fraction(1, len(F)))
        elif mode != SUM:
            raise SequenceError(f"unknown blocking mode {mode!r}")
        out.append(y)
    return BlockSeq(tuple(out), 1, f"{mode}({seq.kind})", False)


def interleaved_pair(length: int) -> tuple[BlockSeq, BlockSeq]:
    """Basis vectors ``x_j`` and flat blocks ``y_j`` with ``x_j < y_j < x_{j+1}``.

    ``#supp(y_j) = 2^(j-1)`` whenever that does not exceed ``min supp(y_j)``.
    """
    xs, ys = [], []
    cursor = 1
    for j in range(1, length + 1):
        xs.append(FinVec.basis(cursor))
        cursor += 1
        g = min(2 ** (j - 1), cursor)
        ys.append(FinVec.flat(range(cursor, cursor + g)))
        cursor += g
    return BlockSeq(tuple(xs), 1, BASIS, True), BlockSeq(tuple(ys), 1, FLAT_BLOCKS, False)


def mix_seq(xseq: BlockSeq, yseq: BlockSeq, w, engine) -> BlockSeq:
    """``z_j = (x_j + w y_j) / ||x_j + w y_j||`` with the norm computed exactly."""
    w = as_rat(w)
    if not 0 <= w <= 1:
        raise SequenceError(f"mixing weight {w} outside [0, 1]")
    if xseq.start != yseq.start or len(xseq) != len(yseq):
        raise SequenceError("mixed sequences need matching index ranges")
    for j in xseq.indices:
        if not xseq[j].precedes(yseq[j]):
            raise SequenceError(f"interleaving fails at j={j}: x_j is not before y_j")
        if j < xseq.last and not yseq[j].precedes(xseq[j + 1]):
            raise SequenceError(f"interleaving fails at j={j}: y_j is not before x_(j+1)")
    out = []
    for j in xseq.indices:
        v = xseq[j] + yseq[j].scale(w)
        nv = engine.norm(v)
        if nv == 0:
            raise SequenceError(f"z_{j} has zero norm")
        out.append(v.scale(1 / nv))
    return BlockSeq(tuple(out), xseq.start, f"mix(w={w})", True)


def normalize_seq(seq: BlockSeq, engine) -> BlockSeq:
    return BlockSeq(tuple(x.scale(1 / engine.norm(x)) for x in seq), seq.start, seq.kind, True)


ROW_KINDS = ("basis", "flatblocks", "mix:<w>", "file:<path>")
DEFAULT_LENGTHS = {"basis": 12, "flatblocks": 5, "mix": 5}


def named_row(name: str, engine, length: int | None = None) -> BlockSeq:
    """Rows by name: ``basis``, ``flatblocks``, ``mix:<w>`` (mixed pair of the
    interleaved basis/flat-block construction) or ``file:<path>``, with an
    optional ``@a-b`` (or ``@a``) suffix cutting the tail ``a..b``.
    """
    base, _, cut = name.partition("@")
    kind, _, arg = base.partition(":")
    if kind == "basis":
        row = make_seq(BASIS, length or DEFAULT_LENGTHS["basis"])
    elif kind in ("flatblocks", "flat"):
        row = make_seq(FLAT_BLOCKS, length or DEFAULT_LENGTHS["flatblocks"])
    elif kind == "mix":
        if not arg:
            raise SequenceError("mix rows need a weight, as in mix:1/2")
        xs, ys = interleaved_pair(length or DEFAULT_LENGTHS["mix"])
        row = mix_seq(xs, ys, as_rat(arg), engine)
    elif kind == "file":
        row = make_seq(CUSTOM, 0, path=arg)
    else:
        raise SequenceError(f"unknown row kind {kind!r}; expected one of {', '.join(ROW_KINDS)}")
    if cut:
        a, _, b = cut.partition("-")
        try:
            row = row.tail(int(a), int(b) if b else None)
        except ValueError as e:
            raise SequenceError(f"bad tail {cut!r} in {name!r}: {e}") from None
    return row
