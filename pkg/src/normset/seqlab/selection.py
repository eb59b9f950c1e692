"""Index selection for arrays of block sequences and the sandwich checks built on it.

Rows are normalized block sequences. A selection picks one member per row so
that the picked vectors are successive, and freezes a finite surrogate
``a_i`` for each row such that every Schreier functional with size at least
``min supp`` of a later pick and length at most ``max supp`` of an earlier one
takes value below ``a_i + eps/(2n)`` on the picked member of row ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..core.spaces import DEFAULT_SPACE, SchClass, SpaceSpec
from ..core.vectors import FinVec, as_rat, combine, format_rat
from ..engine import Engine
from .sequences import BlockSeq, SequenceError

EXHAUSTED = "EXHAUSTED"


class SelectionError(RuntimeError):
    def __init__(self, tag: str, row: int, detail: str):
        super().__init__(f"{tag}: row {row}: {detail}")
        self.tag = tag
        self.row = row
        self.detail = detail


@dataclass(frozen=True)
class SeqArray:
    """Rows ``x^(1) .. x^(n)`` and an anchor vector ``x_0`` (zero by default)."""

    rows: tuple[BlockSeq, ...]
    anchor: FinVec = field(default_factory=FinVec)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise SequenceError("an array needs at least one row")

    def __len__(self) -> int:
        return len(self.rows)

    def permuted(self, perm: Sequence[int]) -> "SeqArray":
        """Row ``i`` of the result is row ``perm[i]`` (0-based) of this array."""
        if sorted(perm) != list(range(len(self.rows))):
            raise ValueError(f"{list(perm)} is not a permutation of 0..{len(self.rows) - 1}")
        return SeqArray(tuple(self.rows[p] for p in perm), self.anchor)

    def scaled(self, lambdas) -> "SeqArray":
        if len(lambdas) != len(self.rows):
            raise ValueError("one coefficient per row is needed")
        return SeqArray(tuple(r.scaled(l) for r, l in zip(self.rows, lambdas)), self.anchor)

    def max_supp(self) -> int:
        return max([self.anchor.max_supp] + [r[r.last].max_supp for r in self.rows])

    def describe(self) -> str:
        return " | ".join(r.describe() for r in self.rows)


@dataclass
class Selection:
    indices: list[int]
    surrogates: list[Fraction]
    intrinsic: list[Fraction]
    raised: list[bool]
    eps: Fraction
    # (step i', row i, size floor, length, largest value seen)
    thresholds: list[tuple[int, int, int, int, Fraction]]
    # (i', i, value, bound) at the picked members
    checks: list[tuple[int, int, Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return all(v < b for _, _, v, b in self.checks)

    def picked(self, array: SeqArray) -> list[FinVec]:
        return [r[j] for r, j in zip(array.rows, self.indices)]


def diagonal_value(x: FinVec, max_len, engine: Engine) -> Fraction:
    """``sup{|f(x)| : f Schreier, s(f) >= min supp(x), l(f) <= max_len}``."""
    return engine.value(x, SchClass(int(x.min_supp), max_len))


def _completes(array: SeqArray, r: int, after_j: int, after_max) -> bool:
    """Can rows ``r..`` (0-based) still be picked in block order?"""
    for row in array.rows[r:]:
        nxt = next((c for c in row.indices if c > after_j and row[c].min_supp > after_max), None)
        if nxt is None:
            return False
        after_j, after_max = nxt, row[nxt].max_supp
    return True


LATE = "late"
EARLY = "early"


def select_indices(array: SeqArray, eps, engine: Engine | None = None, caps=None, streak: int = 1,
                   raise_surrogates: bool = True, order: str = LATE,
                   spec: SpaceSpec = DEFAULT_SPACE) -> Selection:
    """Pick one member per row, deep in the rows, and freeze the surrogates.

    Rows are handled in order. Each takes, among the members that follow the
    previous pick and still leave room for the later rows, the latest one
    whose inequalities against the earlier picks hold with its own surrogate;
    the surrogate starts as the diagonal value of the candidate with length
    budget ``caps[i]`` (an int for every row, a list, or None for the array's
    largest support point).

    When no candidate qualifies, or an earlier pick is longer than the row's
    cap, the latest candidate is taken and its surrogate is raised to the
    least value making the inequalities hold; with ``raise_surrogates=False``
    this is an EXHAUSTED error. The inequalities of a candidate are checked on
    ``streak`` successive members starting at it (fewer at the row's end).
    ``order="early"`` prefers the earliest qualifying member instead.
    """
    eps = as_rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    engine = engine or Engine(spec)
    n = len(array)
    if caps is None or isinstance(caps, int):
        caps = [caps] * n
    if len(caps) != n:
        raise ValueError("one cap per row is needed")
    big = array.max_supp()
    caps = [big if c is None else c for c in caps]
    if any(c < 1 for c in caps):
        raise ValueError("caps must be positive")
    if streak < 1:
        raise ValueError("streak must be positive")
    if order not in (LATE, EARLY):
        raise ValueError(f"order must be {LATE!r} or {EARLY!r}")
    slack = eps / (2 * n)
    picks: list[int] = []
    picked: list[FinVec] = []
    a: list[Fraction] = []
    intrinsic: list[Fraction] = []
    raised: list[bool] = []
    thresholds = []
    prev_j, prev_max = 0, array.anchor.max_supp
    lengths = [array.anchor.max_supp]  # N_0, N_1, ...: max supp of the anchor and the picks
    for r, row in enumerate(array.rows):
        cands = [c for c in row.indices
                 if c > prev_j and row[c].min_supp > prev_max and _completes(array, r + 1, c, row[c].max_supp)]
        if not cands:
            raise SelectionError(EXHAUSTED, r + 1, f"no member after index {prev_j} starts past {prev_max}"
                                 " and leaves room for the later rows")
        chosen = None
        for c in (reversed(cands) if order == LATE else cands):
            x = row[c]
            d = diagonal_value(x, caps[r], engine)
            floors = [int(y.min_supp) for y in picked] + [int(x.min_supp)]
            window = [row[q] for q in range(c, min(row.last, c + streak - 1) + 1)]
            needs = [(ip, floors[ip], lengths[ip],
                      max(engine.value(y, SchClass(floors[ip], lengths[ip])) for y in window))
                     for ip in range(r + 1) if lengths[ip]]
            fits = all(N <= caps[r] for _, _, N, _ in needs)
            worst = max((v for *_, v in needs), default=Fraction(0))
            if chosen is None:
                chosen = (c, d, needs, fits, worst)
            if fits and worst < d + slack:
                chosen = (c, d, needs, fits, worst)
                break
        c, d, needs, fits, worst = chosen
        up = not fits or worst >= d + slack
        if up and not raise_surrogates:
            why = "an earlier pick is longer than the cap" if not fits else \
                f"the inequalities need {format_rat(worst)} above the surrogate {format_rat(d)}"
            raise SelectionError(EXHAUSTED, r + 1, why)
        x = row[c]
        for ip, s, N, v in needs:
            thresholds.append((ip, r + 1, s, N, v))
        picks.append(c)
        picked.append(x)
        intrinsic.append(d)
        a.append(max(d, worst) if up else d)
        raised.append(up and worst > d)
        prev_j, prev_max = c, x.max_supp
        lengths.append(prev_max)
    sel = Selection(picks, a, intrinsic, raised, eps, thresholds, [])
    _verify(array, sel, engine)
    return sel


def _verify(array: SeqArray, sel: Selection, engine: Engine) -> None:
    """Re-evaluate the defining inequality at the picked members."""
    n = len(array)
    picked = sel.picked(array)
    lengths = [array.anchor.max_supp] + [x.max_supp for x in picked]
    slack = sel.eps / (2 * n)
    for ip in range(n):
        if lengths[ip] == 0:
            continue
        s = int(picked[ip].min_supp)
        for i in range(ip, n):
            v = engine.value(picked[i], SchClass(s, lengths[ip]))
            sel.checks.append((ip, i + 1, v, sel.surrogates[i] + slack))


@dataclass
class SandwichReport:
    ok: bool
    value: Fraction
    lower: Fraction
    upper: Fraction
    max_norm: Fraction
    alpha_sum: Fraction
    selection: Selection
    eps: Fraction

    def to_dict(self) -> dict:
        sel = self.selection
        return {
            "ok": self.ok,
            "value": format_rat(self.value),
            "lower": format_rat(self.lower),
            "upper": format_rat(self.upper),
            "max_norm": format_rat(self.max_norm),
            "alpha_sum": format_rat(self.alpha_sum),
            "eps": format_rat(self.eps),
            "indices": sel.indices,
            "surrogates": [format_rat(v) for v in sel.surrogates],
            "intrinsic": [format_rat(v) for v in sel.intrinsic],
            "raised": sel.raised,
        }


def sandwich_check(array: SeqArray, eps, engine: Engine | None = None,
                   selection: Selection | None = None, spec: SpaceSpec = DEFAULT_SPACE,
                   **select_kw) -> SandwichReport:
    """``max(M, sum a_i) - eps <= ||x_0 + sum x^(i)_{j_i}|| <= 2M + 2 sum a_i + eps``.

    ``M`` is the largest norm among the anchor and the picked members.
    """
    eps = as_rat(eps)
    engine = engine or Engine(spec)
    sel = selection or select_indices(array, eps, engine, spec=spec, **select_kw)
    picked = sel.picked(array)
    total = combine([array.anchor] + picked, [1] * (len(picked) + 1))
    value = engine.norm(total)
    m = max([engine.norm(array.anchor)] + [engine.norm(x) for x in picked])
    s = sum(sel.surrogates, Fraction(0))
    lower = max(m, s)
    upper = 2 * m + 2 * s
    ok = lower - eps <= value <= upper + eps and sel.ok
    return SandwichReport(ok, value, lower, upper, m, s, sel, eps)


@dataclass
class SymmetryReport:
    ok: bool
    forward: SandwichReport
    permuted: SandwichReport
    perm: tuple[int, ...]
    eps: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.forward.value / self.permuted.value


def symmetry_check(array: SeqArray, perm: Sequence[int], eps, engine: Engine | None = None,
                   spec: SpaceSpec = DEFAULT_SPACE, **select_kw) -> SymmetryReport:
    """Both the array and its row permutation are selected afresh; their sums
    must stay within a factor 4 of each other, up to ``eps``."""
    eps = as_rat(eps)
    engine = engine or Engine(spec)
    fwd = sandwich_check(array, eps, engine, **select_kw)
    back = sandwich_check(array.permuted(perm), eps, engine, **select_kw)
    a, b = fwd.value, back.value
    ok = a <= 4 * b + eps and b <= 4 * a + eps
    return SymmetryReport(ok, fwd, back, tuple(perm), eps)


@dataclass
class ModelReport:
    ok: bool
    weights: list[Fraction]
    selection: Selection
    # (coefficients, value, lower, upper, ok)
    rows: list[tuple[tuple[Fraction, ...], Fraction, Fraction, Fraction, bool]]


def default_coefficients(n: int) -> list[tuple[Fraction, ...]]:
    levels = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))
    return [c for c in product(levels, repeat=n) if any(c)]


def asymptotic_model_weights(array: SeqArray, eps, coefficients=None, engine: Engine | None = None,
                             spec: SpaceSpec = DEFAULT_SPACE, **select_kw) -> ModelReport:
    """Weights ``w_i`` are the selection's surrogates on the unscaled array.

    For each coefficient vector with entries in [-1, 1] the picked combination
    is compared with ``max(max|l_i|, sum w_i|l_i|) - eps`` from below and
    ``2 max|l_i| + 2 sum w_i |l_i| + eps`` from above (anchor ignored).
    """
    eps = as_rat(eps)
    engine = engine or Engine(spec)
    sel = select_indices(array, eps, engine, spec=spec, **select_kw)
    picked = sel.picked(array)
    w = sel.surrogates
    coefficients = default_coefficients(len(array)) if coefficients is None else coefficients
    out = []
    for lam in coefficients:
        lam = tuple(as_rat(l) for l in lam)
        if len(lam) != len(array):
            raise ValueError("one coefficient per row is needed")
        if any(abs(l) > 1 for l in lam):
            raise ValueError("coefficients must lie in [-1, 1]")
        v = engine.norm(combine(picked, list(lam)))
        m = max(abs(l) for l in lam)
        s = sum((wi * abs(l) for wi, l in zip(w, lam)), Fraction(0))
        lo, hi = max(m, s), 2 * m + 2 * s
        out.append((lam, v, lo, hi, lo - eps <= v <= hi + eps))
    return ModelReport(all(r[-1] for r in out) and sel.ok, list(w), sel, out)
