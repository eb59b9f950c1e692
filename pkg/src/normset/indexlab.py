"""Finite-scale quantified alpha-index and the averaging lemma checker.

The index itself is a limit; what is computed here are exact finite suprema

    value(s_min, max_len, tail_start) = max_{i >= tail_start} sup{ |f(x_i)| :
        f Schreier, s(f) >= s_min, l(f) <= max_len }

and a labelled trend. The trend is a diagnostic of the finite profile only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core.spaces import DEFAULT_SPACE, INF, SchClass, SpaceSpec
from .core.trees import Tree
from .core.vectors import FinVec, as_rat, combine, format_rat
from .engine import Engine, StratifiedOracle

VANISHING = "VANISHING"
BOUNDED_BELOW = "BOUNDED_BELOW"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_VANISH_EPS = Fraction(1, 16)


@dataclass(frozen=True)
class GridPoint:
    s_min: int
    max_len: float | int
    tail_start: int


@dataclass
class AlphaProfile:
    grid: list[tuple[GridPoint, Fraction]]
    trend: str
    bound: Fraction | None = None
    eps: Fraction = DEFAULT_VANISH_EPS

    def value(self, s_min, max_len, tail_start) -> Fraction:
        for g, v in self.grid:
            if (g.s_min, g.max_len, g.tail_start) == (s_min, max_len, tail_start):
                return v
        raise KeyError((s_min, max_len, tail_start))

    def trend_label(self) -> str:
        if self.trend == BOUNDED_BELOW:
            return f"{BOUNDED_BELOW}({format_rat(self.bound)})"
        return self.trend

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s_min", "maxLen", "tailStart", "value_num", "value_den"])
        for g, v in self.grid:
            n = "inf" if g.max_len == INF else g.max_len
            w.writerow([g.s_min, n, g.tail_start, v.numerator, v.denominator])
        w.writerow([f"# trend={self.trend_label()} eps={format_rat(self.eps)}"])
        return buf.getvalue()


def _grid(points) -> list[GridPoint]:
    out = []
    for p in points:
        g = p if isinstance(p, GridPoint) else GridPoint(*p)
        if g.s_min < 1 or g.max_len < 1:
            raise ValueError(f"grid point {g} needs s_min >= 1 and max_len >= 1")
        out.append(g)
    return out


def empirical_alpha_tilde(seq, grid, spec: SpaceSpec = DEFAULT_SPACE, engine: Engine | None = None,
                          eps=DEFAULT_VANISH_EPS) -> AlphaProfile:
    """Fill the profile exactly on ``grid`` and label its trend.

    VANISHING: the value at the largest grid point (largest s_min, then
    tail_start, then max_len) is below ``eps``. BOUNDED_BELOW(c): every value
    is at least ``c = min value > eps``. Otherwise INCONCLUSIVE.
    """
    points = _grid(grid)
    if not points:
        raise ValueError("empty grid")
    if not len(seq):
        raise ValueError("empty sequence")
    eps = as_rat(eps)
    engine = engine or Engine(spec)
    rows = []
    for g in points:
        if g.tail_start > seq.last:
            raise ValueError(f"tail_start {g.tail_start} is beyond the sequence end {seq.last}")
        cls = SchClass(g.s_min, g.max_len)
        start = max(g.tail_start, seq.start)
        v = max(engine.value(seq[j], cls) for j in range(start, seq.last + 1))
        rows.append((g, v))
    largest = max(rows, key=lambda gv: (gv[0].s_min, gv[0].tail_start, gv[0].max_len))
    low = min(v for _, v in rows)
    if largest[1] < eps:
        return AlphaProfile(rows, VANISHING, None, eps)
    if low > eps:
        return AlphaProfile(rows, BOUNDED_BELOW, low, eps)
    return AlphaProfile(rows, INCONCLUSIVE, None, eps)


def diagonal_alpha(members: Iterable[FinVec], max_len, engine: Engine) -> Fraction:
    """``max_q sup{|f(x_q)| : s(f) >= min supp(x_q), l(f) <= max_len}`` over the given members.

    The size floor follows each member's own support, the finite stand-in for
    letting the size threshold and the tail index grow together.
    """
    best = Fraction(0)
    for x in members:
        v = engine.value(x, SchClass(int(x.min_supp), max_len))
        if v > best:
            best = v
    return best


# -- averaging lemma ---------------------------------------------------------


class NotNormalized(ValueError):
    def __init__(self, index: int, value: Fraction):
        super().__init__(f"x_{index} has norm {format_rat(value)}, not 1")
        self.index = index
        self.value = value


@dataclass
class LemmaReport:
    ok: bool
    n: int
    scale: Fraction
    per_size: list[tuple[int, Fraction, Fraction]]  # (size, sup value, bound)
    tightest: tuple[int, Fraction] | None
    witness: Tree | None
    counterexample: Tree | None = None
    engine_route: list[tuple[int, Fraction, Fraction]] = field(default_factory=list)
    engine_ok: bool = True

    @property
    def slack(self) -> Fraction | None:
        return self.tightest[1] if self.tightest else None


def lemma_bound(s: int, n: int) -> Fraction:
    return Fraction(1, s) + Fraction(2, n)


def average_bound_check(xs: Sequence[FinVec], max_size: int, max_depth: int,
                        spec: SpaceSpec = DEFAULT_SPACE, engine: Engine | None = None,
                        normalized: bool = True, node_budget: int | None = None,
                        engine_sizes: bool = True) -> LemmaReport:
    """Exhaustively test ``|a((1/n) sum x_i)| <= 1/s(a) + 2/n`` over averages ``a``.

    The averages range over declared sizes ``<= max_size`` whose pieces lie in
    W^(max_depth - 1), with leaves in the combined support; the supremum for
    each size is found by the stratified enumeration. With ``normalized=False``
    the bound is scaled by ``max ||x_i||``. ``engine_sizes`` adds the same test
    without depth or size caps through the interval solver, for sizes >= s.
    """
    if max_size < 1 or max_depth < 1:
        raise ValueError("max_size and max_depth must be positive")
    engine = engine or Engine(spec)
    n = len(xs)
    if n == 0:
        raise ValueError("empty list of vectors")
    for k in range(1, n):
        if not xs[k - 1].precedes(xs[k]):
            raise ValueError(f"x_{k} and x_{k + 1} are not successive")
    norms = [engine.norm(x) for x in xs]
    if normalized:
        for k, v in enumerate(norms, start=1):
            if v != 1:
                raise NotNormalized(k, v)
        scale = Fraction(1)
    else:
        scale = max(norms)
    z = combine(list(xs), [Fraction(1, n)] * n)

    orc = StratifiedOracle(z, spec, max_size, node_budget)
    while orc.level < max_depth - 1:
        if not orc.step():
            break
    avgs = orc.averages()
    best: dict[int, tuple[Fraction, Tree]] = {}
    for (_lo, _hi, s), (v, tree) in avgs.items():
        if s not in best or v > best[s][0]:
            best[s] = (v, tree)
    per_size = []
    tight = None
    witness = None
    counter = None
    for s in sorted(best):
        v, tree = best[s]
        bound = lemma_bound(s, n) * scale
        per_size.append((s, v, bound))
        slack = bound - v
        if tight is None or slack < tight[1]:
            tight, witness = (s, slack), tree
        if v > bound and counter is None:
            counter = tree
    eng_rows = []
    eng_ok = True
    if engine_sizes:
        from .core.spaces import AvgClass

        for s in range(1, max_size + 1):
            v = engine.value(z, AvgClass(s))
            bound = lemma_bound(s, n) * scale
            eng_rows.append((s, v, bound))
            if v > bound:
                eng_ok = False
    return LemmaReport(counter is None and eng_ok, n, scale, per_size, tight, witness, counter,
                       eng_rows, eng_ok)
