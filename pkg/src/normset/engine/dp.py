"""Exact norm and constrained suprema by memoized interval dynamic programming.

Work is done on ``|x|`` with positive leaves (the basis is 1-unconditional and
the norming set is closed under restriction), over the sorted support points
``p_0 < ... < p_{m-1}``. For a contiguous run ``[a..b]`` of support points:

``V(a, b)``
    best functional supported in ``[a..b]``. An average never beats its best
    child, so only a leaf, a shorter run, or a Schreier functional whose first
    average starts at ``a`` can be optimal.
``Q(a, b, d)``
    best total of at most ``d`` successive functionals inside ``[a..b]``.
``A(a, b, s)``
    best average of declared size ``n >= s``: ``max_n Q(a, b, n) / n``.
    The chosen ``n`` is always ``max(d, s)`` for ``d`` used blocks.
``T(i, b, s, L)``
    best total of at most ``L`` further averages of a Schreier functional in
    ``[i..b]``, the next size being at least ``s``. After an average on a run
    ending at ``p_j`` with floor ``s`` the next floor is ``max(s, p_j) + 1``,
    whatever size was chosen, since ``n <= max(s, #run) <= max(s, p_j)``.

Inside ``V(a, b)`` the candidates that reach ``V(a, b)`` itself through a
single child spanning the whole run (value ``q * V(a, b)`` with ``q <= 1``)
are left out; they never exceed the remaining candidates, and leaving them
out gives the least fixed point, i.e. the smallest norming set.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from ..core.spaces import ANY, DEFAULT_SPACE, INF, AnyClass, AvgClass, SchClass, SpaceSpec
from ..core.trees import EMPTY, Avg, Leaf, Sch, Tree
from ..core.vectors import FinVec

_ZERO = mpq(0)
_NONE = (_ZERO, 0, None)


class ResourceLimit(RuntimeError):
    """A configured budget was exceeded."""


@dataclass
class SolveStats:
    subproblems: int = 0
    memo_hits: int = 0
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = {"subproblems": self.subproblems, "memo_hits": self.memo_hits}
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class IntervalSolver:
    """All value tables for one vector; reused across queries on that vector."""

    def __init__(self, x: FinVec, spec: SpaceSpec = DEFAULT_SPACE,
                 size_cap: int | None = None, budget: int | None = None):
        self.x = x
        self.spec = spec
        self.pts = [i for i, _ in x.entries]
        self.w = [mpq(abs(c).numerator, c.denominator) for _, c in x.entries]
        self.sgn = [1 if c > 0 else -1 for _, c in x.entries]
        self.m = len(self.pts)
        self.theta = mpq(spec.theta.numerator, spec.theta.denominator)
        self.cap = size_cap if size_cap is not None else INF
        self.vfg = spec.enforce_vfg
        self.adm = spec.enforce_admissible
        self.budget = budget
        self.stats = SolveStats()
        self._V: dict = {}
        self._Q: dict = {}
        self._A: dict = {}
        self._T: dict = {}
        self._built = False

    # -- bookkeeping -------------------------------------------------------

    def _tick(self):
        self.stats.subproblems += 1
        if self.budget is not None and self.stats.subproblems > self.budget:
            raise ResourceLimit(f"subproblem budget {self.budget} exceeded")

    def _next_floor(self, s, j):
        if not self.vfg:
            return 1
        p = self.pts[j]
        return (s if s > p else p) + 1

    # -- tables ------------------------------------------------------------

    def _build(self):
        if self._built:
            return
        limit = sys.getrecursionlimit()
        if limit < 20000:
            sys.setrecursionlimit(20000)
        V = self._V
        for span in range(self.m):
            for a in range(self.m - span):
                b = a + span
                self._tick()
                if span == 0:
                    V[a, b] = (self.w[a], 1, ("leaf",))
                    continue
                left, right = V[a, b - 1], V[a + 1, b]
                best = (left[0], left[1], ("inh", a, b - 1))
                if right[0] > best[0] or (right[0] == best[0] and right[1] < best[1]):
                    best = (right[0], right[1], ("inh", a + 1, b))
                sch = self._schreier(a, b, 1, INF, strict=True, fixed_start=True)
                if sch is not None:
                    val = self.theta * sch[0]
                    if val > best[0] or (val == best[0] and sch[1] < best[1]):
                        best = (val, sch[1], ("sch", sch[2]))
                V[a, b] = best
        self._built = True

    def _Qf(self, a, b, d):
        """At most d successive functionals in [a..b], the whole run allowed."""
        if a > b or d <= 0:
            return _NONE
        ln = b - a + 1
        if d > ln:
            d = ln
        key = (a, b, d, False)
        hit = self._Q.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        best = self._Qs(a, b, d)
        v = self._V[a, b]
        if v[0] > best[0] or (v[0] == best[0] and v[1] < best[1]):
            best = (v[0], v[1], ("whole",))
        self._tick()
        self._Q[key] = best
        return best

    def _Qs(self, a, b, d):
        """As _Qf but never the single functional on the whole run [a..b]."""
        if a > b or d <= 0:
            return _NONE
        ln = b - a + 1
        if d > ln:
            d = ln
        key = (a, b, d, True)
        hit = self._Q.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        V = self._V
        best = _NONE
        if a < b:
            r = self._Qf(a + 1, b, d)
            best = (r[0], r[1], ("skip",))
            for j in range(a, b):
                v = V[a, j]
                rest = self._Qf(j + 1, b, d - 1)
                val = v[0] + rest[0]
                nodes = v[1] + rest[1]
                if val > best[0] or (val == best[0] and nodes < best[1]):
                    best = (val, nodes, ("blk", j))
        self._tick()
        self._Q[key] = best
        return best

    def _avg(self, a, b, s, strict=False):
        """Best average on [a..b] of size >= s: (value, nodes, n) or None if no size fits."""
        if s > self.cap:
            return None
        key = (a, b, s, strict)
        hit = self._A.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        ln = b - a + 1
        top = s if s > ln else ln
        if top > self.cap:
            top = self.cap
        q = self._Qs if strict else self._Qf
        best = None
        for n in range(s, top + 1):
            r = q(a, b, n if n < ln else ln)
            if r[2] is None:
                continue
            val = r[0] / n
            nodes = r[1] + 1
            if best is None or val > best[0] or (val == best[0] and nodes < best[1]):
                best = (val, nodes, n)
        self._tick()
        self._A[key] = best
        return best

    def _tail(self, i, b, s, L):
        """At most L further averages in [i..b], sizes >= s (and growing if VFG)."""
        if i > b or L <= 0 or s > self.cap:
            return _NONE
        rem = b - i + 1
        if L > rem:
            L = rem
        key = (i, b, s, L)
        hit = self._T.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        r = self._tail(i + 1, b, s, L)
        best = (r[0], r[1], ("skip",)) if r[2] is not None else _NONE
        for j in range(i, b + 1):
            av = self._avg(i, j, s)
            if av is None:
                continue
            rest = self._tail(j + 1, b, self._next_floor(s, j), L - 1)
            val = av[0] + rest[0]
            nodes = av[1] + rest[1]
            if val > best[0] or (val == best[0] and nodes < best[1]):
                best = (val, nodes, ("blk", j, s))
        self._tick()
        self._T[key] = best
        return best

    def _schreier(self, a, b, s0, L0, strict=False, fixed_start=False):
        """Best sum of averages (before the theta factor) of a Schreier functional in [a..b].

        Returns (sum, nodes, plan) with plan = (i, j, strict_first, L) or None.
        """
        best = None
        starts = (a,) if fixed_start else range(a, b + 1)
        for i in starts:
            L = L0
            if self.adm and self.pts[i] < L:
                L = self.pts[i]
            if L < 1:
                continue
            for j in range(i, b + 1):
                first_strict = strict and i == a and j == b
                av = self._avg(i, j, s0, strict=first_strict)
                if av is None:
                    continue
                rest = self._tail(j + 1, b, self._next_floor(s0, j), L - 1)
                val = av[0] + rest[0]
                nodes = 1 + av[1] + rest[1]
                if best is None or val > best[0] or (val == best[0] and nodes < best[1]):
                    best = (val, nodes, (i, j, s0, first_strict, L))
        return best

    # -- witnesses -----------------------------------------------------------

    def _leaf(self, k):
        return Leaf(self.pts[k], self.sgn[k])

    def _tree_V(self, a, b) -> Tree:
        while True:
            ch = self._V[a, b][2]
            if ch[0] == "inh":
                a, b = ch[1], ch[2]
                continue
            if ch[0] == "leaf":
                return self._leaf(a)
            return self._tree_S(b, ch[1])

    def _tree_Q(self, a, b, d, strict) -> list:
        out = []
        while a <= b and d > 0:
            d = min(d, b - a + 1)
            ch = (self._Qs(a, b, d) if strict else self._Qf(a, b, d))[2]
            if ch is None:
                break
            if ch[0] == "whole":
                out.append(self._tree_V(a, b))
                break
            if ch[0] == "skip":
                a += 1
                strict = False
                continue
            j = ch[1]
            out.append(self._tree_V(a, j))
            a, d, strict = j + 1, d - 1, False
        return out

    def _tree_avg(self, a, b, s, strict=False) -> Avg:
        val, nodes, n = self._avg(a, b, s, strict)
        ln = b - a + 1
        return Avg(n, tuple(self._tree_Q(a, b, min(n, ln), strict)))

    def _tree_S(self, b, plan) -> Sch:
        i, j, s0, first_strict, L = plan
        kids = [self._tree_avg(i, j, s0, first_strict)]
        pos, s, left = j + 1, self._next_floor(s0, j), L - 1
        while pos <= b and left > 0 and s <= self.cap:
            left = min(left, b - pos + 1)
            ch = self._tail(pos, b, s, left)[2]
            if ch is None:
                break
            if ch[0] == "skip":
                pos += 1
                continue
            _, jj, ss = ch
            kids.append(self._tree_avg(pos, jj, ss))
            pos, s, left = jj + 1, self._next_floor(ss, jj), left - 1
        return Sch(tuple(kids))

    # -- queries -------------------------------------------------------------

    def best(self, cls=ANY) -> tuple[Fraction, Tree]:
        if self.m == 0:
            if isinstance(cls, AnyClass):
                return Fraction(0), EMPTY
            raise ValueError("constrained suprema need a nonempty vector")
        self._build()
        last = self.m - 1
        if isinstance(cls, AnyClass):
            return _to_fraction(self._V[0, last][0]), self._tree_V(0, last)
        if isinstance(cls, AvgClass):
            av = self._avg(0, last, cls.min_size)
            if av is None:
                raise ValueError(f"no average of size >= {cls.min_size} under size cap {self.cap}")
            return _to_fraction(av[0]), self._tree_avg(0, last, cls.min_size)
        if isinstance(cls, SchClass):
            if cls.max_len < 1:
                raise ValueError("Schreier class with max_len 0 is empty")
            sch = self._schreier(0, last, cls.min_size, cls.max_len)
            if sch is None:
                raise ValueError(f"no Schreier functional of size >= {cls.min_size} under size cap {self.cap}")
            return _to_fraction(self.theta * sch[0]), self._tree_S(last, sch[2])
        raise TypeError(f"unknown node class {cls!r}")
