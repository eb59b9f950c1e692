"""Brute-force suprema by following the inductive construction W^0, W^1, ... literally.

A functional built at level m+1 from level-m pieces depends on each piece only
through its (min supp, max supp) and its value at ``|x|``; so each level is
stored as the best value, with a witness tree, per exact support interval.
Every average (all sizes ``n <= size_cap``, all chains of ``d <= n``
successive pieces) and every admissible very fast growing sequence of such
averages is enumerated; nothing is pruned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.spaces import DEFAULT_SPACE, AnyClass, AvgClass, SchClass, SpaceSpec
from ..core.trees import EMPTY, Avg, Leaf, Sch, Tree, validate
from ..core.vectors import FinVec
from .dp import ResourceLimit

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass
class OracleResult:
    value: Fraction
    witness: Tree
    levels: int
    candidates: int
    fixpoint: bool


class _Counter:
    def __init__(self, budget):
        self.n = 0
        self.budget = budget

    def tick(self, k=1):
        self.n += k
        if self.budget is not None and self.n > self.budget:
            raise ResourceLimit(f"oracle node budget {self.budget} exceeded")


def _chains(intervals, start_after, max_len):
    """All chains of successive intervals (lo, hi) with lo > start_after, at most max_len long."""
    out = [()]
    frontier = [((), start_after)]
    for _ in range(max_len):
        nxt = []
        for chain, last in frontier:
            for iv in intervals:
                if iv[0] > last:
                    c = chain + (iv,)
                    nxt.append((c, iv[1]))
                    out.append(c)
        if not nxt:
            break
        frontier = nxt
    return out


class StratifiedOracle:
    def __init__(self, x: FinVec, spec: SpaceSpec = DEFAULT_SPACE, size_cap: int = 8,
                 node_budget: int | None = DEFAULT_NODE_BUDGET):
        if size_cap < 1:
            raise ValueError("size_cap must be at least 1")
        self.spec = spec
        self.pts = [i for i, _ in x.entries]
        self.sgn = [1 if c > 0 else -1 for _, c in x.entries]
        self.w = [abs(c) for _, c in x.entries]
        self.m = len(self.pts)
        self.cap = size_cap
        self.counter = _Counter(node_budget)
        # level 0: the unit vectors
        self.table: dict[tuple[int, int], tuple[Fraction, Tree]] = {
            (k, k): (self.w[k], Leaf(self.pts[k], self.sgn[k])) for k in range(self.m)
        }
        self.level = 0

    def averages(self, table=None) -> dict[tuple[int, int, int], tuple[Fraction, Avg]]:
        """Best alpha-average of the given level per (lo, hi, declared size)."""
        table = self.table if table is None else table
        ivs = sorted(table)
        best: dict = {}
        for chain in _chains(ivs, -1, min(self.m, self.cap)):
            if not chain:
                continue
            total = sum((table[iv][0] for iv in chain), Fraction(0))
            key_iv = (chain[0][0], chain[-1][1])
            for n in range(len(chain), self.cap + 1):
                self.counter.tick()
                val = total / n
                key = key_iv + (n,)
                cur = best.get(key)
                if cur is None or val > cur[0]:
                    best[key] = (val, Avg(n, tuple(table[iv][1] for iv in chain)))
        return best

    def _schreier_into(self, avgs, new, min_size=1, max_len=None):
        theta = self.spec.theta
        keys = sorted(avgs)
        adm, vfg = self.spec.enforce_admissible, self.spec.enforce_vfg

        def extend(seq, total, budget):
            lo, hi, n = seq[-1]
            self.counter.tick()
            val = theta * total
            iv = (seq[0][0], hi)
            cur = new.get(iv)
            if cur is None or val > cur[0]:
                new[iv] = (val, Sch(tuple(avgs[k][1] for k in seq)))
            if len(seq) >= budget:
                return
            for k in keys:
                if k[0] <= hi:
                    continue
                if vfg and (k[2] <= n or k[2] <= self.pts[hi]):
                    continue
                extend(seq + (k,), total + avgs[k][0], budget)

        for k in keys:
            if k[2] < min_size:
                continue
            budget = self.pts[k[0]] if adm else self.m
            if max_len is not None and max_len < budget:
                budget = max_len
            if budget < 1:
                continue
            extend((k,), avgs[k][0], budget)

    def step(self) -> bool:
        """Advance one level; returns True if the table changed."""
        avgs = self.averages()
        new = dict(self.table)
        for (lo, hi, _n), (val, tree) in avgs.items():
            cur = new.get((lo, hi))
            if val > cur[0] if cur else True:
                new[lo, hi] = (val, tree)
        self._schreier_into(avgs, new)
        changed = any(new[k][0] != self.table.get(k, (None,))[0] for k in new)
        self.table = new
        self.level += 1
        return changed

    def run(self, depth_cap: int) -> OracleResult:
        if self.m == 0:
            return OracleResult(Fraction(0), EMPTY, 0, 0, True)
        fix = False
        while self.level < depth_cap:
            if not self.step():
                # W^{m+1} = W^m on this support: every later level is the same
                fix = True
                break
        val, tree = max(self.table.values(), key=lambda vt: vt[0])
        return OracleResult(val, tree, self.level, self.counter.n, fix)


def brute_force_best(x: FinVec, cls, spec: SpaceSpec = DEFAULT_SPACE, depth_cap: int = 6,
                     size_cap: int = 8, node_budget: int | None = DEFAULT_NODE_BUDGET) -> OracleResult:
    """Supremum over the averages or Schreier functionals of ``cls`` lying in W^depth_cap."""
    if isinstance(cls, AnyClass):
        return brute_force(x, spec, depth_cap, size_cap, node_budget)
    if not x:
        raise ValueError("constrained suprema need a nonempty vector")
    orc = StratifiedOracle(x, spec, size_cap, node_budget)
    while orc.level < depth_cap - 1:
        if not orc.step():
            break
    avgs = orc.averages()
    if isinstance(cls, AvgClass):
        cand = {k[:2] + (k[2],): v for k, v in avgs.items() if k[2] >= cls.min_size}
        if not cand:
            raise ValueError(f"no average of size >= {cls.min_size} under size cap {size_cap}")
        val, tree = max(cand.values(), key=lambda vt: vt[0])
        return OracleResult(val, tree, orc.level + 1, orc.counter.n, False)
    if isinstance(cls, SchClass):
        if cls.max_len < 1:
            raise ValueError("Schreier class with max_len 0 is empty")
        out: dict = {}
        max_len = None if cls.max_len == float("inf") else int(cls.max_len)
        orc._schreier_into(avgs, out, cls.min_size, max_len)
        if not out:
            raise ValueError(f"no Schreier functional of size >= {cls.min_size} under size cap {size_cap}")
        val, tree = max(out.values(), key=lambda vt: vt[0])
        return OracleResult(val, tree, orc.level + 1, orc.counter.n, False)
    raise TypeError(f"unknown node class {cls!r}")


def brute_force(x: FinVec, spec: SpaceSpec = DEFAULT_SPACE, depth_cap: int = 6,
                size_cap: int = 8, node_budget: int | None = DEFAULT_NODE_BUDGET) -> OracleResult:
    if depth_cap < 1 or size_cap < 1:
        raise ValueError("depth_cap and size_cap must be at least 1")
    return StratifiedOracle(x, spec, size_cap, node_budget).run(depth_cap)


def brute_force_norm(x: FinVec, spec: SpaceSpec = DEFAULT_SPACE, depth_cap: int = 6,
                     size_cap: int = 8, node_budget: int | None = DEFAULT_NODE_BUDGET) -> Fraction:
    return brute_force(x, spec, depth_cap, size_cap, node_budget).value


def enumerate_functionals(support_pts, spec: SpaceSpec = DEFAULT_SPACE, depth_cap: int = 2,
                          size_cap: int = 2, node_budget: int | None = 200_000) -> set:
    """Every valid tree with positive leaves on ``support_pts`` up to the caps, as explicit objects.

    Exponential; only for tiny supports. Used to cross-check the interval-compressed oracle.
    """
    counter = _Counter(node_budget)
    pts = sorted(support_pts)
    level = {Leaf(i) for i in pts}

    def span(f):
        return _span_cache.setdefault(f, _span(f))

    _span_cache: dict = {}

    def _span(f):
        if isinstance(f, Leaf):
            return f.index, f.index
        spans = [span(c) for c in f.children]
        return spans[0][0], spans[-1][1]

    for _ in range(depth_cap):
        items = sorted(level, key=lambda f: (span(f), repr(f)))
        chains = [()]
        frontier = [()]
        while frontier:
            nxt = []
            for ch in frontier:
                last = span(ch[-1])[1] if ch else 0
                if len(ch) >= size_cap:
                    continue
                for f in items:
                    if span(f)[0] > last:
                        counter.tick()
                        nxt.append(ch + (f,))
            chains.extend(nxt)
            frontier = nxt
        avgs = [Avg(n, ch) for ch in chains if ch for n in range(len(ch), size_cap + 1)]
        new = set(level) | set(avgs)
        avgs.sort(key=lambda a: (span(a), a.size, repr(a)))
        seqs = [(a,) for a in avgs]
        while seqs:
            nxt = []
            for seq in seqs:
                f = Sch(seq)
                counter.tick()
                if validate(f, spec).ok:
                    new.add(f)
                else:
                    continue
                for a in avgs:
                    if span(a)[0] > span(seq[-1])[1]:
                        nxt.append(seq + (a,))
            seqs = nxt
        level = new
    return level
