"""Norms and constrained suprema over the norming set, with witnesses."""

from __future__ import annotations

import json
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction

from ..core.spaces import ANY, DEFAULT_SPACE, SpaceSpec
from ..core.textio import format_tree
from ..core.trees import Tree, evaluate, flip_signs, in_class, validate
from ..core.vectors import FinVec, format_rat
from .dp import IntervalSolver, ResourceLimit, SolveStats
from .oracle import (
    DEFAULT_NODE_BUDGET,
    OracleResult,
    StratifiedOracle,
    brute_force,
    brute_force_best,
    brute_force_norm,
    enumerate_functionals,
)


@dataclass
class NormResult:
    value: Fraction
    witness: Tree
    stats: SolveStats = field(default_factory=SolveStats)

    def record(self, timing: bool = False, **extra) -> dict:
        rec = {"value": format_rat(self.value), "witness": format_tree(self.witness)}
        rec.update(extra)
        rec["stats"] = self.stats.to_dict(timing)
        return rec

    def to_json(self, timing: bool = False, **extra) -> str:
        return json.dumps(self.record(timing, **extra), sort_keys=False)


def _solve(x, spec, cls, size_cap, budget) -> NormResult:
    t0 = time.perf_counter()
    solver = IntervalSolver(x, spec, size_cap=size_cap, budget=budget)
    value, witness = solver.best(cls)
    solver.stats.wall_time = time.perf_counter() - t0
    return NormResult(value, witness, solver.stats)


def norm(x: FinVec, spec: SpaceSpec = DEFAULT_SPACE, size_cap: int | None = None,
         budget: int | None = None) -> NormResult:
    """``||x|| = sup f(x)`` over the norming set, with an attaining functional."""
    return _solve(x, spec, ANY, size_cap, budget)


def best_value(x: FinVec, spec: SpaceSpec = DEFAULT_SPACE, cls=ANY, size_cap: int | None = None,
               budget: int | None = None) -> NormResult:
    """Supremum of ``|f(x)|`` over the sub-family ``cls``."""
    if not x:
        raise ValueError("best_value needs a nonempty vector")
    return _solve(x, spec, cls, size_cap, budget)


class Engine:
    """Caches one solver per vector so repeated queries share tables.

    Values are independent of cache state; only the stats counters of the
    solvers depend on query history, and they are not reported from here.
    With ``certify`` every new answer's witness is validated, checked against
    the class and re-evaluated; ``certified`` and ``failures`` count the results.
    """

    def __init__(self, spec: SpaceSpec = DEFAULT_SPACE, size_cap: int | None = None,
                 budget: int | None = None, max_cached: int = 512, certify: bool = False):
        self.spec = spec
        self.certify = certify
        self.certified = 0
        self.failures: list[tuple[FinVec, str]] = []
        self.size_cap = size_cap
        self.budget = budget
        self.max_cached = max_cached
        self._solvers: OrderedDict[FinVec, IntervalSolver] = OrderedDict()
        self._answers: dict = {}

    def _solver(self, x: FinVec) -> IntervalSolver:
        key = x.abs()
        s = self._solvers.get(key)
        if s is None:
            s = IntervalSolver(key, self.spec, self.size_cap, self.budget)
            self._solvers[key] = s
            if len(self._solvers) > self.max_cached:
                self._solvers.popitem(last=False)
        else:
            self._solvers.move_to_end(key)
        return s

    def best(self, x: FinVec, cls=ANY) -> tuple[Fraction, Tree]:
        """(value, witness); the witness carries the signs of ``x``."""
        key = (x, cls)
        hit = self._answers.get(key)
        if hit is None:
            if not x and cls is not ANY:
                raise ValueError("constrained suprema need a nonempty vector")
            if not x:
                hit = IntervalSolver(x, self.spec).best(ANY)
            else:
                value, w = self._solver(x).best(cls)
                hit = (value, _resign(w, x))
            if self.certify:
                self._certify(x, cls, *hit)
            self._answers[key] = hit
        return hit

    def _certify(self, x, cls, value, w) -> None:
        rep = validate(w, self.spec)
        if rep.ok and in_class(w, cls) and evaluate(w, x, self.spec) == value:
            self.certified += 1
        else:
            self.failures.append((x, cls.tag()))

    def norm(self, x: FinVec) -> Fraction:
        return self.best(x)[0]

    def value(self, x: FinVec, cls) -> Fraction:
        return self.best(x, cls)[0]


def _resign(f, x):
    neg = [i for i, c in x.entries if c < 0]
    return flip_signs(f, neg) if neg else f


__all__ = [
    "DEFAULT_NODE_BUDGET",
    "Engine",
    "IntervalSolver",
    "NormResult",
    "OracleResult",
    "ResourceLimit",
    "SolveStats",
    "StratifiedOracle",
    "best_value",
    "brute_force",
    "brute_force_best",
    "brute_force_norm",
    "enumerate_functionals",
    "norm",
]
