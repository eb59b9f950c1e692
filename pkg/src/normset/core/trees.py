"""Functional trees: explicit elements of the norming set.

A tree is a ``Leaf`` (a signed unit vector), an ``Avg`` node (an alpha-average
``(1/n)(f_1 + ... + f_d)`` with declared size ``n``) or a ``Sch`` node (a
Schreier functional ``theta * (a_1 + ... + a_k)`` over alpha-averages).
``EMPTY`` is the zero functional, returned when restriction prunes every leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .spaces import DEFAULT_SPACE, SpaceSpec
from .vectors import FinVec

AVG_ARITY = "AVG_ARITY"
NOT_SUCCESSIVE = "NOT_SUCCESSIVE"
ADMISSIBILITY = "ADMISSIBILITY"
VFG_SIZE = "VFG_SIZE"
VFG_SUPPORT = "VFG_SUPPORT"
SCH_CHILD_NOT_AVG = "SCH_CHILD_NOT_AVG"
# not in the membership rules proper, but trees carrying them denote nothing
EMPTY_NODE = "EMPTY_NODE"
BAD_LEAF = "BAD_LEAF"

STRUCTURAL = frozenset({AVG_ARITY, NOT_SUCCESSIVE, SCH_CHILD_NOT_AVG, EMPTY_NODE, BAD_LEAF})


@dataclass(frozen=True)
class Leaf:
    index: int
    sign: int = 1


@dataclass(frozen=True)
class Avg:
    size: int
    children: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Sch:
    children: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


class _Empty:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()

Tree = Union[Leaf, Avg, Sch, _Empty]


class InvalidTree(ValueError):
    def __init__(self, tag: str, path: tuple, detail: str):
        super().__init__(f"{tag} at {list(path)}: {detail}")
        self.tag = tag
        self.path = path
        self.detail = detail


def support(f: Tree) -> tuple[int, ...]:
    """Sorted leaf indices of ``f``."""
    out: list[int] = []
    _collect(f, out)
    return tuple(sorted(out))


def _collect(f, out):
    if isinstance(f, Leaf):
        out.append(f.index)
    elif isinstance(f, (Avg, Sch)):
        for c in f.children:
            _collect(c, out)


def min_supp(f: Tree):
    s = support(f)
    return s[0] if s else float("inf")


def max_supp(f: Tree) -> int:
    s = support(f)
    return s[-1] if s else 0


def size(f: Tree) -> int:
    """Declared size: n for an average, size of the first average for a Schreier node."""
    if isinstance(f, Avg):
        return f.size
    if isinstance(f, Sch):
        return f.children[0].size
    raise TypeError(f"size is defined for averages and Schreier functionals, not {f!r}")


def length(f: Sch) -> int:
    return len(f.children)


def in_class(f: Tree, cls) -> bool:
    """Shape test only; combine with ``validate`` for membership in the norming set."""
    from .spaces import AvgClass, SchClass

    if isinstance(cls, AvgClass):
        return isinstance(f, Avg) and f.size >= cls.min_size
    if isinstance(cls, SchClass):
        return isinstance(f, Sch) and size(f) >= cls.min_size and length(f) <= cls.max_len
    return True


def node_count(f: Tree) -> int:
    if isinstance(f, (Avg, Sch)):
        return 1 + sum(node_count(c) for c in f.children)
    return 0 if f is EMPTY else 1


def stratum(f: Tree) -> int:
    """Least m with f in W^m of the inductive construction.

    Leaves are W^0; an average of W^m lies in W^{m+1}; a Schreier functional
    over averages of W^m lies in W^{m+1}.
    """
    if isinstance(f, Leaf) or f is EMPTY:
        return 0
    if isinstance(f, Avg):
        return 1 + max(stratum(c) for c in f.children)
    return 1 + max(stratum(g) for a in f.children for g in a.children)


def coefficients(f: Tree, spec: SpaceSpec = DEFAULT_SPACE) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    _coeffs(f, Fraction(1), spec.theta, out)
    return out


def _coeffs(f, scale, theta, out):
    if isinstance(f, Leaf):
        out[f.index] = out.get(f.index, Fraction(0)) + scale * f.sign
    elif isinstance(f, Avg):
        s = scale / f.size
        for c in f.children:
            _coeffs(c, s, theta, out)
    elif isinstance(f, Sch):
        s = scale * theta
        for c in f.children:
            _coeffs(c, s, theta, out)


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def tags(self) -> list[str]:
        return [v[0] for v in self.violations]

    def __str__(self) -> str:
        if self.ok:
            return "PASS"
        return "; ".join(f"{t} at {list(p)}: {d}" for t, p, d in self.violations)


def validate(f: Tree, spec: SpaceSpec = DEFAULT_SPACE) -> ValidationReport:
    """Check every membership rule; PASS certifies ``f`` lies in the norming set."""
    report = ValidationReport()
    if f is not EMPTY:
        _check(f, (), spec, report.violations, structural_only=False)
    return report


def check_structure(f: Tree) -> None:
    """Raise InvalidTree on the first structural defect (arity, order, node kinds)."""
    errs: list = []
    if f is not EMPTY:
        _check(f, (), DEFAULT_SPACE, errs, structural_only=True)
    if errs:
        raise InvalidTree(*errs[0])


def _check(f, path, spec, errs, structural_only) -> tuple[int, int] | None:
    # returns (min supp, max supp) of the subtree; None for an empty subtree
    if isinstance(f, Leaf):
        if not isinstance(f.index, int) or f.index < 1 or f.sign not in (1, -1):
            errs.append((BAD_LEAF, path, f"leaf {f!r} needs a positive index and sign +-1"))
        return (f.index, f.index)
    if f is EMPTY:
        errs.append((EMPTY_NODE, path, "empty functional used as a child"))
        return None
    if isinstance(f, Avg):
        kids = f.children
        if not kids:
            errs.append((EMPTY_NODE, path, "average without children"))
            return None
        if not isinstance(f.size, int) or f.size < 1:
            errs.append((AVG_ARITY, path, f"declared size {f.size!r} is not a positive integer"))
        elif len(kids) > f.size:
            errs.append((AVG_ARITY, path, f"{len(kids)} children exceed declared size {f.size}"))
        ranges = [_check(c, path + (k,), spec, errs, structural_only) for k, c in enumerate(kids)]
        return _successive(ranges, path, errs)
    if isinstance(f, Sch):
        kids = f.children
        if not kids:
            errs.append((EMPTY_NODE, path, "Schreier node without children"))
            return None
        ranges = [_check(c, path + (k,), spec, errs, structural_only) for k, c in enumerate(kids)]
        for k, c in enumerate(kids):
            if not isinstance(c, Avg):
                errs.append((SCH_CHILD_NOT_AVG, path + (k,), f"child {type(c).__name__} is not an average"))
        span = _successive(ranges, path, errs)
        if structural_only:
            return span
        if spec.enforce_admissible and ranges[0] is not None and len(kids) > ranges[0][0]:
            errs.append((ADMISSIBILITY, path,
                         f"length {len(kids)} exceeds min supp {ranges[0][0]} of the first average"))
        if spec.enforce_vfg:
            for k in range(1, len(kids)):
                a, b = kids[k - 1], kids[k]
                if not (isinstance(a, Avg) and isinstance(b, Avg)):
                    continue
                if b.size <= a.size:
                    errs.append((VFG_SIZE, path + (k,), f"size {b.size} does not exceed previous size {a.size}"))
                prev = ranges[k - 1]
                if prev is not None and b.size <= prev[1]:
                    errs.append((VFG_SUPPORT, path + (k,),
                                 f"size {b.size} does not exceed max supp {prev[1]} of the previous average"))
        return span
    errs.append((BAD_LEAF, path, f"unknown node {f!r}"))
    return None


def _successive(ranges, path, errs):
    live = [(k, r) for k, r in enumerate(ranges) if r is not None]
    for (k0, r0), (k1, r1) in zip(live, live[1:]):
        if not r0[1] < r1[0]:
            errs.append((NOT_SUCCESSIVE, path + (k1,),
                         f"child {k1} starts at {r1[0]}, not after max supp {r0[1]} of child {k0}"))
    if not live:
        return None
    return (min(r[0] for _, r in live), max(r[1] for _, r in live))


def evaluate(f: Tree, x: FinVec, spec: SpaceSpec = DEFAULT_SPACE) -> Fraction:
    """``f(x)``, the inner product of the functional with ``x``."""
    check_structure(f)
    return _value(f, dict(x.entries), spec.theta)


def _value(f, xd, theta) -> Fraction:
    if isinstance(f, Leaf):
        c = xd.get(f.index)
        return c * f.sign if c is not None else Fraction(0)
    if isinstance(f, Avg):
        return sum((_value(c, xd, theta) for c in f.children), Fraction(0)) / f.size
    if isinstance(f, Sch):
        return theta * sum((_value(c, xd, theta) for c in f.children), Fraction(0))
    return Fraction(0)


def restrict(f: Tree, indices: Iterable[int]) -> Tree:
    """The restriction ``E f``: prune leaves outside ``indices``, drop emptied children."""
    return _restrict(f, frozenset(indices))


def _restrict(f, keep):
    if isinstance(f, Leaf):
        return f if f.index in keep else EMPTY
    if isinstance(f, (Avg, Sch)):
        kids = tuple(g for g in (_restrict(c, keep) for c in f.children) if g is not EMPTY)
        if not kids:
            return EMPTY
        return Avg(f.size, kids) if isinstance(f, Avg) else Sch(kids)
    return EMPTY


def flip_signs(f: Tree, indices: Iterable[int]) -> Tree:
    flips = frozenset(indices)

    def go(g):
        if isinstance(g, Leaf):
            return Leaf(g.index, -g.sign) if g.index in flips else g
        if isinstance(g, Avg):
            return Avg(g.size, tuple(go(c) for c in g.children))
        if isinstance(g, Sch):
            return Sch(tuple(go(c) for c in g.children))
        return g

    return go(f)
