"""Finite surrogates for spreading models of a single block sequence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.spaces import DEFAULT_SPACE, SpaceSpec
from ..core.vectors import FinVec, as_rat, combine, format_rat
from ..engine import Engine
from .selection import diagonal_value
from .sequences import BlockSeq, SequenceError

C0_LIKE = "C0_LIKE"
L1_LIKE = "L1_LIKE"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_TAU = Fraction(1, 4)


@dataclass
class SMReport:
    indices: list[int]
    coeffs: list[Fraction]
    value: Fraction
    lower: Fraction
    upper: Fraction
    alpha: Fraction
    ones_value: Fraction
    fitted_c: Fraction
    label: str

    @property
    def bounds_ok(self) -> bool:
        return self.lower <= self.value <= self.upper

    def to_dict(self) -> dict:
        return {
            "indices": self.indices,
            "coeffs": [format_rat(c) for c in self.coeffs],
            "value": format_rat(self.value),
            "lower": format_rat(self.lower),
            "upper": format_rat(self.upper),
            "alpha": format_rat(self.alpha),
            "ones_value": format_rat(self.ones_value),
            "fitted_c": format_rat(self.fitted_c),
            "bounds_ok": self.bounds_ok,
            "label": self.label,
        }


def spread_indices(seq: BlockSeq, k: int, spacing: int) -> list[int]:
    """First member, then each next index at least ``spacing`` later whose
    support starts past the previous pick."""
    if k < 1 or spacing < 1:
        raise ValueError("k and spacing must be positive")
    out = [seq.start]
    j = seq.start
    while len(out) < k:
        j = max(j + 1, out[-1] + spacing)
        while j <= seq.last and seq[j].min_supp <= seq[out[-1]].max_supp:
            j += 1
        if j > seq.last:
            raise SequenceError(f"only {len(out)} of {k} picks fit in {seq.describe()} at spacing {spacing}")
        out.append(j)
    return out


def spreading_surrogate(seq: BlockSeq, coeffs, spacing: int = 1, engine: Engine | None = None,
                        spec: SpaceSpec = DEFAULT_SPACE, tau=DEFAULT_TAU) -> SMReport:
    """Evaluate ``||sum l_i x_{j_i}||`` against ``max(max|l|, a sum|l|)`` and
    ``2 max|l| + 2 a sum|l|``.

    ``a`` is the diagonal surrogate at the deepest pick. The label uses the
    all-ones combination: L1_LIKE when ``a >= tau`` and the value reaches
    ``a k``; C0_LIKE when ``a < tau`` and the value stays within twice the
    largest picked norm; otherwise INCONCLUSIVE.
    """
    engine = engine or Engine(spec)
    lam = [as_rat(c) for c in coeffs]
    k = len(lam)
    if k == 0:
        raise ValueError("at least one coefficient is needed")
    idx = spread_indices(seq, k, spacing)
    xs = [seq[j] for j in idx]
    value = engine.norm(combine(xs, lam))
    deepest = xs[-1]
    alpha = diagonal_value(deepest, max(x.max_supp for x in xs), engine)
    m = max(abs(l) for l in lam)
    s = sum((abs(l) for l in lam), Fraction(0))
    lower = max(m, alpha * s)
    upper = 2 * m + 2 * alpha * s
    ones = value if all(l == 1 for l in lam) else engine.norm(combine(xs, [1] * k))
    top = max(engine.norm(x) for x in xs)
    tau = as_rat(tau)
    if alpha >= tau and ones >= alpha * k:
        label = L1_LIKE
    elif alpha < tau and ones <= 2 * top:
        label = C0_LIKE
    else:
        label = INCONCLUSIVE
    return SMReport(idx, lam, value, lower, upper, alpha, ones, ones / k, label)
