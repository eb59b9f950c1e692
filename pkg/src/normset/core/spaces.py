"""Rule parameters of the norming set and constraint descriptors for sub-suprema."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .vectors import as_rat, format_rat

INF = float("inf")


@dataclass(frozen=True)
class SpaceSpec:
    """Schreier coefficient and constraint toggles.

    ``SpaceSpec()`` is the 1/2-space with admissibility and very fast growth on;
    the flags only exist to cross-check variants.
    """

    theta: Fraction = Fraction(1, 2)
    enforce_admissible: bool = True
    enforce_vfg: bool = True

    def __post_init__(self):
        theta = as_rat(self.theta)
        object.__setattr__(self, "theta", theta)
        if not (0 < theta <= 1):
            raise ValueError(f"theta must lie in (0, 1], got {theta}")

    def to_dict(self) -> dict:
        return {
            "theta": format_rat(self.theta),
            "enforce_admissible": self.enforce_admissible,
            "enforce_vfg": self.enforce_vfg,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpaceSpec":
        unknown = set(d) - {"theta", "enforce_admissible", "enforce_vfg"}
        if unknown:
            raise ValueError(f"unknown space keys: {sorted(unknown)}")
        flags = {k: d.get(k, True) for k in ("enforce_admissible", "enforce_vfg")}
        for k, v in flags.items():
            if not isinstance(v, bool):
                raise ValueError(f"{k} must be true or false, got {v!r}")
        return cls(theta=as_rat(d.get("theta", Fraction(1, 2))), **flags)


DEFAULT_SPACE = SpaceSpec()


@dataclass(frozen=True)
class AnyClass:
    def tag(self) -> str:
        return "any"


@dataclass(frozen=True)
class AvgClass:
    """alpha-averages of declared size at least ``min_size``."""

    min_size: int = 1

    def __post_init__(self):
        if self.min_size < 1:
            raise ValueError("min_size must be a positive integer")

    def tag(self) -> str:
        return f"avg(s>={self.min_size})"


@dataclass(frozen=True)
class SchClass:
    """Schreier functionals with size at least ``min_size`` and length at most ``max_len``."""

    min_size: int = 1
    max_len: float | int = INF

    def __post_init__(self):
        if self.min_size < 1:
            raise ValueError("min_size must be a positive integer")
        if self.max_len != INF and (self.max_len < 0 or int(self.max_len) != self.max_len):
            raise ValueError("max_len must be a non-negative integer or infinity")

    def tag(self) -> str:
        n = "inf" if self.max_len == INF else str(self.max_len)
        return f"sch(s>={self.min_size},len<={n})"


ANY = AnyClass()
NodeClass = AnyClass | AvgClass | SchClass
