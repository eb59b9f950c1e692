"""Finitely supported vectors over the unit vector basis with exact rational entries."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; pass a Fraction")
    # gmpy2.mpq and other rationals exposing numerator/denominator
    try:
        return Fraction(int(value.numerator), int(value.denominator))
    except AttributeError:
        raise TypeError(f"cannot interpret {value!r} as a rational") from None


def format_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class FinVec:
    """Immutable sparse vector ``sum_i c_i e_i``.

    Entries are kept sorted by index, with zeros removed, so equal vectors
    compare and hash equal.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[int, Fraction] = {}
        for i, c in entries:
            if not isinstance(i, int) or isinstance(i, bool) or i < 1:
                raise ValueError(f"basis indices must be positive integers, got {i!r}")
            acc[i] = acc.get(i, Fraction(0)) + as_rat(c)
        self._entries = tuple((i, acc[i]) for i in sorted(acc) if acc[i] != 0)
        self._hash = None

    @classmethod
    def basis(cls, i: int) -> "FinVec":
        return cls({i: 1})

    @classmethod
    def flat(cls, indices: Iterable[int], coeff=1) -> "FinVec":
        return cls((i, coeff) for i in indices)

    @property
    def entries(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __getitem__(self, i: int) -> Fraction:
        for j, c in self._entries:
            if j == i:
                return c
            if j > i:
                break
        return Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinVec) and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._entries)
        return self._hash

    def __repr__(self) -> str:
        body = " ".join(f"{i}:{format_rat(c)}" for i, c in self._entries)
        return f"FinVec({body!r})"

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._entries)

    @property
    def min_supp(self) -> float | int:
        # min of the empty set is +infinity
        return self._entries[0][0] if self._entries else float("inf")

    @property
    def max_supp(self) -> int:
        # max of the empty set is 0
        return self._entries[-1][0] if self._entries else 0

    @property
    def range(self) -> tuple[int, int] | None:
        """Smallest interval ``(lo, hi)`` containing the support, or None when empty."""
        if not self._entries:
            return None
        return self._entries[0][0], self._entries[-1][0]

    def __add__(self, other: "FinVec") -> "FinVec":
        return FinVec(self._entries + other._entries)

    def __sub__(self, other: "FinVec") -> "FinVec":
        return self + (-other)

    def __neg__(self) -> "FinVec":
        return self.scale(-1)

    def scale(self, a) -> "FinVec":
        a = as_rat(a)
        return FinVec((i, a * c) for i, c in self._entries)

    def __mul__(self, a) -> "FinVec":
        return self.scale(a)

    __rmul__ = __mul__

    def abs(self) -> "FinVec":
        return FinVec((i, abs(c)) for i, c in self._entries)

    def restrict(self, indices: Iterable[int]) -> "FinVec":
        keep = set(indices)
        return FinVec((i, c) for i, c in self._entries if i in keep)

    def flip(self, indices: Iterable[int]) -> "FinVec":
        """Flip the sign of the listed coordinates."""
        flips = set(indices)
        return FinVec((i, -c if i in flips else c) for i, c in self._entries)

    def sup_norm(self) -> Fraction:
        return max((abs(c) for _, c in self._entries), default=Fraction(0))

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for _, c in self._entries), Fraction(0))

    def precedes(self, other: "FinVec") -> bool:
        """``self < other`` in the block order: max supp(self) < min supp(other)."""
        return self.max_supp < other.min_supp


def combine(vectors: list[FinVec], coeffs: list) -> FinVec:
    """Exact linear combination ``sum_k coeffs[k] * vectors[k]``."""
    if len(vectors) != len(coeffs):
        raise ValueError(
            f"combine needs equal lengths, got {len(vectors)} vectors and {len(coeffs)} coefficients"
        )
    out: list[tuple[int, Fraction]] = []
    for v, a in zip(vectors, coeffs):
        a = as_rat(a)
        if a:
            out.extend((i, a * c) for i, c in v)
    return FinVec(out)
