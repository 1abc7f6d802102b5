"""Integer calculus on the Picard lattice of a blown-up generic K3 surface.

A class ``(n; d; m_1, ..., m_r)`` stands for ``dH - sum m_i E_i`` on the blow-up
of a K3 with ``Pic = <H>``, ``H^2 = n``, at ``r`` general points.  Everything
here is exact Python integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import zip_longest
from typing import Iterable, Sequence


class ClassError(ValueError):
    """Malformed or incompatible system class."""


@dataclass(frozen=True)
class SystemClass:
    n: int
    d: int
    mults: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if not isinstance(self.n, int) or self.n < 2 or self.n % 2:
            raise ClassError(f"n must be an even integer >= 2, got {self.n!r}")
        if not isinstance(self.d, int) or self.d < 0:
            raise ClassError(f"degree must be a non-negative integer, got {self.d!r}")
        if any(m < 0 for m in self.mults):
            raise ClassError(f"multiplicities must be non-negative, got {self.mults}")

    @property
    def r(self) -> int:
        return len(self.mults)

    def normalized(self) -> "SystemClass":
        """Drop zero multiplicities (used only for point alignment)."""
        return SystemClass(self.n, self.d, tuple(m for m in self.mults if m))

    def sorted(self) -> "SystemClass":
        return SystemClass(self.n, self.d, tuple(sorted(self.mults, reverse=True)))

    @property
    def is_normalized(self) -> bool:
        return all(self.mults)

    def __str__(self) -> str:
        return f"L^{self.n}({self.d}; {format_mults(self.mults)})"

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "mults": list(self.mults)}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemClass":
        return cls(int(data["n"]), int(data["d"]), tuple(data.get("mults", ())))


@dataclass(frozen=True)
class DimensionPair:
    v: int
    e: int


_SHORTHAND = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_mults(text: str) -> tuple[int, ...]:
    """Parse ``"2^4,3"`` into ``(2, 2, 2, 2, 3)``; ``m^k`` repeats ``m`` k times."""
    text = text.strip()
    if not text:
        return ()
    out: list[int] = []
    for token in text.split(","):
        match = _SHORTHAND.match(token)
        if match is None:
            raise ClassError(f"cannot parse multiplicity token {token!r}")
        m, k = int(match.group(1)), match.group(2)
        out.extend([m] * (int(k) if k is not None else 1))
    return tuple(out)


def format_mults(mults: Sequence[int]) -> str:
    """Inverse of :func:`parse_mults`, collapsing runs into ``m^k``."""
    parts = []
    i = 0
    while i < len(mults):
        j = i
        while j < len(mults) and mults[j] == mults[i]:
            j += 1
        parts.append(str(mults[i]) if j - i == 1 else f"{mults[i]}^{j - i}")
        i = j
    return ",".join(parts)


def _conditions(mults: Iterable[int]) -> int:
    return sum(m * (m + 1) // 2 for m in mults)


def _check_same_n(a: SystemClass, b: SystemClass) -> None:
    if a.n != b.n:
        raise ClassError(f"classes live on different surfaces: n={a.n} vs n={b.n}")


def virtual_dim(cls: SystemClass) -> int:
    return cls.d * cls.d * cls.n // 2 + 1 - _conditions(cls.mults)


def expected_dim(cls: SystemClass) -> DimensionPair:
    v = virtual_dim(cls)
    return DimensionPair(v, max(v, -1))


def intersect(a: SystemClass, b: SystemClass) -> int:
    """Intersection of strict transforms; position i is the same point in both."""
    _check_same_n(a, b)
    return a.n * a.d * b.d - sum(x * y for x, y in zip_longest(a.mults, b.mults, fillvalue=0))


def self_intersection(cls: SystemClass) -> int:
    return intersect(cls, cls)


def add(a: SystemClass, b: SystemClass) -> SystemClass:
    _check_same_n(a, b)
    mults = tuple(x + y for x, y in zip_longest(a.mults, b.mults, fillvalue=0))
    return SystemClass(a.n, a.d + b.d, mults)


def scale(cls: SystemClass, k: int) -> SystemClass:
    if k < 0:
        raise ClassError("negative multiples are not effective classes")
    return SystemClass(cls.n, k * cls.d, tuple(k * m for m in cls.mults))


def additivity_defect(a: SystemClass, b: SystemClass) -> int:
    """``v(A+B) - v(A) - v(B) - A.B + 1``; identically zero."""
    return virtual_dim(add(a, b)) - virtual_dim(a) - virtual_dim(b) - intersect(a, b) + 1


def canonical_pairing(cls: SystemClass) -> int:
    # K of the blow-up is sum E_i, and E_i . (dH - sum m_j E_j) = m_i.
    return sum(cls.mults)
