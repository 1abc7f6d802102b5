"""Conjectural classification of special systems on a generic K3 surface.

:func:`classify` predicts the dimension of ``L^n(d; m_1..m_r)`` together with a
fixed/mobile decomposition; :func:`segre_audit` replays the pairwise argument
that any two fixed components must meet exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .numerics import (
    ClassError,
    SystemClass,
    add,
    additivity_defect,
    expected_dim,
    intersect,
    scale,
    self_intersection,
    virtual_dim,
)

SPECIAL = "special-i"
FIXED_A = "fixed-iii-a"
FIXED_B = "fixed-iii-b"
FIXED_C = "fixed-iii-c"
REDUCIBLE = "reducible-iv"
PLAIN = "plain-nonspecial"
EMPTY = "empty"

CASE_TAGS = (SPECIAL, FIXED_A, FIXED_B, FIXED_C, REDUCIBLE, PLAIN, EMPTY)


@dataclass(frozen=True)
class CurveCatalogEntry:
    name: str
    cls: SystemClass
    role: str


CATALOG: tuple[CurveCatalogEntry, ...] = (
    CurveCatalogEntry("L^2(1,1^2)", SystemClass(2, 1, (1, 1)), "special-family-generator"),
    CurveCatalogEntry("L^4(1,2)", SystemClass(4, 1, (2,)), "special-family-generator"),
    CurveCatalogEntry("L^4(1,1^3)", SystemClass(4, 1, (1, 1, 1)), "double-curve"),
    CurveCatalogEntry("L^6(1,2,1)", SystemClass(6, 1, (2, 1)), "double-curve"),
    CurveCatalogEntry("L^10(1,3)", SystemClass(10, 1, (3,)), "double-curve"),
    CurveCatalogEntry("L^2(1,1)", SystemClass(2, 1, (1,)), "pencil"),
    CurveCatalogEntry("L^2(1,1^2)", SystemClass(2, 1, (1, 1)), "fixed-plus-pencil-member"),
)

DOUBLE_CURVES = tuple(e.cls for e in CATALOG if e.role == "double-curve")


@dataclass(frozen=True)
class Verdict:
    system: SystemClass
    special: bool
    predicted_dim: int
    case_tag: str
    fixed_part: tuple[tuple[SystemClass, int], ...]
    mobile_part: SystemClass
    notes: str = ""

    def reconstruct(self) -> SystemClass:
        total = self.mobile_part
        for cls, mu in self.fixed_part:
            total = add(total, scale(cls, mu))
        return total

    def to_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "special": self.special,
            "predicted_dim": self.predicted_dim,
            "case_tag": self.case_tag,
            "fixed_part": [{"class": c.to_dict(), "multiplicity": mu} for c, mu in self.fixed_part],
            "mobile_part": self.mobile_part.to_dict(),
            "notes": self.notes,
        }


def _multiset(cls: SystemClass) -> tuple[int, ...]:
    return tuple(sorted(cls.mults, reverse=True))


def _indicator(n: int, d: int, r: int, positions: Sequence[int], value: int = 1) -> SystemClass:
    mults = [0] * r
    for i in positions:
        mults[i] = value
    return SystemClass(n, d, tuple(mults))


def _zero(cls: SystemClass) -> SystemClass:
    return SystemClass(cls.n, 0, (0,) * cls.r)


def is_conjecturally_special(cls: SystemClass) -> bool:
    """True exactly for ``L^4(d, 2d)`` and ``L^2(d, d^2)`` with ``d >= 2``."""
    d, ms = cls.d, _multiset(cls)
    if d < 2:
        return False
    if cls.n == 4:
        return ms == (2 * d,)
    if cls.n == 2:
        return ms == (d, d)
    return False


def classify(cls: SystemClass) -> Verdict:
    if cls.d == 0:
        raise ClassError("degree-0 classes are the trivial system and are not classified")
    if not cls.is_normalized:
        raise ClassError(f"classify expects a normalized class, got {cls}")

    n, d, r = cls.n, cls.d, cls.r
    ms = _multiset(cls)
    dims = expected_dim(cls)

    if is_conjecturally_special(cls):
        positions = range(r)
        generator = _indicator(n, 1, r, positions, 2 if n == 4 else 1)
        family = "L^4(d,2d)" if n == 4 else "L^2(d,d^2)"
        return Verdict(
            cls, True, 0, SPECIAL, ((generator, d),), _zero(cls),
            f"family {family}; conjecturally {d} times the fixed curve, v={dims.v}",
        )

    if n == 2 and r == 2 and ms == (d, d - 1) and d >= 2:
        m = d - 1
        big = cls.mults.index(d)
        curve = _indicator(n, 1, r, range(r))
        pencil = _indicator(n, 1, r, [big])
        return Verdict(
            cls, False, 1, FIXED_A, ((curve, m),), pencil,
            f"m={m}; {m}*L^2(1,1^2) + L^2(1,1)",
        )

    if d == 2:
        for curve in DOUBLE_CURVES:
            if curve.n == n and _multiset(scale(curve, 2)) == ms:
                half = SystemClass(n, 1, tuple(m // 2 for m in cls.mults))
                return Verdict(
                    cls, False, 0, FIXED_B, ((half, 2),), _zero(cls),
                    f"twice the double curve L^{n}(1;{','.join(map(str, _multiset(half)))})",
                )

    if n == 2 and d == 2 and ms == (2,):
        return Verdict(cls, False, 2, REDUCIBLE, (), cls,
                       "general element reducible: sum of two members of L^2(1,1)")

    if dims.e == -1:
        return Verdict(cls, False, -1, EMPTY, (), cls, "expected empty")

    if dims.v == 0:
        return Verdict(cls, False, 0, FIXED_C, ((cls, 1),), _zero(cls),
                       "rigid; conjecturally L = C when irreducible")

    return Verdict(cls, False, dims.e, PLAIN, (), cls, "")


def predicted_general_multiplicities(cls: SystemClass) -> tuple[int, ...]:
    """Multiplicities of the general member; the conjecture says no jumping."""
    if classify(cls).predicted_dim < 0:
        raise ClassError(f"{cls} is predicted empty")
    return cls.mults


@dataclass(frozen=True)
class PairRecord:
    a: SystemClass
    b: SystemClass
    v_a: int
    v_b: int
    ab: int
    v_sum: int
    allowed_unit: bool
    violation: bool

    @property
    def forces_unit(self) -> bool:
        # v(A) = v(B) = v(A+B) = 0 together with additivity pins A.B = 1.
        return self.v_a == 0 and self.v_b == 0 and self.v_sum == 0

    def to_dict(self) -> dict:
        return {
            "a": self.a.to_dict(), "b": self.b.to_dict(),
            "v_a": self.v_a, "v_b": self.v_b, "ab": self.ab, "v_sum": self.v_sum,
            "allowed_unit": self.allowed_unit, "violation": self.violation,
        }


@dataclass
class AuditReport:
    pairs: list[PairRecord] = field(default_factory=list)
    violations: list[tuple[int, int]] = field(default_factory=list)
    allowed_unit_pairs: list[tuple[int, int]] = field(default_factory=list)
    self_intersection_violations: list[int] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations and not self.self_intersection_violations

    def to_dict(self) -> dict:
        return {
            "pairs": [p.to_dict() for p in self.pairs],
            "violations": [list(p) for p in self.violations],
            "allowed_unit_pairs": [list(p) for p in self.allowed_unit_pairs],
            "self_intersection_violations": self.self_intersection_violations,
            "clean": self.clean,
        }


def _is_unit_configuration(a: SystemClass, b: SystemClass) -> bool:
    def shape(c: SystemClass) -> tuple[int, ...]:
        return (c.n, c.d) + _multiset(c.normalized())

    conic, pencil = (2, 1, 1, 1), (2, 1, 1)
    if intersect(a, b) != 1:
        return False
    return {shape(a), shape(b)} == {conic, pencil}


def segre_audit(parts: Sequence[tuple[SystemClass, int]], mobile: SystemClass | None = None) -> AuditReport:
    """Check every pair of hypothesized fixed components for ``A.B == 1``.

    Under the assumption that reduced non-empty systems are non-special, fixed
    components satisfy ``v(A) = v(B) = v(A+B) = 0``, so ``A.B = 1``.  Pairs that
    contradict this are reported, except the one configuration where it is
    allowed to fail: the conic ``L^2(1,1^2)`` against a member of ``L^2(1,1)``.
    """
    report = AuditReport()
    classes = [c for c, _ in parts]
    for c, mu in parts:
        if mu < 1:
            raise ClassError(f"fixed-part multiplicity must be >= 1, got {mu}")
    ns = {c.n for c in classes} | ({mobile.n} if mobile is not None else set())
    if len(ns) > 1:
        raise ClassError(f"audit classes live on different surfaces: {sorted(ns)}")

    for idx, (c, mu) in enumerate(parts):
        if mu >= 2 and self_intersection(c) > 1:
            report.self_intersection_violations.append(idx)

    for i, j in combinations(range(len(classes)), 2):
        a, b = classes[i], classes[j]
        v_a, v_b, ab = virtual_dim(a), virtual_dim(b), intersect(a, b)
        v_sum = virtual_dim(add(a, b))
        assert additivity_defect(a, b) == 0
        allowed = _is_unit_configuration(a, b)
        violation = not allowed and (v_a != 0 or v_b != 0 or ab != 1)
        report.pairs.append(PairRecord(a, b, v_a, v_b, ab, v_sum, allowed, violation))
        if allowed:
            report.allowed_unit_pairs.append((i, j))
        if violation:
            report.violations.append((i, j))
    return report
