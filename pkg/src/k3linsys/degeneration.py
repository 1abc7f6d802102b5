"""Central-fiber bookkeeping and the homogeneous reduction to one-point systems.

The total space is never modeled; a degeneration step is recorded through its
numbers: ``b`` planes each receiving ``per_plane`` points, a twist ``k`` giving
degree ``k`` on the planes and multiplicity ``k`` at the ``b`` blown-up points
of the K3 component.  Iterating on ``L^n(d, m^(4^h 9^k9))`` ends at the single
point system ``L^n(d, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .numerics import ClassError, SystemClass, virtual_dim

SUPPORTED_PLANAR_COUNTS = (4, 9)

CONDITIONAL = "conditional-nonspecial"
AUDIT_FAILED = "audit-failed"
LEAF_VERIFIED = "leaf-verified-nonspecial"

ORDER_FOUR_FIRST = "4-then-9"
ORDER_NINE_FIRST = "9-then-4"


class PlanError(ValueError):
    """A degeneration step that cannot be carried out."""


@dataclass(frozen=True)
class HomogeneousSystem:
    n: int
    d: int
    m: int
    h: int = 0
    k9: int = 0

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ClassError(f"n must be an even integer >= 2, got {self.n}")
        if self.d < 1 or self.m < 0:
            raise ClassError("homogeneous systems need d >= 1 and m >= 0")
        if self.h < 0 or self.k9 < 0:
            raise ClassError("exponents h, k9 must be non-negative")

    @property
    def r(self) -> int:
        return 4 ** self.h * 9 ** self.k9

    @property
    def is_leaf(self) -> bool:
        return self.h == 0 and self.k9 == 0

    def as_class(self) -> SystemClass:
        return SystemClass(self.n, self.d, (self.m,) * self.r)

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "m": self.m, "h": self.h, "k9": self.k9}

    @classmethod
    def from_dict(cls, data: dict) -> "HomogeneousSystem":
        return cls(data["n"], data["d"], data["m"], data["h"], data["k9"])


@dataclass(frozen=True)
class Distribution:
    r: int
    b: int
    per_plane: int
    residual: int


@dataclass(frozen=True)
class PlanarSystem:
    degree: int
    m: int
    count: int


@dataclass(frozen=True)
class CentralFiberPlan:
    b: int
    twist: int
    per_plane_points: int
    planar_system: PlanarSystem
    s_part: HomogeneousSystem
    residual: int = 0

    @property
    def matching_budget(self) -> int:
        # sections of O(k) on each double line R_i
        return self.twist + 1

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "twist": self.twist,
            "per_plane_points": self.per_plane_points,
            "planar_system": {"degree": self.planar_system.degree, "m": self.planar_system.m,
                              "count": self.planar_system.count},
            "s_part": self.s_part.to_dict(),
            "residual": self.residual,
            "matching_budget": self.matching_budget,
        }


@dataclass(frozen=True)
class StepAudit:
    v_parent: int
    v_s_part: int
    v_planar_each: int
    planar_expected_each: int
    gluing_budget: int
    gluing_correction: int
    ledger_note: str
    ok: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CertificateNode:
    system: HomogeneousSystem
    plan: CentralFiberPlan
    audit: StepAudit

    def to_dict(self) -> dict:
        return {"system": self.system.to_dict(), "plan": self.plan.to_dict(),
                "audit": self.audit.to_dict()}


@dataclass
class CertificateTree:
    root: HomogeneousSystem
    nodes: list[CertificateNode]
    leaves: list[SystemClass]
    verdict: str
    twist_strategy: str = "k=m"
    order: str = ORDER_FOUR_FIRST
    leaf_reports: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.nodes)


def planar_virtual_dim(degree: int, m: int, count: int) -> int:
    return degree * (degree + 3) // 2 - count * m * (m + 1) // 2


def planar_expected_dim(degree: int, m: int, count: int) -> int:
    """Dimension of plane curves of given degree with ``count`` general ``m``-fold points.

    Only ``count`` in {4, 9} is supported: those homogeneous systems are never
    special, so the expected dimension is the actual one.
    """
    if count not in SUPPORTED_PLANAR_COUNTS:
        raise PlanError(f"non-speciality is only known for 4 or 9 points, got {count}")
    if degree < 0 or m < 0:
        raise PlanError("planar degree and multiplicity must be non-negative")
    return max(-1, planar_virtual_dim(degree, m, count))


def distribute_points(r: int, b: int, per_plane: int) -> Distribution:
    if b < 1 or per_plane < 1:
        raise PlanError("need at least one plane and one point per plane")
    if b * per_plane > r:
        raise PlanError(f"cannot place {per_plane} points on each of {b} planes with only {r} points")
    return Distribution(r, b, per_plane, r - b * per_plane)


def central_fiber_restrict(cls: SystemClass, twist: int, b: int,
                           per_plane: Optional[int] = None) -> tuple[int, SystemClass]:
    """Restrict ``O_X(L, k)`` twisted by the specialized points to the two kinds of component.

    The first ``b * per_plane`` points (by label) move onto the planes; the K3
    component keeps degree ``d``, gains ``b`` points of multiplicity ``twist``
    and keeps the residual points.  ``per_plane`` defaults to an even split of
    all points over the planes.
    """
    if twist < 0:
        raise PlanError("twist must be non-negative")
    if b < 1:
        raise PlanError("need at least one plane")
    if per_plane is None:
        if cls.r % b:
            raise PlanError(f"{cls.r} points do not split evenly over {b} planes")
        per_plane = cls.r // b
    dist = distribute_points(cls.r, b, per_plane)
    residual = cls.mults[b * per_plane:]
    s_part = SystemClass(cls.n, cls.d, (twist,) * dist.b + residual).normalized()
    return twist, s_part


def plan_step(system: HomogeneousSystem, twist: Optional[int] = None,
              order: str = ORDER_FOUR_FIRST) -> CentralFiberPlan:
    if system.is_leaf:
        raise PlanError(f"{system} is already a single-point system")
    if order not in (ORDER_FOUR_FIRST, ORDER_NINE_FIRST):
        raise PlanError(f"unknown reduction order {order!r}")
    use_four = system.h >= 1 if order == ORDER_FOUR_FIRST else system.k9 == 0
    if use_four:
        per_plane, child = 4, replace(system, h=system.h - 1)
    else:
        per_plane, child = 9, replace(system, k9=system.k9 - 1)
    b = child.r
    k = system.m if twist is None else twist
    dist = distribute_points(system.r, b, per_plane)
    if k < 0:
        raise PlanError("twist must be non-negative")
    # the K3 part carries the b blown-up points with multiplicity k
    child = replace(child, m=k)
    return CentralFiberPlan(b, k, per_plane, PlanarSystem(k, system.m, per_plane), child, dist.residual)


def audit_step(plan: CentralFiberPlan, parent: HomogeneousSystem) -> StepAudit:
    notes = []
    structural = True
    if plan.b * plan.per_plane_points > parent.r or plan.residual != parent.r - plan.b * plan.per_plane_points:
        structural = False
        notes.append("point budget violated")
    if plan.residual < 0 or plan.twist < 0:
        structural = False
        notes.append("negative count")
    if plan.planar_system.degree != plan.twist or plan.planar_system.m != parent.m:
        structural = False
        notes.append("planar restriction does not match twist/multiplicity")
    if plan.s_part.n != parent.n or plan.s_part.d != parent.d:
        structural = False
        notes.append("K3 part changed surface or degree")
    if plan.s_part.r != plan.b or plan.s_part.m != plan.twist:
        structural = False
        notes.append("K3 part does not carry b points of multiplicity twist")

    v_parent = virtual_dim(parent.as_class())
    s_class = SystemClass(parent.n, parent.d, (plan.twist,) * plan.b + (parent.m,) * max(plan.residual, 0))
    v_s = virtual_dim(s_class.normalized())
    v_planar = planar_virtual_dim(plan.twist, parent.m, plan.per_plane_points)
    try:
        planar_e = planar_expected_dim(plan.twist, parent.m, plan.per_plane_points)
    except PlanError as exc:
        structural = False
        planar_e = max(-1, v_planar)
        notes.append(str(exc))
    budget = plan.b * (plan.twist + 1)
    correction = v_parent - v_s - plan.b * (v_planar + 1)

    if planar_e == -1:
        notes.append("planar parts empty")
    if correction == -budget:
        notes.append("gluing correction equals minus the matching budget")
    else:
        notes.append(f"gluing correction {correction} differs from -budget {-budget}")
    ok = structural and planar_e == max(-1, v_planar)
    return StepAudit(v_parent, v_s, v_planar, planar_e, budget, correction, "; ".join(notes), ok)


def reduce_to_leaves(system: HomogeneousSystem, twist: Optional[int] = None,
                     order: str = ORDER_FOUR_FIRST) -> CertificateTree:
    nodes = []
    current = system
    while not current.is_leaf:
        plan = plan_step(current, twist, order)
        nodes.append(CertificateNode(current, plan, audit_step(plan, current)))
        current = plan.s_part
    leaf = current.as_class()
    verdict = CONDITIONAL if all(node.audit.ok for node in nodes) else AUDIT_FAILED
    return CertificateTree(system, nodes, [leaf], verdict,
                           "k=m" if twist is None else f"k={twist}", order)


LeafChecker = Callable[[SystemClass], "object"]


def theorem_deg_certify(system: HomogeneousSystem,
                        leaf_checker: Optional[LeafChecker] = None,
                        twist: Optional[int] = None,
                        order: str = ORDER_FOUR_FIRST) -> CertificateTree:
    """Reduce to single-point leaves and optionally check them with the oracle.

    ``leaf_checker`` maps a leaf class to an :class:`~k3linsys.oracle.OracleReport`
    (anything with ``certified_nonspecial`` and ``to_dict``).  It may raise
    :class:`k3linsys.oracle.NoModelError` when no concrete surface exists for
    ``n``; the certificate then stays conditional.
    """
    from .oracle import NoModelError

    tree = reduce_to_leaves(system, twist, order)
    if leaf_checker is None:
        return tree
    try:
        reports = [leaf_checker(leaf) for leaf in tree.leaves]
    except NoModelError as exc:
        tree.notes.append(str(exc))
        return tree
    tree.leaf_reports = [rep.to_dict() for rep in reports]
    if tree.verdict == CONDITIONAL and all(rep.certified_nonspecial for rep in reports):
        tree.verdict = LEAF_VERIFIED
    elif tree.verdict == CONDITIONAL:
        tree.notes.append("leaf not certified by the oracle; theorem hypothesis unverified")
    return tree


CERTIFICATE_FORMAT = "k3linsys-certificate/1"


def _twist_from_strategy(strategy: str) -> Optional[int]:
    if strategy == "k=m":
        return None
    if strategy.startswith("k="):
        return int(strategy[2:])
    raise PlanError(f"unknown twist strategy {strategy!r}")


def tree_to_document(tree: CertificateTree) -> dict:
    """Nested document: each step object holds its single child under ``child``."""
    leaf = {"system": tree.leaves[0].to_dict(), "leaf": True}
    if tree.leaf_reports:
        leaf["oracle"] = tree.leaf_reports[0]
    node: dict = leaf
    for step in reversed(tree.nodes):
        node = {**step.to_dict(), "child": node}
    return {
        "format": CERTIFICATE_FORMAT,
        "root": tree.root.to_dict(),
        "twist_strategy": tree.twist_strategy,
        "order": tree.order,
        "depth": tree.depth,
        "verdict": tree.verdict,
        "notes": list(tree.notes),
        "tree": node,
    }


def verify_certificate(doc: dict) -> list[str]:
    """Re-derive every integer of a certificate document; returns the problems found."""
    from .oracle.interpolation import verify_report

    problems: list[str] = []
    if doc.get("format") != CERTIFICATE_FORMAT:
        return [f"unknown certificate format {doc.get('format')!r}"]
    try:
        root = HomogeneousSystem.from_dict(doc["root"])
        twist = _twist_from_strategy(doc["twist_strategy"])
        expected = reduce_to_leaves(root, twist, doc["order"])
    except (KeyError, TypeError, ValueError) as exc:
        return [f"certificate does not rebuild: {exc}"]

    if doc.get("depth") != expected.depth:
        problems.append(f"depth {doc.get('depth')} != {expected.depth}")
    node = doc["tree"]
    for i, step in enumerate(expected.nodes):
        if node.get("leaf"):
            problems.append(f"tree ends after {i} steps, expected {expected.depth}")
            return problems
        want = step.to_dict()
        for key in ("system", "plan", "audit"):
            if node.get(key) != want[key]:
                problems.append(f"step {i}: {key} does not recompute")
        node = node.get("child", {})
    if not node.get("leaf"):
        problems.append("tree is deeper than h + k9")
        return problems
    leaf = expected.leaves[0]
    if node.get("system") != leaf.to_dict():
        problems.append("leaf system does not recompute")

    verdict = doc.get("verdict")
    if verdict == LEAF_VERIFIED:
        report = node.get("oracle")
        if expected.verdict != CONDITIONAL:
            problems.append("leaf-verified verdict on a failed audit")
        if report is None:
            problems.append("leaf-verified verdict without an oracle report")
        else:
            problems += [f"leaf report: {p}" for p in verify_report(report)]
            if report.get("system") != leaf.to_dict():
                problems.append("oracle report is for a different system")
            if not report.get("certified_nonspecial"):
                problems.append("leaf-verified verdict but the leaf is not certified")
    elif verdict != expected.verdict:
        problems.append(f"verdict {verdict!r} != recomputed {expected.verdict!r}")
    return problems
