"""Fat-point interpolation on a concrete model and the speciality test.

Imposing multiplicity ``m`` at a smooth point means killing every coefficient
of total degree ``< m`` of a section expanded in local parameters.  Rank is
computed on the ambient monomial columns; ideal multiples substitute to the
zero series, so this equals the rank on the section space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..numerics import ClassError, SystemClass, expected_dim
from . import series
from .field import RankCapError, derive_seed, rank_mod_p
from .models import (
    SECOND_PRIME,
    K3ModelSpec,
    SamplingError,
    SurfacePoint,
    model_basis_dim,
)

DEFAULT_TRIALS = 2
DEFAULT_CAP = 50_000


class ChartError(RuntimeError):
    """The point admits no chart (all dependent-coordinate partials vanish)."""


@dataclass(frozen=True)
class LocalChart:
    point: SurfacePoint
    params: tuple[int, int]
    dependent: int
    order: int
    coordinates: tuple[np.ndarray, np.ndarray, np.ndarray] = field(compare=False, repr=False)
    basis: tuple[tuple[int, int, int], ...] = field(compare=False, repr=False)
    equation: dict = field(compare=False, repr=False)

    @property
    def series(self) -> np.ndarray:
        """Power series of the dependent affine coordinate."""
        return self.coordinates[self.dependent]


def local_chart(model: K3ModelSpec, point: SurfacePoint, order: int, d: int = 1,
                method: str = "newton") -> LocalChart:
    """Chart at ``point`` to total order ``order``; ``d`` fixes the section basis carried along."""
    p = model.prime
    pic = model.affine_picture(point, d)
    if not pic.dependent_candidates:
        raise ChartError(f"no dependent coordinate with nonzero partial at {point}")
    dep = pic.dependent_candidates[0]
    params = tuple(k for k in range(3) if k != dep)
    args = [series.constant(0, order)] * 3
    for which, k in enumerate(params):
        args[k] = series.shifted_param(pic.base[k], which, order, p)
    lift = series.newton_lift if method == "newton" else series.lift_order_by_order
    z = lift(pic.equation, args, dep, pic.base[dep], order, p)
    args[dep] = z
    residual = series.compose(pic.equation, args, p)
    if residual.any():
        raise ChartError("chart residual does not vanish to the truncation order")
    return LocalChart(point, params, dep, order, tuple(args), tuple(pic.basis), pic.equation)


def jet_indices(m: int) -> list[tuple[int, int]]:
    return [(i, t - i) for t in range(m) for i in range(t, -1, -1)]


def jet_rows(model: K3ModelSpec, d: int, chart: LocalChart, m: int) -> np.ndarray:
    """``m(m+1)/2`` rows: coefficients of ``u^i v^j`` (``i+j < m``) of each basis section."""
    if m < 1:
        return np.zeros((0, len(chart.basis)), dtype=np.int64)
    if chart.order < m - 1:
        raise ChartError(f"chart order {chart.order} too small for multiplicity {m}")
    p = model.prime
    basis = model.affine_picture(chart.point, d).basis
    idx = jet_indices(m)
    rows = np.zeros((len(idx), len(basis)), dtype=np.int64)
    pw = [series.powers(c, d, p) for c in chart.coordinates]
    for col, exps in enumerate(basis):
        term = series.constant(1, chart.order)
        for k, e in enumerate(exps):
            if e:
                term = series.mul(term, pw[k][e], p)
        for row, (i, j) in enumerate(idx):
            rows[row, col] = term[i, j]
    return rows


def assemble(model: K3ModelSpec, d: int, points: Sequence[SurfacePoint], mults: Sequence[int],
             charts: Optional[Sequence[LocalChart]] = None) -> np.ndarray:
    if len(set(points)) != len(points):
        raise ValueError("interpolation points must be distinct")
    if any(m < 1 for m in mults):
        raise ValueError("all multiplicities must be >= 1")
    ncols = len(model.ambient_monomials(d))
    if not points:
        return np.zeros((0, ncols), dtype=np.int64)
    if charts is None:
        charts = [local_chart(model, pt, max(mults), d) for pt in points]
    blocks = [jet_rows(model, d, ch, m) for ch, m in zip(charts, mults)]
    return np.vstack(blocks)


def assemble_and_rank(model: K3ModelSpec, d: int, points: Sequence[SurfacePoint], mults: Sequence[int],
                      cap: int = DEFAULT_CAP, charts: Optional[Sequence[LocalChart]] = None
                      ) -> tuple[np.ndarray, int]:
    matrix = assemble(model, d, points, mults, charts)
    if matrix.size > cap:
        raise RankCapError(f"{matrix.shape[0]}x{matrix.shape[1]} matrix exceeds cap {cap}")
    rank = rank_mod_p(matrix, model.prime, cap)
    # rank on ambient columns equals rank on sections; never more than the section count
    assert rank <= model_basis_dim(model, d)
    return matrix, rank


@dataclass
class OracleReport:
    system: SystemClass
    variant: str
    basis_dim: int
    effective_rank: int
    actual_dim: int
    expected_dim: int
    special_evidence: bool
    certified_nonspecial: bool
    trials: int
    prime: int
    seed: int
    ranks: list[int] = field(default_factory=list)
    primes_tried: list[int] = field(default_factory=list)
    reseeded: bool = False

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["system"] = self.system.to_dict()
        return out


@dataclass
class Instance:
    model: K3ModelSpec
    points: list[SurfacePoint]


def draw_instance(model: K3ModelSpec, r: int, seed: int, index: int,
                  fresh_model: bool = False) -> Instance:
    """Random points (and optionally a fresh model) for trial ``index``."""
    if fresh_model and model.is_random:
        model = K3ModelSpec.random(model.variant, model.prime, derive_seed(seed, index, "model"))
    rng = np.random.default_rng(derive_seed(seed, index, model.prime, "points"))
    points: list[SurfacePoint] = []
    regenerated = False
    while len(points) < r:
        try:
            pt = model.sample_point(rng)
        except SamplingError:
            if regenerated or not model.is_random:
                raise
            model = K3ModelSpec.random(model.variant, model.prime, derive_seed(seed, index, "regen"))
            points, regenerated = [], True
            continue
        if pt not in points:
            points.append(pt)
    return Instance(model, points)


def _instance_rank(inst: Instance, cls: SystemClass, cap: int) -> int:
    if cls.r == 0:
        return 0
    _, rank = assemble_and_rank(inst.model, cls.d, inst.points, cls.mults, cap)
    return rank


def _check(model: K3ModelSpec, cls: SystemClass) -> None:
    if cls.n != model.n:
        raise ClassError(f"system has n={cls.n} but the {model.variant} model has n={model.n}")
    if cls.d < 1:
        raise ClassError("oracle needs d >= 1")
    if not cls.is_normalized:
        raise ClassError("oracle needs all multiplicities >= 1")


def speciality_test(model: K3ModelSpec, cls: SystemClass, trials: int = DEFAULT_TRIALS,
                    seed: int = 0, reseed: bool = True, second_prime: int = SECOND_PRIME,
                    fresh_model: bool = False, cap: int = DEFAULT_CAP) -> OracleReport:
    """Measure ``dim L`` as the max-rank outcome over random instances.

    Rank can only drop under specialization, so the best rank seen bounds the
    generic rank from below: ``actual_dim == expected_dim`` certifies
    non-speciality, a larger value is evidence only.  When evidence appears the
    test is repeated with a fresh seed over ``second_prime``.
    """
    _check(model, cls)
    basis = model_basis_dim(model, cls.d)
    ranks = [_instance_rank(draw_instance(model, cls.r, seed, t, fresh_model), cls, cap)
             for t in range(trials)]
    primes = [model.prime]
    e = expected_dim(cls).e
    best = max(ranks)
    reseeded = False
    if basis - best - 1 > e and reseed:
        reseeded = True
        alt_seed = derive_seed(seed, "reseed")
        alt = model.reseeded(second_prime, alt_seed)
        primes.append(alt.prime)
        more = [_instance_rank(draw_instance(alt, cls.r, alt_seed, t, fresh_model), cls, cap)
                for t in range(trials)]
        ranks += more
        best = max(ranks)
    actual = basis - best - 1
    return OracleReport(cls, model.variant, basis, best, actual, e, actual > e, actual == e,
                        trials, model.prime, seed, ranks, primes, reseeded)


def measure_general_multiplicity(model: K3ModelSpec, cls: SystemClass, point_index: int,
                                 trials: int = DEFAULT_TRIALS, seed: int = 0,
                                 cap: int = DEFAULT_CAP) -> int:
    """Largest ``m'`` such that raising ``m_i`` to ``m'`` leaves ``dim L`` unchanged."""
    _check(model, cls)
    if not 0 <= point_index < cls.r:
        raise IndexError(f"point index {point_index} out of range for {cls.r} points")
    basis = model_basis_dim(model, cls.d)
    instances = [draw_instance(model, cls.r, seed, t) for t in range(trials)]
    ceiling = cls.d * cls.n + 1
    charts = [[local_chart(inst.model, pt, ceiling, cls.d) for pt in inst.points] for inst in instances]

    def dim_with(m_i: int) -> int:
        mults = list(cls.mults)
        mults[point_index] = m_i
        best = 0
        for inst, chs in zip(instances, charts):
            _, rank = assemble_and_rank(inst.model, cls.d, inst.points, mults, cap, chs)
            best = max(best, rank)
        return basis - best - 1

    base = dim_with(cls.mults[point_index])
    if base < 0:
        raise ClassError(f"{cls} is empty on the sampled instances")
    m = cls.mults[point_index]
    while m < ceiling and dim_with(m + 1) == base:
        m += 1
    return m


def verify_report(report: dict) -> list[str]:
    """Recompute the integers of a serialized :class:`OracleReport`."""
    problems = []
    cls = SystemClass.from_dict(report["system"])
    basis = cls.d * cls.d * cls.n // 2 + 2
    e = expected_dim(cls).e
    if report["basis_dim"] != basis:
        problems.append(f"basis_dim {report['basis_dim']} != {basis}")
    if report["expected_dim"] != e:
        problems.append(f"expected_dim {report['expected_dim']} != {e}")
    if report["effective_rank"] != max(report["ranks"], default=0):
        problems.append("effective_rank is not the best trial rank")
    actual = basis - report["effective_rank"] - 1
    if report["actual_dim"] != actual:
        problems.append(f"actual_dim {report['actual_dim']} != {actual}")
    if report["special_evidence"] != (actual > e):
        problems.append("special_evidence inconsistent")
    if report["certified_nonspecial"] != (actual == e):
        problems.append("certified_nonspecial inconsistent")
    if actual < e:
        problems.append("actual_dim below expected_dim violates semicontinuity")
    return problems
