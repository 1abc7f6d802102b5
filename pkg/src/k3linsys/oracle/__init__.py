"""Exact finite-field interpolation on concrete K3 models."""

from .field import RankCapError, derive_seed, rank_mod_p
from .interpolation import (
    ChartError,
    LocalChart,
    OracleReport,
    assemble_and_rank,
    draw_instance,
    jet_rows,
    local_chart,
    measure_general_multiplicity,
    speciality_test,
)
from .models import (
    DEFAULT_PRIME,
    DOUBLE_PLANE,
    QUARTIC,
    SECOND_PRIME,
    K3ModelSpec,
    ModelError,
    NoModelError,
    SamplingError,
    SurfacePoint,
    fermat_quartic,
    model_basis_dim,
    model_for_n,
)

__all__ = [
    "ChartError", "DEFAULT_PRIME", "DOUBLE_PLANE", "K3ModelSpec", "LocalChart", "ModelError",
    "NoModelError", "OracleReport", "QUARTIC", "RankCapError", "SECOND_PRIME", "SamplingError",
    "SurfacePoint", "assemble_and_rank", "derive_seed", "draw_instance", "fermat_quartic",
    "jet_rows", "local_chart", "measure_general_multiplicity", "model_basis_dim", "model_for_n",
    "rank_mod_p", "speciality_test",
]
