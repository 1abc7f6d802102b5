"""Linear systems through fat points on generic K3 surfaces."""

from .numerics import (
    ClassError,
    DimensionPair,
    SystemClass,
    add,
    additivity_defect,
    canonical_pairing,
    expected_dim,
    format_mults,
    intersect,
    parse_mults,
    virtual_dim,
)

__version__ = "0.1.0"
