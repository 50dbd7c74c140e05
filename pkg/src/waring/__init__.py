"""Waring numbers over finite fields computed as diameters of generalized Paley graphs."""

__version__ = "0.1.0"

from waring.errors import (  # noqa: F401
    DegreeCapExceeded,
    Disconnected,
    DivisionByZero,
    NotADivisor,
    NotCoprime,
    NotNormalized,
    NotPrime,
    OracleCapExceeded,
    SizeCapExceeded,
    WaringError,
    WorkCapExceeded,
)
from waring.finite_field import FieldContext, build_field  # noqa: F401
from waring.gp_graph import (  # noqa: F401
    GpGraphSpec,
    WaringResult,
    connectivity,
    diameter_all_pairs_oracle,
    distance_from_zero,
    gp_graph,
    waring_number,
    waring_number_bfs,
)
