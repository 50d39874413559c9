"""Exact equivariant symbol calculus for multilinear differential operators
on weighted densities, with module classification over the rationals."""

from .scalars import Q, binomial, format_rational, parse_rational
from .indexing import (
    ArityError,
    count_distinct_partitions,
    enumerate_multi_indices,
    skew_component_count,
)
from .poly import Poly
from .linalg import ShapeError, SolutionSet, det_and_rank, solve_linear_system
from .action import (
    Density,
    MOperator,
    SymbolVector,
    VectorField,
    act_closed,
    act_direct,
    commutator,
    lie_derivative_density,
)
from .tables import (
    CoeffTable,
    InvalidPrincipalSymbolError,
    ResonanceError,
    ResonanceReport,
    apply_quantization,
    apply_symbol,
    apply_skew_symbol,
    quantization_table,
    resonance_report,
    resonance_set,
    skew_symbol_table,
    symbol_table,
)
from .engine import (
    EquivarianceSystem,
    ExistenceVerdict,
    MapAnsatz,
    OperatorSpace,
    SkewOperatorSpace,
    SkewSymbolSpace,
    SymbolSpace,
    assemble_system,
    residual_is_zero,
    residual_map,
    resonant_quantization_exists,
    vect_equivariant_principal_symbol,
)
from .classify import (
    IsoResult,
    ModuleParams,
    conjugate,
    is_singular_second_order,
    iso_search,
    obstruction_vector,
    permute,
    shift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
