"""Dual complexes of semi-stable degenerations.

Skeleta and retractions, integral (co)homology, cocubical totalization, and
the motivic nearby-cycles calculus, driven by JSON incidence data.
"""

from .cocubical import (
    ChainMap,
    CocubicalSystem,
    FDComplex,
    SimplicialComplex,
    adjunction_system,
    graded_piece,
    quasi_iso_check,
    simple_complex,
    simple_map,
)
from .errors import (
    DomainError,
    MilnorError,
    MissingClass,
    ModelError,
    NotInDeltaE,
    NotInRPrime,
    ParseError,
)
from .geometry import (
    AnalyticSample,
    ColouredPoint,
    SkeletonPoint,
    colour,
    disc_point,
    fiber_homeo,
    fiber_homeo_inverse,
    phi_retract,
    rescale_point,
    restrict_sample,
    tau_retract,
    uncolour,
)
from .homology import GroupDescriptor
from .motivic import (
    GClass,
    L,
    RationalSeries,
    SemiStableModelClassData,
    euler_specialize,
    extract_d,
    limit_T_inf,
    motivic_volume,
    nearby_cycles,
    normalize_DR,
    series_add,
    series_mul,
)
from .series_expr import parse_series
from .simplicial import (
    SemiSimplicialSet,
    SimplicialSet,
    build_DX,
    cohomology,
    functor_F_of_C,
    functor_G,
    functor_H,
    functor_I,
    homology,
    longexact_check,
    simplicial_isomorphic,
    standard_semisimplex,
    sub_complex_DE,
)
from .strata import StrataModel, Stratum, load, validate

__version__ = "0.1.0"


def expand(x, N):
    """Functional alias for RationalSeries.expand."""
    return x.expand(N)
