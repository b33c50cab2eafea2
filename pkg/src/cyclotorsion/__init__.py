"""Exact torsion specializations of elliptic families at parameters that
are sums of roots of unity: search, certification, counting, and the
supporting cyclotomic, tower, and analytic arithmetic."""

__version__ = "0.1.0"

from .counting import (
    CompactSetSpec,
    CountReport,
    compute_delta,
    conjugate_fraction_in_S,
    count_rational_points,
    degree_bound_report,
    membership_in_S,
)
from .cyclotomic import (
    CyclotomicField,
    CyclotomicNumber,
    RootOfUnityTuple,
    has_vanishing_subsum,
    sl2_torsion_order,
)
from .elliptic import EllipticScheme, legendre_scheme, section_torsion_order
from .errors import (
    BadReductionError,
    BudgetExceeded,
    CyclotorsionError,
    PrecisionExhausted,
    ZeroDivisorSplit,
)
from .extension import FieldTower, make_tower, split_tower
from .search import (
    SearchConfig,
    TorsionCertificate,
    certify,
    enumerate_tuples,
    run_search,
    search_report,
    solve_fiber,
)
from .torus_geometry import maximal_subgroup_dimension

__all__ = [
    "BadReductionError",
    "BudgetExceeded",
    "CompactSetSpec",
    "CountReport",
    "CyclotomicField",
    "CyclotomicNumber",
    "CyclotorsionError",
    "EllipticScheme",
    "FieldTower",
    "PrecisionExhausted",
    "RootOfUnityTuple",
    "SearchConfig",
    "TorsionCertificate",
    "ZeroDivisorSplit",
    "certify",
    "compute_delta",
    "conjugate_fraction_in_S",
    "count_rational_points",
    "degree_bound_report",
    "enumerate_tuples",
    "has_vanishing_subsum",
    "legendre_scheme",
    "make_tower",
    "maximal_subgroup_dimension",
    "membership_in_S",
    "run_search",
    "search_report",
    "section_torsion_order",
    "sl2_torsion_order",
    "solve_fiber",
    "split_tower",
    "__version__",
]
