"""Saturated transfer systems on two-prime cyclic groups.

Enumerate transfer systems on the subgroup lattice of C_{p^m q^n},
count the saturated ones five independent ways, and realize each
saturated system on C_{pq^n} by an explicit set of residues.
"""

from .counting import (
    count_closed_form,
    count_egf,
    count_recurrence,
    count_table,
)
from .covers import (
    CodePair,
    SaturatedCover,
    classify,
    collapse,
    cover_from_json,
    cover_to_system,
    expand,
    iter_saturated_covers,
    system_to_cover,
)
from .grid import GridEdge, GridPoint, GridShape, two_prime_shape
from .modular import (
    IndexSet,
    RealizationCertificate,
    RealizationError,
    find_index_set_bruteforce,
    modular_transfer_system,
    realize,
    realize_chain,
)
from .transfer import (
    BudgetExceededError,
    TransferSystem,
    axiom_report,
    from_json,
    from_pairs,
    generate,
    is_saturated,
    iter_saturated_systems,
    iter_transfer_systems,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CodePair",
    "GridEdge",
    "GridPoint",
    "GridShape",
    "IndexSet",
    "RealizationCertificate",
    "RealizationError",
    "SaturatedCover",
    "TransferSystem",
    "axiom_report",
    "classify",
    "collapse",
    "count_closed_form",
    "count_egf",
    "count_recurrence",
    "count_table",
    "cover_from_json",
    "cover_to_system",
    "expand",
    "find_index_set_bruteforce",
    "from_json",
    "from_pairs",
    "generate",
    "is_saturated",
    "iter_saturated_covers",
    "iter_saturated_systems",
    "iter_transfer_systems",
    "modular_transfer_system",
    "realize",
    "realize_chain",
    "system_to_cover",
    "two_prime_shape",
    "__version__",
]
