"""Product-one sequences over finite groups: atoms, Davenport constants,
class semigroups, and factorization invariants."""

from .factor import (
    AtomSet,
    DavenportReport,
    LengthSet,
    davenport,
    divides_in_B,
    enumerate_atoms,
    factorization_lengths,
    is_atom,
)
from .groups import (
    Group,
    GroupStructure,
    Subgroup,
    analyze,
    parse_group,
    subgroup_generated,
)
from .sequences import (
    PiEngine,
    ProductSet,
    Sequence,
    is_product_one,
    is_product_one_free,
    product_set,
    subsequence_products,
)

__version__ = "0.1.0"

__all__ = [
    "AtomSet",
    "DavenportReport",
    "Group",
    "GroupStructure",
    "LengthSet",
    "PiEngine",
    "ProductSet",
    "Sequence",
    "Subgroup",
    "analyze",
    "davenport",
    "divides_in_B",
    "enumerate_atoms",
    "factorization_lengths",
    "is_atom",
    "is_product_one",
    "is_product_one_free",
    "parse_group",
    "product_set",
    "subgroup_generated",
    "subsequence_products",
    "__version__",
]
