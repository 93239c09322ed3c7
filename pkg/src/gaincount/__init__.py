"""Count matroids of group-labeled graphs.

Finite group tables, gain graphs with near-balancedness detection, lifted
(k,l)-count functions and their matroids, plus exhaustive verification tools.
"""

from .groups import (
    GroupError,
    GroupTable,
    Subgroup,
    SubgroupConjClass,
    all_subgroups,
    classify_subgroup,
    conj_class,
    cyclic_group,
    dihedral_group,
    generated_subgroup,
    make_group,
    maximal_cyclic_subgroups_containing,
    product_group,
    trivial_group,
)

__all__ = [
    "GroupError",
    "GroupTable",
    "Subgroup",
    "SubgroupConjClass",
    "all_subgroups",
    "classify_subgroup",
    "conj_class",
    "cyclic_group",
    "dihedral_group",
    "generated_subgroup",
    "make_group",
    "maximal_cyclic_subgroups_containing",
    "product_group",
    "trivial_group",
]
