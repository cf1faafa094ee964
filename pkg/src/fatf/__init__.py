"""Exact computations in Z^m x F_n: subgroup bases, fixed subgroups and endo-closures."""

from .core import (
    FatfElement,
    SubgroupBasis,
    TypeIEndo,
    TypeIIEndo,
    apply,
    compose,
    fixes,
    member,
    subgroup_basis,
    subgroup_equal,
)
from .freewords import Word, primitive_root
from .fix import FixResult, TypeIFamily, fix_type_I, fix_type_I_family, fix_type_II
from .closure import (
    ClosureResult,
    OracleError,
    OracleSet,
    abelian_closure,
    endo_closure,
    enumerate_stabilizers,
    is_endo_fixed,
    nonabelian_closure,
    qp_pairs,
)

__all__ = [
    "ClosureResult", "FatfElement", "FixResult", "OracleError", "OracleSet", "SubgroupBasis",
    "TypeIEndo", "TypeIFamily", "TypeIIEndo", "Word", "abelian_closure", "apply", "compose",
    "endo_closure", "enumerate_stabilizers", "fix_type_I", "fix_type_I_family", "fix_type_II",
    "fixes", "is_endo_fixed", "member", "nonabelian_closure", "primitive_root", "qp_pairs",
    "subgroup_basis", "subgroup_equal",
]

__version__ = "0.1.0"
