"""Finite permutation groups, chief factors and CAP-type embedding predicates."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import CapExceeded, CycleParseError, DegreeMismatch, GroupError, NotASubgroup, NotNormal
from .perm import Permutation, perm
from .group import Group, Morphism, quotient_by, subgroup
from .catalogue import builtin_group, load_group_file, save_group_file

__all__ = [
    "CapExceeded", "CycleParseError", "DegreeMismatch", "GroupError", "NotASubgroup", "NotNormal",
    "Permutation", "perm", "Group", "Morphism", "quotient_by", "subgroup",
    "builtin_group", "load_group_file", "save_group_file", "__version__",
]
