"""Exact verification toolkit for Hopf polyalgebras / Hopf categories.

Structures are given by structure constants over an exact field (rationals
or a prime field) indexed by a finite source category.  Every check is a
finite, exact matrix identity: no tolerances anywhere.
"""

from .exact import FieldSpec, LabeledSpace, Matrix, NotInvertible, QQ, kron, prime_field
from .fincat import FinCategory, FunctorData, arrow_category, is_groupoid, standard_category
from .polyalg import (
    Polyalgebra,
    Polybialgebra,
    check_fusion_identities,
    fusion,
    is_hopf,
    is_transitive,
    validate_polyalgebra,
    validate_polybialgebra,
)

__all__ = [
    "FieldSpec", "LabeledSpace", "Matrix", "NotInvertible", "QQ", "kron", "prime_field",
    "FinCategory", "FunctorData", "arrow_category", "is_groupoid", "standard_category",
    "Polyalgebra", "Polybialgebra", "check_fusion_identities", "fusion",
    "is_hopf", "is_transitive", "validate_polyalgebra", "validate_polybialgebra",
]
