"""Effect algebras and effect modules over exact rationals."""

from .predicates import (
    DomainMismatchError,
    FinSet,
    Predicate,
    SimpleNormalForm,
    decimal_truncate,
    normal_form,
    ortho,
    osum,
    smul,
    sup_metric,
)
from .instances import (
    BrokenMinEA,
    BrokenSquareActionEM,
    ChainEA,
    EffectAlgebra,
    EffectModule,
    PowersetEA,
    PredicateEM,
    ProductEA,
    UnitIntervalEM,
    catalog,
    two_element,
)
from .laws import check_effect_algebra, check_effect_module, check_hom

__all__ = [
    "DomainMismatchError",
    "FinSet",
    "Predicate",
    "SimpleNormalForm",
    "decimal_truncate",
    "normal_form",
    "ortho",
    "osum",
    "smul",
    "sup_metric",
    "BrokenMinEA",
    "BrokenSquareActionEM",
    "ChainEA",
    "EffectAlgebra",
    "EffectModule",
    "PowersetEA",
    "PredicateEM",
    "ProductEA",
    "UnitIntervalEM",
    "catalog",
    "two_element",
    "check_effect_algebra",
    "check_effect_module",
    "check_hom",
]
