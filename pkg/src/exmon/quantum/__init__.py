"""Finite-dimensional operator effects, trace states, and tomography."""

from .linalg import (
    hermitize,
    jacobi_eigh,
    max_abs,
    random_density_matrix,
    random_effect_matrix,
    random_hermitian,
    random_unitary,
)
from .gleason import (
    DEFAULT_TOL,
    Density,
    DimensionMismatchError,
    Effect,
    FormalTensor,
    InvalidOperatorError,
    Projection,
    StateFunctional,
    check_layer_cake_roundtrip,
    check_projection_state_additivity,
    check_tomography_roundtrip,
    check_trace_state_hom,
    coordinate_projection,
    density_from_state,
    effect_osum,
    gleason_suite,
    ic_effects,
    ic_keys,
    identity_effect,
    layer_cake,
    state_of_density,
    tabulate_state,
    tensor_eval,
    zero_effect,
    zero_projection,
)

__all__ = [
    "hermitize",
    "jacobi_eigh",
    "max_abs",
    "random_density_matrix",
    "random_effect_matrix",
    "random_hermitian",
    "random_unitary",
    "DEFAULT_TOL",
    "Density",
    "DimensionMismatchError",
    "Effect",
    "FormalTensor",
    "InvalidOperatorError",
    "Projection",
    "StateFunctional",
    "check_layer_cake_roundtrip",
    "check_projection_state_additivity",
    "check_tomography_roundtrip",
    "check_trace_state_hom",
    "coordinate_projection",
    "density_from_state",
    "effect_osum",
    "gleason_suite",
    "ic_effects",
    "ic_keys",
    "identity_effect",
    "layer_cake",
    "state_of_density",
    "tabulate_state",
    "tensor_eval",
    "zero_effect",
    "zero_projection",
]
