"""Discrete Schrödinger evolution on web-like graphs.

Scattering data on semi-infinite channels, unitary evolution, and the
dimension of solution spaces forced to vanish on a vertex subset.
"""

__version__ = "0.1.0"

from .graph_model import ChannelSpec, FiniteGraph, WebGraph, truncate, validate_finite_graph
from .extension import decompose, extend_once, maximal_extension
from .spectral import kernel, resolvent_entry, spectral_projector, symmetric_eig
from .dimension import (
    cluster_constraint_matrix,
    dimension_bounds,
    dimension_report,
    exact_dimension,
    forced_zero_set,
    oracle_dimension,
)
from .laurent import LaurentPoly
from .scattering import eigenfunction, jost_solution, lambda_of_theta, scattering_at, singular_set
from .evolution import (
    decay_bound_check,
    evolve,
    evolve_web,
    exponential_type_estimate,
    uncertainty_experiment,
)

__all__ = [
    "ChannelSpec",
    "FiniteGraph",
    "LaurentPoly",
    "WebGraph",
    "cluster_constraint_matrix",
    "decay_bound_check",
    "decompose",
    "dimension_bounds",
    "dimension_report",
    "eigenfunction",
    "evolve",
    "evolve_web",
    "exact_dimension",
    "exponential_type_estimate",
    "extend_once",
    "forced_zero_set",
    "jost_solution",
    "kernel",
    "lambda_of_theta",
    "maximal_extension",
    "oracle_dimension",
    "resolvent_entry",
    "scattering_at",
    "singular_set",
    "spectral_projector",
    "symmetric_eig",
    "truncate",
    "uncertainty_experiment",
    "validate_finite_graph",
]
