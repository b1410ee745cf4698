"""Chevalley-Eilenberg complexes, the aromatic bicomplex, graph complexes and
the numerical identities attached to them."""

from .bicomplex import AromaticBicomplex, build_aromatic_bicomplex, expected_bicomplex_dimension
from .ce import build_ce_complex, ce_basis, ce_differential
from .graphs import Graph, build_graph_complex, graph_homotopy_check
from .identities import (
    abel_identity,
    character_check,
    character_formula,
    euler_characteristic_series,
    fixed_point_free_count,
)

__all__ = [
    "AromaticBicomplex",
    "Graph",
    "abel_identity",
    "build_aromatic_bicomplex",
    "build_ce_complex",
    "build_graph_complex",
    "ce_basis",
    "ce_differential",
    "character_check",
    "character_formula",
    "euler_characteristic_series",
    "expected_bicomplex_dimension",
    "fixed_point_free_count",
    "graph_homotopy_check",
]
