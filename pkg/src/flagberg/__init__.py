"""Exact checks of Kahler-Einstein flag manifolds and the Bergman kernel of
their unit disc bundles."""

from .bergman import (
    DimPoly,
    HartogsPoint,
    PiInverse,
    binomial_coeffs,
    boundary_coefficient,
    check_binomial_identities,
    dim_poly,
    kempf_constant,
    kempf_numeric_projective,
    kernel_closed_form,
    kernel_series,
    rho,
    weyl_dim,
)
from .catalog import CATALOG, catalog_flag
from .flagstruct import (
    FlagManifold,
    PaintedDiagram,
    WeightCoeffs,
    enumerate_Q,
    flag_from_label,
    ke_coeffs,
    make_flag,
    validate_Q,
)
from .kahlergeom import MetricEval, einstein_defect, metric_at, weight_W
from .polycore import GaussRat, Poly, PolyMatrix, RatFunc
from .potential import PotentialData, build_chart, build_potential, check_diastasis
from .rootsystems import ClassicalAlgebra, RootDatum, build_root_system, check_root_relations

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "ClassicalAlgebra",
    "DimPoly",
    "FlagManifold",
    "GaussRat",
    "HartogsPoint",
    "MetricEval",
    "PaintedDiagram",
    "PiInverse",
    "Poly",
    "PolyMatrix",
    "PotentialData",
    "RatFunc",
    "RootDatum",
    "WeightCoeffs",
    "binomial_coeffs",
    "boundary_coefficient",
    "build_chart",
    "build_potential",
    "build_root_system",
    "catalog_flag",
    "check_binomial_identities",
    "check_diastasis",
    "check_root_relations",
    "dim_poly",
    "einstein_defect",
    "enumerate_Q",
    "flag_from_label",
    "ke_coeffs",
    "kempf_constant",
    "kempf_numeric_projective",
    "kernel_closed_form",
    "kernel_series",
    "make_flag",
    "metric_at",
    "rho",
    "validate_Q",
    "weight_W",
    "weyl_dim",
]
