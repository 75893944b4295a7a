"""Numerical estimators checked against the symbolic predictions."""
from .cone import ConeEstimate, distance_to_rescaled, estimate_tangent_cone, hausdorff_angle
from .embedding import (
    NormalEmbeddingResult,
    branch_components,
    check_normal_embedding,
    estimate_beta,
    estimate_link_components,
    expected_divergence,
)
from .fits import ExponentFit, contact_order, default_t_grid, fit_exponent, snap_rational
from .geodesic import GeodesicGraph, inner_distance, knn_graph, surface_mesh_graph
from .residuals import verify_conjugation, verify_multiplicity_numeric
from .sampling import PointCloud, sample_surface

__all__ = [
    "ConeEstimate",
    "ExponentFit",
    "GeodesicGraph",
    "NormalEmbeddingResult",
    "PointCloud",
    "branch_components",
    "check_normal_embedding",
    "contact_order",
    "default_t_grid",
    "distance_to_rescaled",
    "estimate_beta",
    "estimate_link_components",
    "estimate_tangent_cone",
    "expected_divergence",
    "fit_exponent",
    "hausdorff_angle",
    "inner_distance",
    "knn_graph",
    "sample_surface",
    "snap_rational",
    "surface_mesh_graph",
    "verify_conjugation",
    "verify_multiplicity_numeric",
]
