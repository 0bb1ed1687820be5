"""Weighted norms of entire functions over convex domains and of their Borel transforms."""

from ._quadrature import NormValue, QuadratureSpec
from .conjugates import (BoundaryGraph, BracketViolation, RadialWeight, boundary_graph, rho,
                         rho_pm, young_conjugate_radial)
from .constants import ConstantBundle, constant_bundle
from .domain import (ConvexDomain, Disk, DomainMetrics, Ellipse, PointNotExterior,
                     SegmentSupport, SmoothedPolygon)
from .expsum import BorelTransform, ExpSum, MagnitudeOverflow, PoleProximity, standard_family
from .norms import (K0, NormDivergent, boundary_kernel, galpha_norm, halfplane_integral,
                    laplace_kernel, laurent_tail, localized_integral, p0_weight, p_weight,
                    pbeta_norm, radial_integral, weighted_exterior_integral)

__version__ = "0.1.0"

__all__ = [
    "BorelTransform", "BoundaryGraph", "BracketViolation", "ConstantBundle", "ConvexDomain",
    "Disk", "DomainMetrics", "Ellipse", "ExpSum", "K0", "MagnitudeOverflow", "NormDivergent",
    "NormValue", "PointNotExterior", "PoleProximity", "QuadratureSpec", "RadialWeight",
    "SegmentSupport", "SmoothedPolygon", "boundary_graph", "boundary_kernel",
    "constant_bundle", "galpha_norm", "halfplane_integral", "laplace_kernel", "laurent_tail",
    "localized_integral", "p0_weight", "p_weight", "pbeta_norm", "radial_integral", "rho",
    "rho_pm", "standard_family", "weighted_exterior_integral", "young_conjugate_radial",
]
