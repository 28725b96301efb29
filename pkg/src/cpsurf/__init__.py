"""Exact and numeric toolkit for harmonic projector surfaces.

Builds raising-operator towers of harmonic maps from the sphere into
complex projective spaces, assembles the associated Hermitian projector
fields, embeds them as surfaces in real Euclidean space via the canonical
diagonal chart, and computes the induced metric and Gaussian curvature
both exactly (in a closed class of rational functions of xi, xibar) and
numerically.
"""

from .errors import CpsurfError
from .geometry import (CurvatureResult, MetricField, assess_curvature,
                       conformality_check, curvature_fd, curvature_report,
                       energy_density, gaussian_curvature, induced_metric,
                       veronese_curvature_constant, veronese_metric_constant)
from .harmonic import HoloVector, MixedSolution, p_plus, tower, veronese
from .projector import ProjectorField, rank1, sum_projector
from .surface import (SurfaceChart, SurfacePoint, canonical_chart, embed,
                      embed_matrix, line_integral_surface, path_independence,
                      sample_grid, unembed_diagonal)
from .symalg import ConjPoly, ConjRational, RationalMatrix, RationalVector

__version__ = "0.1.0"

__all__ = [
    "ConjPoly", "ConjRational", "RationalMatrix", "RationalVector",
    "HoloVector", "MixedSolution", "p_plus", "tower", "veronese",
    "ProjectorField", "rank1", "sum_projector",
    "SurfaceChart", "SurfacePoint", "canonical_chart", "embed",
    "embed_matrix", "unembed_diagonal", "line_integral_surface",
    "path_independence", "sample_grid",
    "MetricField", "CurvatureResult", "induced_metric", "energy_density",
    "conformality_check", "gaussian_curvature", "assess_curvature",
    "curvature_report", "curvature_fd", "veronese_metric_constant",
    "veronese_curvature_constant",
    "CpsurfError", "__version__",
]
