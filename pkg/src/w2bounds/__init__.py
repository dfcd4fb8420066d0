"""Exact W2 distances between planar discrete measures and closed-form affine bounds."""
from ._accel import USE_NUMBA, backend_name
from .bounds import (BoundKind, BoundReport, CompositionMode, composition_upper_bound,
                     equivalence_constants, rotation_lower_bound_report,
                     rotation_lower_bound_sq, rotation_mean_term, w2_dilation_sq,
                     w2_translation)
from .measures import (Curve, DiscreteMeasure, Moments2, discretize_box, discretize_curve,
                       from_points, moments, pushforward)
from .ot import NumericalError, TransportPlan, cost_matrix, emd, emd2, emd_from_cost, w2
from .shapes import (GAUSSIAN_COVS, Gaussian, Shape, analytic_moments, exact_moment_table,
                     make_shape, project_psd, sample_gaussian)
from .symmat import (SymMat2, bures_sq, optimal_map, rotation_matrix, sqrt_2x2, sqrt_psd,
                     trace_sqrt_product)
from .transforms import (AffineMap2, compose, composition_map, rotation, scaling,
                         translation)
from .wassmap import DistanceMatrix, Embedding, circle_fit, distance_matrix, mds

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
