"""Exact tools for the stratification of Fano schemes of lines on
hypersurfaces by normal-bundle splitting type: splitting-type
combinatorics, rank-profile computations for explicit lines, Chow-ring
classes of stratum closures, tangent-space dimensions and seeded
finite-field Monte Carlo experiments.
"""

__version__ = "0.1.0"

from .exactalg import GF, QQ, BinaryForm, ExactMatrix, MultiPoly
from .strata import SplittingType, enumerate_types, poset

__all__ = [
    "GF", "QQ", "BinaryForm", "ExactMatrix", "MultiPoly",
    "SplittingType", "enumerate_types", "poset", "__version__",
]
