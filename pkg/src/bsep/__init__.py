"""Binary addressings of edge-weighted graphs: bounds, exact values, LP and Lee codes."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .addressing import Addressing, verify
from .errors import (
    BsepError,
    BudgetExceeded,
    NoApplicableBound,
    ParseError,
    SizeLimit,
    ValidationError,
)
from .graph import DistanceMatrix, WeightedGraph, parse_graph

__all__ = [
    "__version__",
    "BACKEND",
    "Addressing",
    "verify",
    "DistanceMatrix",
    "WeightedGraph",
    "parse_graph",
    "BsepError",
    "BudgetExceeded",
    "NoApplicableBound",
    "ParseError",
    "SizeLimit",
    "ValidationError",
]
