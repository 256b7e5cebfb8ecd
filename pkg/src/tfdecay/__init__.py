"""Gaussian time-frequency decay: weights, Hermite expansions, Bargmann transforms and sector estimates."""
from ._accel import USE_NUMBA
from .errors import TFDecayError

__version__ = "0.1.0"

__all__ = ["USE_NUMBA", "TFDecayError", "__version__"]
