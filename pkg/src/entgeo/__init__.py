"""Trace-norm entanglement measures for small quantum systems."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
