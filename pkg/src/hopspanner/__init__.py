"""Sparse low-diameter 1-spanners for tree metrics and (1+eps)-spanners for
Euclidean point sets."""

__version__ = "0.1.0"
FORMAT_VERSION = "1"

from ._kernels import BACKEND  # noqa: E402

__all__ = ["__version__", "FORMAT_VERSION", "BACKEND"]
