"""Discrete hyperbolic reflection groups: geometry, reflection length, tessellations."""

from .errors import (
    GeometryError,
    ResourceLimitError,
    SearchInconclusive,
    SpecError,
)

__version__ = "0.1.0"

__all__ = [
    "GeometryError",
    "ResourceLimitError",
    "SearchInconclusive",
    "SpecError",
    "__version__",
]
