"""Multi-scale Gabor color edge detection."""

from ._core import (
    IoError,
    ParameterError,
    add_noise,
    detect,
    edge_strength,
    fom,
    gabor_kernel,
    match,
    rgb_to_lab,
)

__all__ = [
    "IoError",
    "ParameterError",
    "add_noise",
    "detect",
    "edge_strength",
    "fom",
    "gabor_kernel",
    "match",
    "rgb_to_lab",
]
