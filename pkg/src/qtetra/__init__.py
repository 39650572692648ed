"""Exact verification toolkit for 3D R operators of quantized six-vertex models."""

from ._core import COMPILED
from .exactnum import BACKEND, ParameterPoint, Q
from .kernels import KERNEL_TYPES, RKernel, kernel_point, make_kernel

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "COMPILED",
    "KERNEL_TYPES",
    "ParameterPoint",
    "Q",
    "RKernel",
    "kernel_point",
    "make_kernel",
]
