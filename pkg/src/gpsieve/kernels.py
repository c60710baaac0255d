"""Positive-definite covariance kernels and batched kernel evaluation.

Only the squared-exponential family is provided:

    k(x, x') = output_scale * exp(-||x - x'||^2 / (2 * lengthscale^2))

All entropies downstream are in nats, so every log/exp here and elsewhere in
the package uses the natural base.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from gpsieve import backend
from gpsieve.errors import InputError


class KernelFamily(enum.Enum):
    SQUARED_EXPONENTIAL = "squared_exponential"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters.

    ``output_scale`` defaults to 1 so that k(x, x) = 1, keeping posterior
    variances in [0, 1].
    """

    lengthscale: float
    output_scale: float = 1.0
    family: KernelFamily = field(default=KernelFamily.SQUARED_EXPONENTIAL)

    def __post_init__(self):
        if not (math.isfinite(self.lengthscale) and self.lengthscale > 0):
            raise InputError(f"lengthscale must be positive, got {self.lengthscale}")
        if not (math.isfinite(self.output_scale) and self.output_scale > 0):
            raise InputError(f"output_scale must be positive, got {self.output_scale}")
        if self.family is not KernelFamily.SQUARED_EXPONENTIAL:
            raise InputError(f"unsupported kernel family {self.family}")


def _as_points(arr, name="points"):
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out.ndim == 1:
        out = out.reshape(1, -1) if out.size else out.reshape(0, 1)
    if out.ndim != 2:
        raise InputError(f"{name} must be a point or a list of points")
    return out


def kernel_eval(spec: KernelSpec, x, x_other) -> float:
    """k(x, x') for two points of equal dimension."""
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    xb = np.asarray(x_other, dtype=np.float64).reshape(-1)
    if xa.shape != xb.shape or xa.size == 0:
        raise InputError(f"dimension mismatch: {xa.shape} vs {xb.shape}")
    sq = float(np.sum((xa - xb) ** 2))
    return spec.output_scale * math.exp(-sq / (2.0 * spec.lengthscale**2))


def kernel_vector(spec: KernelSpec, points, x) -> np.ndarray:
    """Vector of k(points[m], x); the empirical kernel map at x."""
    pts = _as_points(points)
    if pts.shape[0] == 0:
        return np.empty(0)
    xa = np.ascontiguousarray(x, dtype=np.float64).reshape(1, -1)
    if xa.shape[1] != pts.shape[1]:
        raise InputError(f"dimension mismatch: {pts.shape[1]} vs {xa.shape[1]}")
    return backend.se_cross(pts, xa, spec.lengthscale, spec.output_scale)[:, 0]


def kernel_matrix(spec: KernelSpec, points) -> np.ndarray:
    """Gram matrix of kernel evaluations over a point list."""
    pts = _as_points(points)
    if pts.shape[0] == 0:
        return np.empty((0, 0))
    return backend.se_cross(pts, pts, spec.lengthscale, spec.output_scale)


def cross_matrix(spec: KernelSpec, points_a, points_b) -> np.ndarray:
    """Cross-covariance matrix of shape (len(points_a), len(points_b))."""
    a = _as_points(points_a, "points_a")
    b = _as_points(points_b, "points_b")
    if a.shape[1] != b.shape[1]:
        raise InputError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    return backend.se_cross(a, b, spec.lengthscale, spec.output_scale)
