"""Entropy-gated Gaussian-process posterior over a growing dictionary.

The posterior keeps only observations whose conditional entropy

    H(y | past) = 0.5 * ln(2*pi*e * (noise_variance + var(x)))

exceeds a budget ``epsilon`` at the moment they are proposed. Mean and
variance are evaluated through a lower-triangular Cholesky factor of
K_DD + noise_variance*I that is extended one row per admission, so appending
and each prediction cost O(M^2) for model order M. Admission depends only on
the variance at the candidate, never on the observation value, so the test
runs before any sample is drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gpsieve import backend
from gpsieve.errors import InputError, NumericalError
from gpsieve.kernels import KernelSpec, cross_matrix, kernel_vector

# Diagonal jitter applied inside the factorization only; kernel math stays exact.
CHOL_JITTER = 1e-10
# Round-off tolerance: variances in [-VAR_TOL, 0) clamp to 0, below that is corruption.
VAR_TOL = 1e-8
# Admit-always sentinel for the dense baseline; any finite entropy exceeds it.
ADMIT_ALWAYS = float("-inf")

_LOG_2PIE = math.log(2.0 * math.pi * math.e)


def entropy_of_variance(variance: float, noise_variance: float) -> float:
    """Differential entropy (nats) of a Gaussian with the given total variance."""
    return 0.5 * (_LOG_2PIE + math.log(noise_variance + variance))


def variance_threshold(epsilon: float, noise_variance: float) -> float:
    """Variance v solving entropy_of_variance(v) == epsilon.

    Inverts the admission rule: entropy > epsilon iff variance > threshold.
    """
    return math.exp(2.0 * epsilon) / (2.0 * math.pi * math.e) - noise_variance


@dataclass(frozen=True)
class AdmissionDecision:
    admitted: bool
    conditional_entropy: float
    posterior_variance_at_x: float


@dataclass
class GpPosterior:
    """Zero-mean GP posterior parameterized by the retained dictionary.

    ``chol`` satisfies chol @ chol.T == K_DD + noise_variance*I (plus jitter on
    appended diagonals); ``weights`` caches chol^-1 @ targets. ``info_gain_sum``
    telescopes 0.5*ln(1 + var_before/noise_variance) over admissions and equals
    0.5*ln det(I + K_DD/noise_variance); ``entropy_sum`` accumulates the
    pre-append conditional entropies (the running observation-entropy estimate).
    """

    spec: KernelSpec
    noise_variance: float
    points: np.ndarray
    targets: np.ndarray
    chol: np.ndarray
    weights: np.ndarray = field(repr=False)
    info_gain_sum: float = 0.0
    entropy_sum: float = 0.0

    @classmethod
    def empty(cls, spec: KernelSpec, noise_variance: float, dim: int) -> "GpPosterior":
        if not (math.isfinite(noise_variance) and noise_variance > 0):
            raise InputError(f"noise_variance must be positive, got {noise_variance}")
        if dim < 1:
            raise InputError(f"dimension must be >= 1, got {dim}")
        return cls(
            spec=spec,
            noise_variance=noise_variance,
            points=np.empty((0, dim)),
            targets=np.empty(0),
            chol=np.empty((0, 0)),
            weights=np.empty(0),
        )

    @property
    def model_order(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def information_gain(self) -> float:
        return self.info_gain_sum

    def _check_point(self, x) -> np.ndarray:
        xa = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
        if xa.size != self.dim:
            raise InputError(f"point has dimension {xa.size}, expected {self.dim}")
        if not np.all(np.isfinite(xa)):
            raise InputError(f"point contains non-finite values: {xa}")
        return xa

    def prior_variance(self) -> float:
        return self.spec.output_scale

    def posterior_mean(self, x) -> float:
        xa = self._check_point(x)
        if self.model_order == 0:
            return 0.0
        w = backend.forward_solve(self.chol, kernel_vector(self.spec, self.points, xa))
        return float(w @ self.weights)

    def posterior_variance(self, x) -> float:
        xa = self._check_point(x)
        prior = self.prior_variance()
        if self.model_order == 0:
            return prior
        w = backend.forward_solve(self.chol, kernel_vector(self.spec, self.points, xa))
        return self._clamp_variance(prior - float(w @ w))

    def _clamp_variance(self, var: float) -> float:
        if var < 0.0:
            if var < -VAR_TOL:
                raise NumericalError(
                    f"posterior variance {var} is negative beyond round-off"
                )
            return 0.0
        return var

    def batch_mean_variance(self, points, cross_t=None):
        """Mean and clamped variance at many points.

        ``cross_t`` may supply the precomputed kernel vectors (one row per
        point) to avoid recomputing them in hot loops.
        """
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if cross_t is None:
            cross_t = (
                cross_matrix(self.spec, pts, self.points)
                if self.model_order
                else np.empty((pts.shape[0], 0))
            )
        mean, var = backend.batch_posterior(
            self.chol, self.weights, cross_t, self.prior_variance()
        )
        low = var.min() if var.size else 0.0
        if low < -VAR_TOL:
            raise NumericalError(
                f"posterior variance {low} is negative beyond round-off"
            )
        return mean, np.clip(var, 0.0, None)

    def conditional_entropy(self, x) -> float:
        """Entropy of the (unseen) observation at x given the dictionary; nats,
        may be negative."""
        return entropy_of_variance(self.posterior_variance(x), self.noise_variance)

    def admission_test(self, x, epsilon: float) -> AdmissionDecision:
        """Admit x iff its conditional entropy strictly exceeds epsilon.

        Uses only the dictionary and x (the variance is sample-independent), so
        the decision is available before drawing the observation.
        """
        var = self.posterior_variance(x)
        entropy = entropy_of_variance(var, self.noise_variance)
        return AdmissionDecision(
            admitted=entropy > epsilon,
            conditional_entropy=entropy,
            posterior_variance_at_x=var,
        )

    def append_point(self, x, y: float) -> "GpPosterior":
        """Posterior with (x, y) appended; Cholesky factor extended by one row.

        Raises NumericalError if the new diagonal entry degenerates, which
        signals a near-duplicate point whose admission should have been
        rejected by the entropy test.
        """
        xa = self._check_point(x)
        if not math.isfinite(y):
            raise InputError(f"target must be finite, got {y}")
        m = self.model_order
        k_self = self.spec.output_scale

        if m == 0:
            var_before = k_self
            w = np.empty(0)
        else:
            k_vec = kernel_vector(self.spec, self.points, xa)
            w = backend.forward_solve(self.chol, k_vec)
            var_before = self._clamp_variance(k_self - float(w @ w))

        # New diagonal of the extended factor of K_DD + noise*I (jittered).
        radicand = k_self + self.noise_variance + CHOL_JITTER - float(w @ w)
        if radicand <= 0.0:
            raise NumericalError(
                f"degenerate Cholesky append at {xa} (radicand {radicand}); "
                "near-duplicate dictionary point"
            )
        diag = math.sqrt(radicand)

        chol = np.zeros((m + 1, m + 1))
        chol[:m, :m] = self.chol
        chol[m, :m] = w
        chol[m, m] = diag
        weights = np.empty(m + 1)
        weights[:m] = self.weights
        weights[m] = (y - float(w @ self.weights)) / diag

        gain = 0.5 * math.log1p(var_before / self.noise_variance)
        entropy = entropy_of_variance(var_before, self.noise_variance)
        return GpPosterior(
            spec=self.spec,
            noise_variance=self.noise_variance,
            points=np.vstack([self.points, xa[None, :]]),
            targets=np.append(self.targets, y),
            chol=chol,
            weights=weights,
            info_gain_sum=self.info_gain_sum + gain,
            entropy_sum=self.entropy_sum + entropy,
        )
