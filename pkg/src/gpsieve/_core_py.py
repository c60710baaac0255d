"""Pure-NumPy twin of the compiled ``gpsieve._core`` extension.

Used automatically when the extension is unavailable, or when
``GPSIEVE_BACKEND=python`` is set. Interfaces and semantics match
``_core.pyx`` exactly; only the execution engine differs.
"""

import numpy as np
from scipy.linalg import solve_triangular


def se_cross(a, b, lengthscale, output_scale):
    """Squared-exponential cross-covariance matrix, shape (len(a), len(b))."""
    diff = a[:, None, :] - b[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    return output_scale * np.exp(-sq / (2.0 * lengthscale * lengthscale))


def forward_solve(chol, rhs):
    """Solve L w = rhs for lower-triangular L."""
    if chol.shape[0] == 0:
        return np.array(rhs, dtype=np.float64, copy=True)
    return solve_triangular(chol, rhs, lower=True, check_finite=False)


def batch_posterior(chol, weights, cross_t, prior_var):
    """Posterior mean/variance at many points from one triangular solve.

    cross_t[j] = k_D(x_j), shape (n, m). Returns (mean, variance) with
    variance unclamped.
    """
    n, m = cross_t.shape
    if m == 0:
        return np.zeros(n), np.full(n, prior_var)
    solved = solve_triangular(chol, cross_t.T, lower=True, check_finite=False)
    mean = solved.T @ weights
    var = prior_var - np.einsum("ij,ij->j", solved, solved)
    return mean, var
