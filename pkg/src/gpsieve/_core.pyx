# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: squared-exponential cross-covariances, triangular
solves against the posterior Cholesky factor, and the batched mean/variance
evaluation that dominates each bandit step.

The pure-Python twin of this module is ``gpsieve._core_py``; both expose the
same functions and are interchangeable (see ``gpsieve.backend``).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt
from scipy.linalg.cython_blas cimport ddot, dtrsm, dtrsv

cnp.import_array()


def se_cross(double[:, ::1] a, double[:, ::1] b, double lengthscale, double output_scale):
    """Squared-exponential cross-covariance matrix, shape (len(a), len(b))."""
    cdef Py_ssize_t m = a.shape[0], n = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double s, diff
    cdef double inv = 1.0 / (2.0 * lengthscale * lengthscale)
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(m):
        for j in range(n):
            s = 0.0
            for k in range(d):
                diff = a[i, k] - b[j, k]
                s += diff * diff
            o[i, j] = output_scale * exp(-s * inv)
    return out


def forward_solve(double[:, ::1] chol, double[::1] rhs):
    """Solve L w = rhs for lower-triangular L stored C-contiguously."""
    cdef int m = chol.shape[0]
    cdef int inc = 1
    out = np.array(rhs, dtype=np.float64, copy=True)
    cdef double[::1] w = out
    if m == 0:
        return out
    # A C-contiguous lower factor viewed column-major is its (upper) transpose,
    # so ask BLAS for the transposed-upper solve.
    dtrsv("U", "T", "N", &m, &chol[0, 0], &m, &w[0], &inc)
    return out


def batch_posterior(double[:, ::1] chol, double[::1] weights, double[:, ::1] cross_t,
                    double prior_var):
    """Posterior mean/variance at many points from one triangular solve.

    cross_t holds kernel vectors row-wise: cross_t[j] = k_D(x_j), shape (n, m).
    Returns (mean, variance) where mean[j] = (L^-1 k_j) . weights and
    variance[j] = prior_var - ||L^-1 k_j||^2 (unclamped).
    """
    cdef int n = cross_t.shape[0], m = cross_t.shape[1]
    cdef int inc = 1
    cdef double one = 1.0
    cdef Py_ssize_t j
    mean = np.empty(n, dtype=np.float64)
    var = np.empty(n, dtype=np.float64)
    cdef double[::1] mu = mean
    cdef double[::1] v = var
    if m == 0:
        mean.fill(0.0)
        var.fill(prior_var)
        return mean, var
    solved = np.array(cross_t, dtype=np.float64, copy=True)
    cdef double[:, ::1] s = solved
    # Row-major (n, m) is column-major (m, n): one dtrsm solves all columns.
    dtrsm("L", "U", "T", "N", &m, &n, &one, &chol[0, 0], &m, &s[0, 0], &m)
    for j in range(n):
        mu[j] = ddot(&m, &s[j, 0], &inc, &weights[0], &inc)
        v[j] = prior_var - ddot(&m, &s[j, 0], &inc, &s[j, 0], &inc)
    return mean, var
