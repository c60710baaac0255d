import math

import numpy as np
import pytest

from gpsieve.errors import InputError
from gpsieve.kernels import KernelSpec, cross_matrix, kernel_eval, kernel_matrix, kernel_vector

SPEC = KernelSpec(lengthscale=1.0)


def test_self_covariance_is_output_scale():
    assert kernel_eval(SPEC, [0.0], [0.0]) == 1.0
    wide = KernelSpec(lengthscale=2.0, output_scale=3.5)
    assert kernel_eval(wide, [1.0, -2.0], [1.0, -2.0]) == 3.5


def test_unit_separation_closed_form():
    # direct evaluation of the closed form: exp(-1/(2*theta^2))
    assert kernel_eval(SPEC, [0.0], [1.0]) == pytest.approx(math.exp(-0.5), abs=1e-15)


def test_symmetry_random_pairs():
    rng = np.random.default_rng(11)
    for _ in range(100):
        x, y = rng.normal(size=3), rng.normal(size=3)
        assert kernel_eval(SPEC, x, y) == kernel_eval(SPEC, y, x)


def test_bounded_by_output_scale():
    rng = np.random.default_rng(5)
    for _ in range(200):
        x, y = rng.normal(scale=4.0, size=2), rng.normal(scale=4.0, size=2)
        v = kernel_eval(SPEC, x, y)
        assert 0.0 <= v <= SPEC.output_scale


def test_strict_decay_with_distance():
    vals = [kernel_eval(SPEC, [0.0], [d]) for d in np.linspace(0.0, 5.0, 40)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_dimension_mismatch_rejected():
    with pytest.raises(InputError):
        kernel_eval(SPEC, [0.0], [0.0, 1.0])
    with pytest.raises(InputError):
        kernel_vector(SPEC, [[0.0, 1.0]], [0.0])


def test_kernel_vector_entries():
    vec = kernel_vector(SPEC, [[0.0], [1.0]], [0.0])
    np.testing.assert_allclose(vec, [1.0, math.exp(-0.5)], atol=1e-15)
    assert kernel_vector(SPEC, np.empty((0, 1)), [0.0]).shape == (0,)
    np.testing.assert_allclose(kernel_vector(SPEC, [[0.0]], [0.0]), [1.0])


def test_kernel_vector_matches_pointwise():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(8, 2))
    x = rng.normal(size=2)
    vec = kernel_vector(SPEC, pts, x)
    for m in range(8):
        assert vec[m] == pytest.approx(kernel_eval(SPEC, pts[m], x), abs=1e-15)


def test_kernel_matrix_small_cases():
    np.testing.assert_allclose(kernel_matrix(SPEC, [[0.0]]), [[1.0]])
    k = kernel_matrix(SPEC, [[0.0], [1.0]])
    e = math.exp(-0.5)
    np.testing.assert_allclose(k, [[1.0, e], [e, 1.0]], atol=1e-15)


def test_kernel_matrix_exact_symmetry_and_psd():
    rng = np.random.default_rng(7)
    for n in (10, 50):
        pts = rng.uniform(-3, 3, size=(n, 2))
        k = kernel_matrix(SPEC, pts)
        assert np.array_equal(k, k.T)
        # eigen-decomposition oracle for positive semidefiniteness
        assert np.linalg.eigvalsh(k).min() >= -1e-10


def test_cross_matrix_shape_and_values():
    a = np.array([[0.0], [1.0], [2.0]])
    b = np.array([[0.5]])
    c = cross_matrix(SPEC, a, b)
    assert c.shape == (3, 1)
    assert c[0, 0] == pytest.approx(kernel_eval(SPEC, [0.0], [0.5]), abs=1e-15)


def test_spec_validation():
    with pytest.raises(InputError):
        KernelSpec(lengthscale=0.0)
    with pytest.raises(InputError):
        KernelSpec(lengthscale=1.0, output_scale=-1.0)
    with pytest.raises(InputError):
        KernelSpec(lengthscale=math.nan)
