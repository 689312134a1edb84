import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from depscreen.errors import AlreadyCentered, DegenerateColumn, DimensionMismatch
from depscreen.gram import (
    center_entries,
    distance_gram,
    double_center,
    empirical_bandwidth,
    gaussian_gram,
    sym_eigenvalues,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def samples(min_n=3, max_n=15, q=1):
    return arrays(np.float64, st.tuples(st.integers(min_n, max_n), st.just(q)), elements=finite)


class TestBandwidth:
    def test_population_variance(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        assert empirical_bandwidth(x) == pytest.approx([1.25])

    def test_per_coordinate(self, rng):
        z = rng.normal(size=(50, 3)) * [1.0, 2.0, 3.0]
        np.testing.assert_allclose(empirical_bandwidth(z), z.var(axis=0))

    def test_constant_column(self):
        with pytest.raises(DegenerateColumn):
            empirical_bandwidth(np.ones(5))


class TestGaussianGram:
    def test_matches_dense_formula(self, rng):
        z = rng.normal(size=(12, 2))
        s2 = np.array([0.7, 1.9])
        diff = z[:, None, :] - z[None, :, :]
        expected = np.exp(-np.sum(diff**2 / s2, axis=2))
        np.testing.assert_allclose(gaussian_gram(z, s2).entries, expected, rtol=1e-13, atol=1e-15)

    def test_unit_diagonal_and_symmetry(self, rng):
        k = gaussian_gram(rng.normal(size=20), [1.0]).entries
        np.testing.assert_array_equal(np.diag(k), 1.0)
        np.testing.assert_array_equal(k, k.T)

    def test_bandwidth_dimension(self, rng):
        with pytest.raises(DimensionMismatch):
            gaussian_gram(rng.normal(size=(10, 2)), [1.0, 1.0, 1.0])


class TestDistanceGram:
    def test_three_points(self):
        g = distance_gram(np.array([0.0, 3.0, 7.0])).entries
        np.testing.assert_allclose(g, [[0, 3, 7], [3, 0, 4], [7, 4, 0]])

    def test_euclidean_vectors(self):
        g = distance_gram(np.array([[0.0, 0.0], [3.0, 4.0]])).entries
        assert g[0, 1] == pytest.approx(5.0)


class TestCentering:
    @given(samples())
    def test_rows_and_columns_sum_to_zero(self, x):
        if np.ptp(x) == 0:
            return
        c = double_center(distance_gram(x)).entries
        scale = max(1.0, np.abs(c).max())
        assert np.abs(c.sum(axis=0)).max() <= 1e-10 * scale * len(x)
        assert np.abs(c.sum(axis=1)).max() <= 1e-10 * scale * len(x)

    def test_matches_hkh(self, rng):
        a = rng.normal(size=(9, 9))
        a = a + a.T
        h = np.eye(9) - 1.0 / 9
        np.testing.assert_allclose(center_entries(a), h @ a @ h, atol=1e-12)

    def test_refuses_double_centering(self, rng):
        c = double_center(distance_gram(rng.normal(size=8)))
        with pytest.raises(AlreadyCentered):
            double_center(c)


class TestEigenvalues:
    def test_descending_and_match_numpy(self, rng):
        a = rng.normal(size=(10, 10))
        a = a @ a.T
        w = sym_eigenvalues(a)
        assert np.all(np.diff(w) <= 0)
        np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(a), rtol=1e-10)

    def test_centered_kernel_is_psd(self, rng):
        c = double_center(gaussian_gram(rng.normal(size=30), [1.0]))
        w = sym_eigenvalues(c.entries)
        assert w.min() > -1e-10 * w.max()
