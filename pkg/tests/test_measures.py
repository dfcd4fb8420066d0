import numpy as np
import pytest

from w2bounds import (DiscreteMeasure, Moments2, SymMat2, discretize_box, from_points,
                      moments, pushforward, translation)


def test_from_points_uniform_and_renormalized():
    mu = from_points([[0, 0], [1, 0]])
    np.testing.assert_allclose(mu.weights, [0.5, 0.5])
    nu = from_points([[0, 0], [1, 0]], [1, 3])
    np.testing.assert_allclose(nu.weights, [0.25, 0.75])


@pytest.mark.parametrize("pts,w", [([], None), ([[0, 0]], [-1]), ([[0, 0], [1, 1]], [0, 0]),
                                   ([[0, 0]], [1, 2])])
def test_from_points_rejects(pts, w):
    with pytest.raises(ValueError):
        from_points(pts, w)


def test_discrete_measure_checks_sum():
    with pytest.raises(ValueError):
        DiscreteMeasure(np.zeros((2, 2)), np.array([0.5, 0.4]))


def test_moments_of_two_points():
    m = moments(from_points([[0, 0], [2, 2]]))
    assert (m.m1, m.m2, m.a, m.b, m.c) == (1.0, 1.0, 1.0, 1.0, 1.0)
    assert m.e1sq == 2.0


def test_moments2_validation_and_scaling():
    with pytest.raises(ValueError):
        Moments2(0, 0, 1, 1, 2)
    with pytest.raises(ValueError):
        Moments2(0, 0, -1, 1, 0)
    m = Moments2.from_mean_cov((1, 2), SymMat2(3, 4, 1))
    s = m.scaled((2, -1))
    assert (s.m1, s.m2, s.a, s.b, s.c) == (2, -2, 12, 4, -2)
    assert s.covariance == SymMat2(12, 4, -2)


def test_box_grid_is_cell_centered():
    mu = discretize_box((0, 1), (0, 1), 2)
    assert sorted(map(tuple, mu.points)) == [(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)]


def test_pushforward_keeps_weights():
    mu = from_points([[0, 0], [1, 0]], [1, 3])
    nu = pushforward(mu, translation([1, 1]))
    np.testing.assert_allclose(nu.points, [[1, 1], [2, 1]])
    np.testing.assert_allclose(nu.weights, mu.weights)
