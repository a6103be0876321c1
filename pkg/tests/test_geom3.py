import numpy as np
import pytest

from tdoaloc import SingularMatrixError, dot, mat3, norm, solve3, solve3_pivoted, vec3


def test_dot_examples():
    assert dot((1, 0, 0), (0, 1, 0)) == 0.0
    assert dot((1, 2, 3), (1, 2, 3)) == 14.0
    assert dot((2, 3, 4), (1, 1, 1)) == 9.0


def test_norm_examples():
    assert norm((0, 0, 0)) == 0.0
    assert norm((3, 4, 0)) == 5.0
    assert norm((1, 1, 1)) == pytest.approx(np.sqrt(3.0), rel=1e-15)


def test_vec3_rejects_nonfinite():
    with pytest.raises(ValueError):
        vec3(1.0, np.nan, 0.0)
    with pytest.raises(ValueError):
        vec3(np.inf, 0.0, 0.0)


def test_mat3_rejects_nonfinite():
    with pytest.raises(ValueError):
        mat3([[1, 2, 3], [4, np.nan, 6], [7, 8, 9]])


def test_solve3_identity():
    x = solve3(np.eye(3), (4, 5, 6))
    np.testing.assert_array_equal(x, [4.0, 5.0, 6.0])


def test_solve3_diagonal():
    x = solve3(np.diag([2.0, 4.0, 8.0]), (2, 4, 8))
    np.testing.assert_array_equal(x, [1.0, 1.0, 1.0])


def test_solve3_two_equal_rows_is_singular():
    a = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [0.0, 1.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        solve3(a, (1, 1, 1))


def test_solve3_zero_matrix_is_singular():
    with pytest.raises(SingularMatrixError):
        solve3(np.zeros((3, 3)), (1, 1, 1))


def test_solve3_needs_pivoting():
    # Zero in the (0, 0) slot forces a row swap.
    a = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    np.testing.assert_allclose(solve3(a, (2.0, 3.0, 4.0)), [3.0, 2.0, 4.0])


def test_solve3_roundtrip_well_conditioned():
    # 500 random systems filtered by an independent condition estimate.
    rng = np.random.default_rng(101)
    checked = 0
    while checked < 500:
        a = rng.standard_normal((3, 3))
        if np.linalg.cond(a) >= 1e6:
            continue
        s = rng.standard_normal(3)
        x, pivots = solve3_pivoted(a, a @ s)
        assert np.linalg.norm(x - s) < 1e-10 * np.linalg.norm(s)
        assert len(pivots) == 3 and all(p > 0 for p in pivots)
        # residual stays at machine precision relative to the problem scale
        resid = np.linalg.norm(a @ x - (a @ s))
        assert resid <= 1e-13 * np.linalg.norm(a) * np.linalg.norm(x)
        checked += 1


def test_solve3_deterministic_bit_identical():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((3, 3))
    b = rng.standard_normal(3)
    x1 = solve3(a, b)
    x2 = solve3(a.copy(), b.copy())
    assert x1.tobytes() == x2.tobytes()


def test_norm_squared_matches_dot():
    rng = np.random.default_rng(11)
    for _ in range(500):
        v = rng.uniform(-10, 10, 3)
        n2 = norm(v) ** 2
        d = dot(v, v)
        assert abs(n2 - d) <= 1e-15 * d
