"""Fixed-size 3D linear algebra kernel: 3-vectors, 3x3 matrices, pivoted solve.

All functions are pure, operate on plain numpy arrays (shape ``(3,)`` and
``(3, 3)``) and python floats, and are safe to call concurrently.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SingularMatrixError

# Relative pivot threshold separating true rank deficiency from round-off.
EPS_RANK = 1e-12

Vec3 = np.ndarray
Mat3 = np.ndarray


def vec3(x: float, y: float, z: float) -> Vec3:
    """Build a 3-vector, rejecting NaN/Inf components."""
    v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector components must be finite, got {v!r}")
    return v


def mat3(rows) -> Mat3:
    """Build a 3x3 matrix from row-major entries, rejecting NaN/Inf."""
    m = np.asarray(rows, dtype=float).reshape(3, 3)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def dot(a, b) -> float:
    """Inner product of two 3-vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def norm(a) -> float:
    """Euclidean length of a 3-vector."""
    a = np.asarray(a, dtype=float)
    return math.sqrt(float(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]))


def solve3_pivoted(matrix, rhs) -> tuple[Vec3, tuple[float, float, float]]:
    """Solve a 3x3 linear system, returning the solution and pivot magnitudes.

    Direct Gaussian elimination with partial (row) pivoting; algebraically the
    same as multiplying by the matrix inverse but better behaved near
    degenerate geometries. Deterministic: identical inputs give bit-identical
    outputs.

    Raises:
        SingularMatrixError: if any elimination pivot falls below
            ``EPS_RANK`` times the largest entry magnitude of the matrix,
            i.e. the system is numerically rank-deficient.
    """
    m = np.asarray(matrix, dtype=float)
    v = np.asarray(rhs, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if v.shape != (3,):
        raise ValueError(f"expected a length-3 right-hand side, got shape {v.shape}")

    a = m.tolist()
    b = v.tolist()
    scale = max(abs(e) for row in a for e in row)
    if scale == 0.0:
        raise SingularMatrixError("all-zero system matrix (rank 0)")
    tol = EPS_RANK * scale

    pivots = []
    for col in range(3):
        p = max(range(col, 3), key=lambda r: abs(a[r][col]))
        piv = a[p][col]
        if abs(piv) < tol:
            raise SingularMatrixError(
                f"elimination pivot {abs(piv):.3e} below {tol:.3e} "
                f"(rank-deficient system)"
            )
        if p != col:
            a[col], a[p] = a[p], a[col]
            b[col], b[p] = b[p], b[col]
        pivots.append(abs(piv))
        for r in range(col + 1, 3):
            f = a[r][col] / piv
            if f != 0.0:
                for c in range(col + 1, 3):
                    a[r][c] -= f * a[col][c]
                b[r] -= f * b[col]

    x2 = b[2] / a[2][2]
    x1 = (b[1] - a[1][2] * x2) / a[1][1]
    x0 = (b[0] - a[0][1] * x1 - a[0][2] * x2) / a[0][0]
    return np.array([x0, x1, x2]), (pivots[0], pivots[1], pivots[2])


def solve3(matrix, rhs) -> Vec3:
    """Solve a 3x3 linear system; see :func:`solve3_pivoted`."""
    return solve3_pivoted(matrix, rhs)[0]
