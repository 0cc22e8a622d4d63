import numpy as np
from scipy import linalg


def symmetrize_matrix(x):
    """
    Symmetrize a matrix as (X + X^T) / 2.

    :param x: The input square matrix to symmetrize.
    :return: The resulting symmetric matrix.
    """
    x = np.asarray(x, dtype=np.float64)
    return (x + x.T) / 2.0


def max_asymmetry(x):
    """
    Get the largest absolute entry of X - X^T.

    :param x: The input square matrix.
    :return: The asymmetry as a float (0 for symmetric matrices).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x - x.T)))


def is_positive_semidefinite(x, tol=1e-8):
    """
    Decide positive semi-definiteness by a symmetric triangular (LDL^T, Bunch-Kaufman) factorization of the
    symmetrized matrix. By Sylvester's law of inertia the block-diagonal factor has the same inertia as the matrix,
    so the matrix is PSD iff no eigenvalue of a 1x1 or 2x2 pivot block falls below -tol (scaled by the largest entry).

    :param x: The input square matrix.
    :param tol: The pivot tolerance.
    :return: True if the symmetrized matrix is PSD up to the tolerance.
    """
    x = symmetrize_matrix(x)
    if x.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(x))))
    _, d, _ = linalg.ldl(x, lower=True)

    # Walk the block diagonal, 2x2 blocks are marked by a nonzero sub-diagonal entry
    i = 0
    n = d.shape[0]
    while i < n:
        if i + 1 < n and d[i + 1, i] != 0.0:
            pivots = np.linalg.eigvalsh(d[i:i + 2, i:i + 2])
            i += 2
        else:
            pivots = [d[i, i]]
            i += 1
        if min(pivots) < -tol * scale:
            return False
    return True


def is_binary_vector(x, tol=0.0):
    """
    Check whether every entry of a vector is 0 or 1 (up to a tolerance).

    :param x: The input vector.
    :param tol: The absolute tolerance.
    :return: True if the vector is binary.
    """
    x = np.asarray(x, dtype=np.float64)
    return bool(np.all((np.abs(x) <= tol) | (np.abs(x - 1.0) <= tol)))


def is_integral(x, tol=1e-6):
    """
    Check whether every entry of a vector is within tol of an integer.
    """
    x = np.asarray(x, dtype=np.float64)
    return bool(np.all(np.abs(x - np.round(x)) <= tol))


def negative_fraction(x):
    """
    Get the percentage of strictly negative entries of a matrix.

    :param x: The input matrix.
    :return: The percentage in [0, 100].
    """
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return 100.0 * float(np.count_nonzero(x < 0)) / x.size
