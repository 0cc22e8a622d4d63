import numpy as np

from core.model import BinarySolution


def greedy_cover(inst):
    """
    Build a cover greedily: repeatedly add the column covering the most uncovered rows (ties to the smallest index).

    :param inst: The instance (only its incidence matrix is used).
    :return: A BinarySolution satisfying Ax >= 1.
    """
    A = inst.A.astype(np.int64)
    uncovered = np.ones(inst.m, dtype=bool)
    x = np.zeros(inst.n, dtype=np.int8)
    while uncovered.any():
        gains = A[uncovered].sum(axis=0)
        gains[x == 1] = 0
        j = int(np.argmax(gains))
        if gains[j] == 0:
            raise ValueError("No cover exists, row {} has no 1 entries".format(int(np.flatnonzero(uncovered)[0]) + 1))
        x[j] = 1
        uncovered &= A[:, j] == 0
    return BinarySolution(x)
