"""
Problem data model of quadratic set covering / packing: instances, candidate solutions, objective, gradient,
feasibility predicates and structural analysis of the quadratic cost matrix.

A covering instance asks to minimize f(x) = c.x + x^T D x subject to Ax >= 1, a packing instance asks to
maximize the same f subject to Ax <= 1, both over x in {0, 1}^n.
"""
import enum
from dataclasses import dataclass, field

import numpy as np

from utilities.math import max_asymmetry, is_positive_semidefinite, is_binary_vector

FEASIBILITY_TOL = 1e-9


class Sense(enum.Enum):
    COVER = 'cover'
    PACK = 'pack'


def _frozen(x, dtype=np.float64):
    x = np.array(x, dtype=dtype)
    x.setflags(write=False)
    return x


@dataclass(frozen=True, eq=False)
class Instance:
    """
    Covering or packing problem data.

    :param A: The m x n binary incidence matrix, a_ij = 1 iff element i belongs to subset j.
    :param c: The length-n linear cost vector.
    :param D: The n x n quadratic cost matrix.
    :param sense: Sense.COVER (Ax >= 1, minimize) or Sense.PACK (Ax <= 1, maximize).
    :param name: An optional identifier of the instance.
    """
    A: np.ndarray
    c: np.ndarray
    D: np.ndarray
    sense: Sense = Sense.COVER
    name: str = field(default='')

    def __post_init__(self):
        A = np.array(self.A)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("A must be a non-empty 2-dimensional matrix, got shape {}".format(A.shape))
        if not np.all((A == 0) | (A == 1)):
            raise ValueError("Every entry of A must be 0 or 1")
        m, n = A.shape
        c = np.array(self.c, dtype=np.float64).reshape(-1)
        D = np.array(self.D, dtype=np.float64)
        if c.shape != (n,):
            raise ValueError("Dimension mismatch: c has length {} but A has {} columns".format(c.size, n))
        if D.shape != (n, n):
            raise ValueError("Dimension mismatch: D has shape {} but A has {} columns".format(D.shape, n))
        sense = Sense(self.sense)
        if sense is Sense.COVER:
            empty_rows = np.flatnonzero(A.sum(axis=1) == 0)
            if len(empty_rows) > 0:
                raise ValueError("Row {} of A has no 1 entries, no cover exists".format(int(empty_rows[0]) + 1))

        # Bypass the frozen dataclass to store the normalized (read-only) arrays
        object.__setattr__(self, 'A', _frozen(A, dtype=np.int8))
        object.__setattr__(self, 'c', _frozen(c))
        object.__setattr__(self, 'D', _frozen(D))
        object.__setattr__(self, 'sense', sense)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    @property
    def is_cover(self):
        return self.sense is Sense.COVER

    def with_costs(self, c, D):
        """
        Get a copy of the instance with the same incidence matrix and sense but other costs.
        """
        return Instance(self.A, c, D, sense=self.sense, name=self.name)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.sense is other.sense and \
            self.A.shape == other.A.shape and \
            np.array_equal(self.A, other.A) and \
            np.array_equal(self.c, other.c) and \
            np.array_equal(self.D, other.D)

    def __hash__(self):
        return hash((self.sense, self.A.tobytes(), self.c.tobytes(), self.D.tobytes()))


@dataclass(frozen=True, eq=False)
class BinarySolution:
    """
    A candidate solution over {0, 1}^n, with its support (the selected subsets, 0-based).
    """
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        if not is_binary_vector(x):
            raise ValueError("A binary solution must contain only 0/1 entries, got {}".format(x.tolist()))
        object.__setattr__(self, 'x', _frozen(x, dtype=np.int8))

    @classmethod
    def from_support(cls, n, support):
        x = np.zeros(n, dtype=np.int8)
        x[list(support)] = 1
        return cls(x)

    @property
    def support(self):
        return frozenset(int(j) for j in np.flatnonzero(self.x))

    @property
    def n(self):
        return self.x.size

    def with_entry(self, j, value):
        x = self.x.copy()
        x[j] = value
        return BinarySolution(x)

    def __eq__(self, other):
        if not isinstance(other, BinarySolution):
            return NotImplemented
        return np.array_equal(self.x, other.x)

    def __hash__(self):
        return hash(self.x.tobytes())

    def __repr__(self):
        return 'BinarySolution({})'.format(self.x.tolist())


@dataclass(frozen=True, eq=False)
class FractionalPoint:
    """
    A point of the continuous relaxation, i.e. a nonnegative length-n vector.
    """
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        if np.any(x < -FEASIBILITY_TOL):
            raise ValueError("A fractional point must be nonnegative, got {}".format(x.tolist()))
        object.__setattr__(self, 'x', _frozen(np.maximum(x, 0.0)))

    @property
    def n(self):
        return self.x.size

    def is_binary(self, tol=1e-9):
        return is_binary_vector(self.x, tol=tol)

    def round(self):
        return BinarySolution(np.round(self.x))

    def __eq__(self, other):
        if not isinstance(other, FractionalPoint):
            return NotImplemented
        return np.array_equal(self.x, other.x)

    def __hash__(self):
        return hash(self.x.tobytes())

    def __repr__(self):
        return 'FractionalPoint({})'.format(self.x.tolist())


@dataclass(frozen=True)
class StructureReport:
    """
    Structural flags of an instance's costs. The PSD flag always refers to the symmetrized matrix (D + D^T) / 2.
    """
    symmetric: bool
    psd: bool
    nonnegative_D: bool
    nonnegative_c: bool


def as_vector(inst, x):
    """
    Extract the raw vector of a solution (or array-like) checking the dimension against the instance.

    :param inst: The instance.
    :param x: A BinarySolution, a FractionalPoint or an array-like.
    :return: The float vector.
    """
    if isinstance(x, (BinarySolution, FractionalPoint)):
        x = x.x
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != inst.n:
        raise ValueError("Dimension mismatch: point has length {} but the instance has n={}".format(x.size, inst.n))
    return x


def evaluate_objective(inst, x):
    """
    Evaluate f(x) = c.x + x^T D x exactly as given (D is not symmetrized).

    :param inst: The instance.
    :param x: A BinarySolution or a FractionalPoint of length n.
    :return: The objective value.
    """
    x = as_vector(inst, x)
    return float(inst.c @ x + x @ inst.D @ x)


def gradient(inst, x):
    """
    Compute the gradient c + (D + D^T) x, which equals c + 2 D x for symmetric D.

    :param inst: The instance.
    :param x: A FractionalPoint (or BinarySolution) of length n.
    :return: The gradient vector.
    """
    x = as_vector(inst, x)
    return inst.c + (inst.D + inst.D.T) @ x


def is_feasible(inst, x, tol=FEASIBILITY_TOL):
    """
    Check Ax >= 1 for covering instances and Ax <= 1 for packing instances. Binary solutions must also be 0/1,
    fractional points must also be nonnegative.

    :param inst: The instance.
    :param x: A BinarySolution or a FractionalPoint of length n.
    :param tol: The absolute tolerance on the row activities.
    :return: Whether x is feasible.
    """
    binary = isinstance(x, BinarySolution)
    x = as_vector(inst, x)
    if binary and not is_binary_vector(x):
        return False
    if np.any(x < -tol):
        return False
    activity = inst.A @ x
    if inst.is_cover:
        return bool(np.all(activity >= 1.0 - tol))
    return bool(np.all(activity <= 1.0 + tol))


def analyze_structure(inst, tol=1e-8):
    """
    Analyze the hypotheses used by the prime cover / prime pack results.

    :param inst: The instance.
    :param tol: Tolerance on symmetry and on the factorization pivots.
    :return: A StructureReport.
    """
    return StructureReport(
        symmetric=max_asymmetry(inst.D) <= tol,
        psd=is_positive_semidefinite(inst.D, tol=tol),
        nonnegative_D=bool(np.all(inst.D >= 0)),
        nonnegative_c=bool(np.all(inst.c >= 0))
    )
