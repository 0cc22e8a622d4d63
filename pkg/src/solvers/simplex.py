"""
Dense tableau simplex for the linearized subproblems min g.x s.t. Ax >= rhs (or Ax <= rhs), 0 <= x (<= upper).

The solver runs a two-phase primal simplex with artificial variables and Bland's smallest-index rule for both the
entering and the leaving variable, so every run is deterministic and terminates.
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from core.model import FractionalPoint

MAX_PIVOTS = 10 ** 6
PIVOT_TOL = 1e-9
FEASIBILITY_TOL = 1e-7

logger = logging.getLogger(__name__)


class LpSense(enum.Enum):
    GEQ = '>='
    LEQ = '<='


class LpStatus(enum.Enum):
    OPTIMAL = 'Optimal'
    UNBOUNDED = 'Unbounded'
    INFEASIBLE = 'Infeasible'


class UnboundedError(RuntimeError):
    pass


class InfeasibleError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """
    A linear program minimize g.x subject to A x (>= | <=) rhs, x >= 0 and optionally x <= upper.

    :param g: The length-n objective vector.
    :param A: The m x n constraint matrix.
    :param sense: LpSense.GEQ or LpSense.LEQ, applied to every row.
    :param rhs: The strictly positive right-hand side, all ones by default.
    :param upper: None for variables unbounded above, otherwise the common upper bound (1 for 0-1 resolution).
    """
    g: np.ndarray
    A: np.ndarray
    sense: LpSense = LpSense.GEQ
    rhs: np.ndarray = None
    upper: float = None

    def __post_init__(self):
        A = np.array(self.A, dtype=np.float64)
        if A.ndim != 2:
            raise ValueError("A must be a 2-dimensional matrix, got shape {}".format(A.shape))
        m, n = A.shape
        g = np.array(self.g, dtype=np.float64).reshape(-1)
        if g.shape != (n,):
            raise ValueError("Dimension mismatch: g has length {} but A has {} columns".format(g.size, n))
        rhs = np.ones(m) if self.rhs is None else np.array(self.rhs, dtype=np.float64).reshape(-1)
        if rhs.shape != (m,):
            raise ValueError("Dimension mismatch: rhs has length {} but A has {} rows".format(rhs.size, m))
        if np.any(rhs <= 0):
            raise ValueError("The right-hand side must be strictly positive")
        if self.upper is not None and self.upper <= 0:
            raise ValueError("The upper bound must be strictly positive, got {}".format(self.upper))
        for name, value in (('A', A), ('g', g), ('rhs', rhs)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'sense', LpSense(self.sense))

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def with_unit_bounds(self):
        return LinearProgram(self.g, self.A, sense=self.sense, rhs=self.rhs, upper=1.0)

    def constraint_rows(self, cuts=()):
        """
        Get every constraint as a triple (coefficients, rhs, sense): the rows of A, the upper bounds and the cuts.

        :param cuts: Extra rows (alpha, beta) meaning alpha.x <= beta.
        :return: A list of triples.
        """
        rows = [(self.A[i], self.rhs[i], self.sense) for i in range(self.m)]
        if self.upper is not None:
            eye = np.eye(self.n)
            rows.extend((eye[j], self.upper, LpSense.LEQ) for j in range(self.n))
        rows.extend((np.asarray(alpha, dtype=np.float64), float(beta), LpSense.LEQ) for alpha, beta in cuts)
        return rows

    def is_feasible(self, x, tol=FEASIBILITY_TOL):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,) or np.any(x < -tol):
            return False
        if self.upper is not None and np.any(x > self.upper + tol):
            return False
        activity = self.A @ x
        if self.sense is LpSense.GEQ:
            return bool(np.all(activity >= self.rhs - tol))
        return bool(np.all(activity <= self.rhs + tol))


@dataclass(frozen=True, eq=False)
class SimplexOutcome:
    """
    Result of a simplex run.

    :param status: The LpStatus.
    :param point: The final basic feasible solution (None if infeasible).
    :param value: The objective value g.point (inf if infeasible).
    :param ray: A direction with point + t ray feasible for t >= 0 and g.ray < 0 (only if unbounded).
    :param basis: The indices of the basic columns of the standard form.
    :param pivots: The number of pivots performed.
    """
    status: LpStatus
    point: FractionalPoint = None
    value: float = float('inf')
    ray: np.ndarray = None
    basis: tuple = field(default=())
    pivots: int = 0

    @property
    def is_optimal(self):
        return self.status is LpStatus.OPTIMAL


class SimplexSolver:
    """
    Two-phase tableau simplex with Bland's rule. A solver instance keeps the tableau of its last run, which is what
    the cutting plane loop reads cuts from; one solve at a time per instance.
    """

    def __init__(self, pivot_tol=PIVOT_TOL, feasibility_tol=FEASIBILITY_TOL, max_pivots=MAX_PIVOTS):
        """
        :param pivot_tol: Entries below this magnitude are never used as pivots.
        :param feasibility_tol: Phase-one objective above this value means infeasibility.
        :param max_pivots: Hard cap on pivots per solve, exceeding it raises RuntimeError.
        """
        self.pivot_tol = pivot_tol
        self.feasibility_tol = feasibility_tol
        self.max_pivots = max_pivots
        self.tableau = None
        self.basis = None
        self.rows = None
        self.n_structural = 0
        self.n_pivots = 0

    def _standard_form(self, lp, cuts=()):
        """
        Build [A | slacks] z = b with b >= 0, one slack per row (surplus for >= rows).
        """
        self.rows = lp.constraint_rows(cuts)
        self.n_structural = lp.n
        n_rows = len(self.rows)
        M = np.zeros((n_rows, lp.n + n_rows))
        b = np.zeros(n_rows)
        for r, (coefficients, rhs, sense) in enumerate(self.rows):
            M[r, :lp.n] = coefficients
            M[r, lp.n + r] = -1.0 if sense is LpSense.GEQ else 1.0
            b[r] = rhs
            if b[r] < 0:
                M[r] = -M[r]
                b[r] = -b[r]
        return M, b

    def _pivot(self, row, col):
        T = self.tableau
        T[row, :] /= T[row, col]
        for r in range(T.shape[0]):
            if r != row and T[r, col] != 0.0:
                T[r, :] -= T[r, col] * T[row, :]
        self.basis[row] = col
        self.n_pivots += 1
        if self.n_pivots > self.max_pivots:
            raise RuntimeError("Simplex exceeded {} pivots".format(self.max_pivots))

    def _iterate(self, n_columns):
        """
        Run Bland's rule on the current tableau over the first n_columns columns.

        :return: None at optimality, otherwise the entering column proving unboundedness.
        """
        T = self.tableau
        while True:
            reduced = T[-1, :n_columns]
            candidates = np.flatnonzero(reduced < -self.pivot_tol)
            if len(candidates) == 0:
                return None
            col = int(candidates[0])
            column = T[:-1, col]
            rows = np.flatnonzero(column > self.pivot_tol)
            if len(rows) == 0:
                return col
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.pivot_tol * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: self.basis[r]))
            self._pivot(row, col)

    def _set_costs(self, cost):
        T = self.tableau
        c_basis = cost[self.basis]
        T[-1, :-1] = cost - c_basis @ T[:-1, :-1]
        T[-1, -1] = -c_basis @ T[:-1, -1]

    def _outcome(self, lp, entering=None):
        T = self.tableau
        n_columns = T.shape[1] - 1
        z = np.zeros(n_columns)
        z[self.basis] = np.maximum(T[:-1, -1], 0.0)
        point = FractionalPoint(z[:lp.n])
        basis = tuple(sorted(int(j) for j in self.basis))
        if entering is None:
            return SimplexOutcome(LpStatus.OPTIMAL, point, float(lp.g @ point.x), None, basis, self.n_pivots)

        # Build the certificate ray from the entering column
        d = np.zeros(n_columns)
        d[entering] = 1.0
        d[self.basis] = np.maximum(-T[:-1, entering], 0.0)
        return SimplexOutcome(LpStatus.UNBOUNDED, point, float('-inf'), d[:lp.n], basis, self.n_pivots)

    def solve(self, lp, cuts=()):
        """
        Solve a linear program from scratch.

        :param lp: The LinearProgram.
        :param cuts: Extra rows (alpha, beta) meaning alpha.x <= beta.
        :return: A SimplexOutcome.
        """
        M, b = self._standard_form(lp, cuts)
        n_rows, n_columns = M.shape
        self.n_pivots = 0

        # Phase one: one artificial per row, minimize their sum
        self.tableau = np.zeros((n_rows + 1, n_columns + n_rows + 1))
        self.tableau[:-1, :n_columns] = M
        self.tableau[:-1, n_columns:n_columns + n_rows] = np.eye(n_rows)
        self.tableau[:-1, -1] = b
        self.basis = list(range(n_columns, n_columns + n_rows))
        phase_one_cost = np.concatenate([np.zeros(n_columns), np.ones(n_rows)])
        self._set_costs(phase_one_cost)
        self._iterate(n_columns + n_rows)

        if -self.tableau[-1, -1] > self.feasibility_tol * max(1.0, float(b.max(initial=0.0))):
            logger.debug("LP infeasible, phase one ended at %g", -self.tableau[-1, -1])
            self.tableau = None
            return SimplexOutcome(LpStatus.INFEASIBLE, pivots=self.n_pivots)

        # Drive the artificials left at zero level out of the basis, dropping redundant rows
        keep = []
        for r in range(n_rows):
            if self.basis[r] >= n_columns:
                nonzero = np.flatnonzero(np.abs(self.tableau[r, :n_columns]) > self.pivot_tol)
                if len(nonzero) == 0:
                    continue
                self._pivot(r, int(nonzero[0]))
            keep.append(r)
        self.tableau = self.tableau[keep + [n_rows]][:, list(range(n_columns)) + [-1]]
        self.basis = [self.basis[r] for r in keep]

        # Phase two on the original objective
        self._set_costs(np.concatenate([lp.g, np.zeros(n_columns - lp.n)]))
        entering = self._iterate(n_columns)
        outcome = self._outcome(lp, entering)
        logger.debug("LP %s after %d pivots, value %g", outcome.status.value, outcome.pivots, outcome.value)
        return outcome

    def crossover(self, lp, x):
        """
        Move from a feasible point to a basic feasible solution that is no worse, then re-optimize with phase two.
        Along a null direction of the active columns the objective never increases; exact ties move the
        lowest-indexed variable down.

        :param lp: The LinearProgram.
        :param x: A feasible point of lp.
        :return: A SimplexOutcome.
        """
        x = x.x if isinstance(x, FractionalPoint) else np.asarray(x, dtype=np.float64)
        if not lp.is_feasible(x):
            raise ValueError("The starting point is not feasible for the linear program")
        M, b = self._standard_form(lp)
        n_rows, n_columns = M.shape
        self.n_pivots = 0
        cost = np.concatenate([lp.g, np.zeros(n_columns - lp.n)])

        # Slack values of the starting point
        z = np.zeros(n_columns)
        z[:lp.n] = np.maximum(x, 0.0)
        for r, (coefficients, rhs, sense) in enumerate(self.rows):
            activity = coefficients @ z[:lp.n]
            z[lp.n + r] = max(activity - rhs if sense is LpSense.GEQ else rhs - activity, 0.0)

        # Purification: shrink the support until its columns are linearly independent
        while True:
            support = np.flatnonzero(z > self.pivot_tol)
            z[z <= self.pivot_tol] = 0.0
            null = linalg.null_space(M[:, support]) if len(support) > 0 else np.zeros((0, 0))
            if null.shape[1] == 0:
                break
            d = np.zeros(n_columns)
            d[support] = null[:, 0]
            slope = cost @ d
            if slope > self.pivot_tol:
                d = -d
            elif abs(slope) <= self.pivot_tol:
                first = np.flatnonzero(np.abs(d) > self.pivot_tol)[0]
                if d[first] > 0:
                    d = -d
            decreasing = np.flatnonzero(d < -self.pivot_tol)
            if len(decreasing) == 0:
                ray = d[:lp.n] / np.abs(d).max()
                return SimplexOutcome(LpStatus.UNBOUNDED, FractionalPoint(z[:lp.n]), float('-inf'), ray,
                                      (), self.n_pivots)
            steps = z[decreasing] / -d[decreasing]
            k = int(np.argmin(steps))
            z = np.maximum(z + steps[k] * d, 0.0)
            z[decreasing[k]] = 0.0

        # Complete the support to a basis in index order
        basis = list(support)
        for j in range(n_columns):
            if len(basis) == n_rows:
                break
            if j in basis:
                continue
            if np.linalg.matrix_rank(M[:, basis + [j]]) == len(basis) + 1:
                basis.append(j)
        B_inv = np.linalg.inv(M[:, basis])
        self.tableau = np.zeros((n_rows + 1, n_columns + 1))
        self.tableau[:-1, :-1] = B_inv @ M
        self.tableau[:-1, -1] = np.maximum(B_inv @ b, 0.0)
        self.basis = [int(j) for j in basis]
        self._set_costs(cost)
        entering = self._iterate(n_columns)
        return self._outcome(lp, entering)


def solve_lp(lp):
    """
    Solve a linear program with the two-phase simplex method.

    :param lp: The LinearProgram.
    :return: A SimplexOutcome (Optimal with a vertex, Unbounded with a certificate ray, or Infeasible).
    """
    return SimplexSolver().solve(lp)


def crossover_to_vertex(lp, x):
    """
    Reduce a feasible (possibly non-basic) point to a basic feasible solution with objective at most g.x.

    :param lp: The LinearProgram.
    :param x: A FractionalPoint feasible for lp.
    :return: A SimplexOutcome.
    """
    return SimplexSolver().crossover(lp, x)
