"""
Gomory fractional cutting planes for 0-1 linear programs min g.x s.t. Ax >= 1 (or <= 1), 0 <= x <= 1.
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from core.model import BinarySolution
from solvers.simplex import SimplexSolver, LpSense, LpStatus, UnboundedError, InfeasibleError
from utilities.math import is_integral

DEFAULT_CUT_CAP = 100
FRACTIONAL_TOL = 1e-6

logger = logging.getLogger(__name__)


class CutStatus(enum.Enum):
    INTEGER_OPTIMAL = 'IntegerOptimal'
    CUT_CAP_REACHED = 'CutCapReached'


@dataclass(frozen=True, eq=False)
class CutLoopReport:
    """
    Result of the cutting plane loop.

    :param status: The CutStatus.
    :param solution: The binary optimum (only if IntegerOptimal).
    :param cuts_added: The number of cuts appended.
    :param cuts: Every cut as a pair (alpha, beta) meaning alpha.x <= beta in the original variables.
    :param value: The objective value of the last LP solved.
    :param point: The last LP optimum.
    """
    status: CutStatus
    solution: BinarySolution = None
    cuts_added: int = 0
    cuts: list = field(default_factory=list)
    value: float = float('inf')
    point: object = None


class GomoryCutLoop:
    """
    Repeatedly solve the LP and, while its optimum is fractional, append the Chvatal-Gomory rounding of the tableau
    row whose fractional basic variable has the smallest index. Slacks are substituted back so every cut is stated
    on the original variables with integer data.
    """

    def __init__(self, cut_cap=DEFAULT_CUT_CAP, fractional_tol=FRACTIONAL_TOL, solver=None):
        """
        :param cut_cap: The maximum number of cuts to append.
        :param fractional_tol: Values farther than this from an integer are fractional.
        :param solver: The SimplexSolver to use, a new one by default.
        """
        if cut_cap < 0:
            raise ValueError("The cut cap must be nonnegative, got {}".format(cut_cap))
        self.cut_cap = cut_cap
        self.fractional_tol = fractional_tol
        self.solver = solver if solver is not None else SimplexSolver()

    def _derive_cut(self, n):
        T = self.solver.tableau
        basis = self.solver.basis
        values = T[:-1, -1]
        distance = np.abs(values - np.round(values))
        fractional = [r for r in range(len(basis)) if distance[r] > self.fractional_tol]
        row = min(fractional, key=lambda r: basis[r])

        # Chvatal-Gomory rounding of the tableau row over nonnegative integer variables
        eps = 1e-9
        gamma = np.floor(T[row, :-1] + eps)
        beta = float(np.floor(values[row] + eps))

        # Substitute the slack variables, s = a.x - b for >= rows and s = b - a.x for <= rows
        alpha = gamma[:n].copy()
        for r, (coefficients, rhs, sense) in enumerate(self.solver.rows):
            weight = gamma[n + r]
            if weight == 0.0:
                continue
            if sense is LpSense.GEQ:
                alpha += weight * coefficients
                beta += weight * rhs
            else:
                alpha -= weight * coefficients
                beta -= weight * rhs
        return np.round(alpha), float(np.round(beta))

    def run(self, lp):
        """
        Run the cutting plane loop.

        :param lp: The LinearProgram, with unit upper bounds and integer constraint data.
        :return: A CutLoopReport.
        """
        if lp.upper != 1.0:
            raise ValueError("0-1 resolution by cuts requires upper bounds 1 on all variables")
        if not is_integral(lp.A, tol=0.0) or not is_integral(lp.rhs, tol=0.0):
            raise ValueError("Gomory cuts require integer constraint data")

        cuts = []
        while True:
            outcome = self.solver.solve(lp, cuts)
            if outcome.status is LpStatus.UNBOUNDED:
                raise UnboundedError("The linear program is unbounded")
            if outcome.status is LpStatus.INFEASIBLE:
                raise InfeasibleError("The 0-1 program has no feasible point")
            x = outcome.point.x
            if is_integral(x, tol=self.fractional_tol):
                solution = BinarySolution(np.round(x))
                logger.debug("Integer optimum %s after %d cuts", solution, len(cuts))
                return CutLoopReport(CutStatus.INTEGER_OPTIMAL, solution, len(cuts), cuts,
                                     float(lp.g @ solution.x), outcome.point)
            if len(cuts) >= self.cut_cap:
                logger.info("Cut cap %d reached with fractional optimum %s", self.cut_cap, outcome.point)
                return CutLoopReport(CutStatus.CUT_CAP_REACHED, None, len(cuts), cuts, outcome.value, outcome.point)
            alpha, beta = self._derive_cut(lp.n)
            logger.debug("Cut %d: %s.x <= %g", len(cuts) + 1, alpha.tolist(), beta)
            cuts.append((alpha, beta))


def gomory_binary_solve(lp, cut_cap=DEFAULT_CUT_CAP):
    """
    Find a 0-1 optimum of a linear program by Gomory fractional cuts.

    :param lp: The LinearProgram, its upper bounds are forced to 1.
    :param cut_cap: The maximum number of cuts.
    :return: A CutLoopReport.
    """
    if lp.upper is None:
        lp = lp.with_unit_bounds()
    return GomoryCutLoop(cut_cap).run(lp)
