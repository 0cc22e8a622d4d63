"""
The Saxena-Arora linearization heuristic for quadratic set covering.

From a feasible x0 the heuristic repeatedly minimizes the gradient of f at the current iterate over the continuous
relaxation, collecting the LP vertices in a set S1. The first vertex that repeats a member of S1 is declared the
relaxation optimum: it is returned if binary, otherwise it is integerized by cuts on the last linearized LP.
The procedure is reproduced as published, so every status that exposes one of its failure modes is reported.
"""
import enum
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from core.model import FractionalPoint, gradient, evaluate_objective, is_feasible, as_vector
from core.prime import ReductionMode, reduce_to_prime_cover
from heuristics.greedy import greedy_cover
from solvers.exact import binary_linear_solve
from solvers.gomory import gomory_binary_solve, CutStatus, DEFAULT_CUT_CAP
from solvers.simplex import SimplexSolver, LinearProgram, LpSense, LpStatus, InfeasibleError

__all__ = [
    'X0Strategy', 'Step6Mode', 'PostReduction', 'SaStatus', 'SaOptions', 'TraceEntry', 'SaRunReport',
    'linearize_at', 'greedy_cover', 'run'
]

logger = logging.getLogger(__name__)


class X0Strategy(enum.Enum):
    ALL_ONES = 'all-ones'
    GREEDY_COVER = 'greedy'
    GIVEN = 'given'


class Step6Mode(enum.Enum):
    GOMORY_CUTS = 'gomory'
    BRANCH_AND_BOUND_FALLBACK = 'bb'


class PostReduction(enum.Enum):
    NEVER = 'never'
    IMPROVING_ONLY = 'improving-only'


class SaStatus(enum.Enum):
    BINARY_AT_STEP5 = 'BinaryAtStep5'
    INTEGERIZED_AT_STEP6 = 'IntegerizedAtStep6'
    UNBOUNDED_LP = 'UnboundedLP'
    ZERO_GRADIENT_START = 'ZeroGradientStart'
    ITERATION_CAP_REACHED = 'IterationCapReached'


@dataclass(frozen=True)
class SaOptions:
    """
    Options of a heuristic run.

    :param x0_strategy: How to choose the starting point.
    :param x0: The starting point when x0_strategy is GIVEN.
    :param max_outer_iterations: The maximum number of linearized LPs solved.
    :param binary_tol: Tolerance of the binary test and of the repetition test.
    :param step6_mode: How a fractional relaxation point is integerized.
    :param cut_cap: The maximum number of Gomory cuts.
    :param prime_reduce_result: Whether to reduce the final cover to a prime cover when that does not worsen it.
    :param fallback_time_limit: Time limit of the 0-1 branch-and-bound fallback, None for no limit.
    """
    x0_strategy: X0Strategy = X0Strategy.ALL_ONES
    x0: tuple = None
    max_outer_iterations: int = 1000
    binary_tol: float = 1e-9
    step6_mode: Step6Mode = Step6Mode.GOMORY_CUTS
    cut_cap: int = DEFAULT_CUT_CAP
    prime_reduce_result: PostReduction = PostReduction.NEVER
    fallback_time_limit: float = None

    def __post_init__(self):
        object.__setattr__(self, 'x0_strategy', X0Strategy(self.x0_strategy))
        object.__setattr__(self, 'step6_mode', Step6Mode(self.step6_mode))
        object.__setattr__(self, 'prime_reduce_result', PostReduction(self.prime_reduce_result))
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be at least 1, got {}".format(self.max_outer_iterations))
        if self.x0_strategy is X0Strategy.GIVEN:
            if self.x0 is None:
                raise ValueError("The '{}' strategy requires a starting point".format(X0Strategy.GIVEN.value))
            object.__setattr__(self, 'x0', tuple(float(v) for v in self.x0))

    @classmethod
    def from_config(cls, config, **overrides):
        """
        Build the options from the 'saxena_arora' section of a configuration.

        :param config: The configuration (an EasyDict or nested dict).
        :param overrides: Explicit values taking precedence over the configuration.
        :return: The SaOptions.
        """
        section = dict(config.get('saxena_arora') or {})
        section.update({k: v for k, v in overrides.items() if v is not None})
        known = cls.__dataclass_fields__.keys()
        unknown = set(section) - set(known)
        if unknown:
            raise ValueError("Unknown saxena_arora options: {}".format(', '.join(sorted(unknown))))
        return cls(**section)


@dataclass(frozen=True, eq=False)
class TraceEntry:
    """
    One linearized LP: the vertex it returned, its objective vector (the gradient at the previous iterate),
    its optimal value and its status.
    """
    point: FractionalPoint
    objective: np.ndarray
    value: float
    status: LpStatus


@dataclass(frozen=True, eq=False)
class SaRunReport:
    status: SaStatus
    x0: FractionalPoint
    trace: list = field(default_factory=list)
    claimed_relaxation_point: FractionalPoint = None
    claimed_objective: float = None
    final_solution: object = None
    objective: float = None
    pre_reduction_objective: float = None
    cuts_added: int = 0
    used_fallback: bool = False
    wall_time: float = 0.0

    @property
    def iterates(self):
        return [entry.point for entry in self.trace]


def linearize_at(inst, x):
    """
    Build the linearized subproblem min grad f(x).y over the continuous relaxation.

    :param inst: The instance.
    :param x: A FractionalPoint (or BinarySolution) of length n.
    :return: The LinearProgram, with >= rows for covering and <= rows for packing, y >= 0.
    """
    sense = LpSense.GEQ if inst.is_cover else LpSense.LEQ
    return LinearProgram(gradient(inst, x), inst.A, sense=sense)


def _starting_point(inst, opts):
    if opts.x0_strategy is X0Strategy.ALL_ONES:
        return FractionalPoint(np.ones(inst.n))
    if opts.x0_strategy is X0Strategy.GREEDY_COVER:
        return FractionalPoint(greedy_cover(inst).x)
    x0 = FractionalPoint(as_vector(inst, opts.x0))
    if not is_feasible(inst, x0):
        raise ValueError("The starting point {} is not feasible".format(x0))
    return x0


def _matches(x, others, tol):
    return any(np.all(np.abs(x.x - other.x) <= tol) for other in others)


def _integerize(lp, opts):
    """
    Step 6: turn the fractional relaxation point into a 0-1 solution of the last linearized LP.

    :return: The tuple (solution, cuts_added, used_fallback).
    """
    lp = lp.with_unit_bounds()
    cuts_added = 0
    if opts.step6_mode is Step6Mode.GOMORY_CUTS:
        report = gomory_binary_solve(lp, cut_cap=opts.cut_cap)
        if report.status is CutStatus.INTEGER_OPTIMAL:
            return report.solution, report.cuts_added, False
        cuts_added = report.cuts_added
        logger.info("Cut cap reached, falling back to 0-1 branch-and-bound")
    result = binary_linear_solve(lp, time_limit=opts.fallback_time_limit)
    if result.solution is None:
        raise InfeasibleError("The 0-1 fallback found no feasible point")
    return result.solution, cuts_added, True


def run(inst, opts=None):
    """
    Run the Saxena-Arora heuristic.

    :param inst: A covering instance.
    :param opts: The SaOptions, defaults if None.
    :return: A SaRunReport.
    """
    if not inst.is_cover:
        raise ValueError("The heuristic applies to covering instances only")
    opts = opts or SaOptions()
    start = time.perf_counter()
    x0 = _starting_point(inst, opts)

    def report(status, trace, **kwargs):
        return SaRunReport(status, x0, trace, wall_time=time.perf_counter() - start, **kwargs)

    if not np.any(gradient(inst, x0)):
        logger.info("Zero gradient at the starting point")
        return report(SaStatus.ZERO_GRADIENT_START, [])

    solver = SimplexSolver()
    trace, visited = [], []
    x = x0
    for iteration in range(opts.max_outer_iterations):
        lp = linearize_at(inst, x)
        outcome = solver.solve(lp)
        trace.append(TraceEntry(outcome.point, lp.g, outcome.value, outcome.status))
        if outcome.status is LpStatus.UNBOUNDED:
            logger.info("Linearized LP %d is unbounded", iteration + 1)
            return report(SaStatus.UNBOUNDED_LP, trace)
        if outcome.status is LpStatus.INFEASIBLE:
            raise InfeasibleError("The linearized LP is infeasible")
        x_next = outcome.point
        logger.debug("Iteration %d: %s, LP value %g", iteration + 1, x_next, outcome.value)

        # Steps 3-4: stop at the first vertex already in S1
        if _matches(x_next, visited, opts.binary_tol):
            break
        visited.append(x_next)
        x = x_next
    else:
        logger.info("No repeated vertex within %d iterations", opts.max_outer_iterations)
        return report(SaStatus.ITERATION_CAP_REACHED, trace)

    claimed = x_next
    claimed_objective = evaluate_objective(inst, claimed)
    cuts_added, used_fallback = 0, False
    if claimed.is_binary(opts.binary_tol):
        status, solution = SaStatus.BINARY_AT_STEP5, claimed.round()
    else:
        status = SaStatus.INTEGERIZED_AT_STEP6
        solution, cuts_added, used_fallback = _integerize(lp, opts)
    objective = evaluate_objective(inst, solution)
    pre_reduction = objective
    if opts.prime_reduce_result is PostReduction.IMPROVING_ONLY:
        solution = reduce_to_prime_cover(inst, solution, ReductionMode.IMPROVING_ONLY)
        objective = evaluate_objective(inst, solution)
    logger.info("%s after %d LPs, objective %g", status.value, len(trace), objective)
    return report(status, trace, claimed_relaxation_point=claimed, claimed_objective=claimed_objective,
                  final_solution=solution, objective=objective, pre_reduction_objective=pre_reduction,
                  cuts_added=cuts_added, used_fallback=used_fallback)
