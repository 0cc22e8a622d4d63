"""
Certified optimization oracle for small instances: exhaustive enumeration and depth-first branch-and-bound.

Both oracles minimize; packing instances are solved as minimization of -f and reported back in the original sense.
Ties within TIE_TOL are broken towards the lexicographically smallest vector.
"""
import enum
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from core.model import BinarySolution, evaluate_objective
from heuristics.greedy import greedy_cover
from solvers.simplex import LpSense, InfeasibleError

BRUTE_FORCE_MAX_N = 25
TIE_TOL = 1e-9
CHUNK_SIZE = 1 << 16

logger = logging.getLogger(__name__)


class ExactStatus(enum.Enum):
    OPTIMAL = 'Optimal'
    TIME_LIMIT = 'TimeLimitBestFound'


@dataclass(frozen=True, eq=False)
class ExactResult:
    """
    Result of an exact search.

    :param status: The ExactStatus.
    :param solution: The best solution found (None only if no feasible point was met).
    :param value: Its objective value in the original sense.
    :param lower_bound: A valid bound on the optimum, a lower bound when minimizing and an upper bound for packing.
    :param nodes_explored: The number of search nodes (or enumerated vectors).
    :param incumbent_trace: The pairs (elapsed seconds, value) recorded each time the incumbent changed.
    """
    status: ExactStatus
    solution: BinarySolution
    value: float
    lower_bound: float
    nodes_explored: int = 0
    incumbent_trace: list = field(default_factory=list)

    @property
    def is_optimal(self):
        return self.status is ExactStatus.OPTIMAL

    def value_at(self, elapsed):
        """
        Get the incumbent value available after the given number of seconds, None if there was none yet.
        """
        value = None
        for t, v in self.incumbent_trace:
            if t > elapsed:
                break
            value = v
        return value


def brute_force(inst, max_n=BRUTE_FORCE_MAX_N):
    """
    Enumerate all the 2^n binary vectors in lexicographic order and return the best feasible one.

    :param inst: The instance.
    :param max_n: The largest n accepted.
    :return: An optimal ExactResult.
    """
    n = inst.n
    if n > max_n:
        raise ValueError("Brute force enumeration is limited to n <= {}, got n={}".format(max_n, n))
    sign = 1.0 if inst.is_cover else -1.0
    A = inst.A.astype(np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    best_value, best_x = np.inf, None
    total = 1 << n
    for start in range(0, total, CHUNK_SIZE):
        # The first variable is the most significant bit, so integer order is lexicographic order
        codes = np.arange(start, min(start + CHUNK_SIZE, total), dtype=np.int64)
        X = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        activity = X @ A.T
        if inst.is_cover:
            feasible = np.all(activity >= 1, axis=1)
        else:
            feasible = np.all(activity <= 1, axis=1)
        if not feasible.any():
            continue
        X = X[feasible]
        values = sign * (X @ inst.c + np.einsum('ij,jk,ik->i', X, inst.D, X))
        chunk_best = values.min()
        if chunk_best < best_value - TIE_TOL:
            k = int(np.flatnonzero(values <= chunk_best + TIE_TOL)[0])
            best_value, best_x = float(values[k]), X[k]
    if best_x is None:
        raise ValueError("The instance has no feasible binary point")
    solution = BinarySolution(best_x)
    value = evaluate_objective(inst, solution)
    return ExactResult(ExactStatus.OPTIMAL, solution, value, value, total, [(0.0, value)])


def _partial_masks(n, fixed):
    """
    Turn a partial assignment into (ones, undecided) boolean masks. The assignment is either a mapping
    {index: 0/1} or a length-n sequence with None (or -1) for undecided entries.
    """
    if isinstance(fixed, dict):
        entries = [fixed.get(j) for j in range(n)]
    else:
        entries = list(fixed)
        if len(entries) != n:
            raise ValueError("Dimension mismatch: assignment has length {} but n={}".format(len(entries), n))
    ones = np.zeros(n, dtype=bool)
    undecided = np.zeros(n, dtype=bool)
    for j, value in enumerate(entries):
        if value is None or value == -1:
            undecided[j] = True
        elif value == 1:
            ones[j] = True
        elif value != 0:
            raise ValueError("Assignment entries must be 0, 1 or undecided, got {} at {}".format(value, j))
    return ones, undecided


def _bound(c, D, D_neg, ones, undecided):
    active = ones | undecided
    committed = c[ones].sum() + D[np.ix_(ones, ones)].sum()
    optional = np.minimum(c[undecided], 0.0).sum() + \
        D_neg[np.ix_(active, active)].sum() - D_neg[np.ix_(ones, ones)].sum()
    return float(committed + optional)


def quadratic_lower_bound(inst, fixed):
    """
    Bound f from below over the binary completions of a partial assignment: the committed terms of f plus the
    negative parts of every term involving an undecided variable.

    :param inst: The instance.
    :param fixed: A mapping {index: 0/1} or a length-n sequence with None for undecided variables.
    :return: A value not larger than f at any completion.
    """
    ones, undecided = _partial_masks(inst.n, fixed)
    return _bound(inst.c, inst.D, np.minimum(inst.D, 0.0), ones, undecided)


class DepthFirstSearch:
    """
    Depth-first 0-1 branch-and-bound minimizing c.x + x^T D x subject to uniform >= or <= rows, branching on the
    variables in index order with the 1-branch first.
    """

    def __init__(self, c, D, A, rhs, sense, time_limit=None, prune=True):
        """
        :param c: The linear costs.
        :param D: The quadratic costs.
        :param A: The constraint matrix.
        :param rhs: The right-hand side.
        :param sense: LpSense.GEQ or LpSense.LEQ.
        :param time_limit: Seconds before the search stops with its best solution, None for no limit.
        :param prune: Whether to prune by bound (feasibility pruning is always active).
        """
        self.c = np.asarray(c, dtype=np.float64)
        self.D = np.asarray(D, dtype=np.float64)
        self.D_neg = np.minimum(self.D, 0.0)
        self.A = np.asarray(A, dtype=np.float64)
        self.rhs = np.asarray(rhs, dtype=np.float64)
        self.sense = LpSense(sense)
        self.time_limit = time_limit
        self.prune = prune
        self.n = self.c.size

        # Best activity reachable from the variables at index k onwards, per row
        reach = np.maximum(self.A, 0.0) if self.sense is LpSense.GEQ else np.minimum(self.A, 0.0)
        self.reach = np.zeros((self.A.shape[0], self.n + 1))
        self.reach[:, :-1] = np.cumsum(reach[:, ::-1], axis=1)[:, ::-1]

        self.best_x = None
        self.best_value = np.inf
        self.trace = []
        self.nodes = 0
        self._start = None

    def objective(self, x):
        return float(self.c @ x + x @ self.D @ x)

    def is_feasible(self, x):
        activity = self.A @ x
        if self.sense is LpSense.GEQ:
            return bool(np.all(activity >= self.rhs - TIE_TOL))
        return bool(np.all(activity <= self.rhs + TIE_TOL))

    def _completable(self, activity, depth):
        reachable = activity + self.reach[:, depth]
        if self.sense is LpSense.GEQ:
            return bool(np.all(reachable >= self.rhs - TIE_TOL))
        return bool(np.all(reachable <= self.rhs + TIE_TOL))

    def _node_bound(self, x, depth):
        ones = np.zeros(self.n, dtype=bool)
        ones[:depth] = x[:depth] == 1
        undecided = np.zeros(self.n, dtype=bool)
        undecided[depth:] = True
        return _bound(self.c, self.D, self.D_neg, ones, undecided)

    def _offer(self, x, value):
        better = value < self.best_value - TIE_TOL
        tie = not better and value <= self.best_value + TIE_TOL and tuple(x) < tuple(self.best_x)
        if better or tie:
            self.best_x, self.best_value = x.copy(), value
            self.trace.append((time.perf_counter() - self._start, value))
            logger.debug("Incumbent %g after %d nodes", value, self.nodes)

    def run(self, seed=None, start=None):
        """
        Run the search.

        :param seed: An optional feasible starting incumbent.
        :param start: The perf_counter reference for the time limit, now by default.
        :return: The tuple (finished, lower_bound).
        """
        self._start = time.perf_counter() if start is None else start
        if seed is not None:
            seed = np.asarray(seed, dtype=np.float64)
            if self.is_feasible(seed):
                self.best_x, self.best_value = seed.copy(), self.objective(seed)
                self.trace.append((time.perf_counter() - self._start, self.best_value))

        # Every stack entry is (depth, partial vector, row activities, bound)
        root = np.zeros(self.n)
        stack = [(0, root, np.zeros(self.A.shape[0]), self._node_bound(root, 0))]
        while stack:
            if self.time_limit is not None and time.perf_counter() - self._start >= self.time_limit:
                lower_bound = min(self.best_value, min(entry[3] for entry in stack))
                logger.info("Time limit %gs hit after %d nodes, incumbent %g", self.time_limit, self.nodes,
                            self.best_value)
                return False, lower_bound
            depth, x, activity, bound = stack.pop()
            self.nodes += 1
            if self.prune and bound > self.best_value + TIE_TOL:
                continue
            if depth == self.n:
                self._offer(x, self.objective(x))
                continue
            for value in (0, 1):
                child = x.copy()
                child[depth] = value
                child_activity = activity + value * self.A[:, depth]
                if not self._completable(child_activity, depth + 1):
                    continue
                stack.append((depth + 1, child, child_activity, self._node_bound(child, depth + 1)))
        return True, self.best_value


def _exact_result(finished, solution, value, lower_bound, search, sign=1.0):
    trace = [(t, sign * v) for t, v in search.trace]
    status = ExactStatus.OPTIMAL if finished else ExactStatus.TIME_LIMIT
    return ExactResult(status, solution, value, sign * lower_bound if not finished else value, search.nodes, trace)


def branch_and_bound(inst, time_limit=None, prune=True):
    """
    Solve an instance by depth-first branch-and-bound seeded with a greedy cover (the empty pack for packing).

    :param inst: The instance.
    :param time_limit: Seconds before returning the best solution found, None for no limit.
    :param prune: Whether to prune by the quadratic lower bound.
    :return: An ExactResult.
    """
    start = time.perf_counter()
    if inst.is_cover:
        sign, rows_sense = 1.0, LpSense.GEQ
        seed = greedy_cover(inst).x
    else:
        sign, rows_sense = -1.0, LpSense.LEQ
        seed = np.zeros(inst.n)
    search = DepthFirstSearch(sign * inst.c, sign * inst.D, inst.A, np.ones(inst.m), rows_sense,
                              time_limit=time_limit, prune=prune)
    finished, lower_bound = search.run(seed=seed, start=start)
    solution = BinarySolution(search.best_x)
    value = evaluate_objective(inst, solution)
    return _exact_result(finished, solution, value, lower_bound, search, sign)


def binary_linear_solve(lp, time_limit=None):
    """
    Minimize g.x over the binary points of a linear program's polytope by branch-and-bound.

    :param lp: The LinearProgram (0-1 variables are implied, upper bounds below 1 are rejected).
    :param time_limit: Seconds before returning the best solution found, None for no limit.
    :return: An ExactResult.
    """
    if lp.upper is not None and lp.upper < 1.0:
        raise ValueError("Binary points require upper bounds of at least 1, got {}".format(lp.upper))
    search = DepthFirstSearch(lp.g, np.zeros((lp.n, lp.n)), lp.A, lp.rhs, lp.sense, time_limit=time_limit)
    seed = np.ones(lp.n) if lp.sense is LpSense.GEQ else np.zeros(lp.n)
    finished, lower_bound = search.run(seed=seed)
    if search.best_x is None:
        if finished:
            raise InfeasibleError("The 0-1 program has no feasible point")
        return ExactResult(ExactStatus.TIME_LIMIT, None, float('inf'), lower_bound, search.nodes, [])
    solution = BinarySolution(search.best_x)
    return _exact_result(finished, solution, float(lp.g @ solution.x), lower_bound, search)

