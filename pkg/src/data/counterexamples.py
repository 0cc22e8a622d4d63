"""
Embedded counterexample corpus: small instances on which the prime cover / prime pack optimality claims and the
Saxena-Arora heuristic fail, each with machine-checkable claims.

  CE-T1  nonnegative linear costs, a redundant cover beats every prime cover
  CE-D1  a linearized subproblem is unbounded
  CE-D2  the repeated vertex is not optimal for the continuous relaxation
  CE-D3  the heuristic returns 6 from one start and the optimum 4 from another
  CE-P1  every prime pack is worse than the empty pack
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from core.model import Instance, Sense, BinarySolution, FractionalPoint, evaluate_objective, gradient, is_feasible
from core.prime import is_prime_cover, is_prime_pack, reduce_to_prime_cover, extend_to_prime_pack
from heuristics import saxena_arora
from solvers.exact import brute_force, branch_and_bound, binary_linear_solve
from solvers.simplex import LpStatus, solve_lp, crossover_to_vertex

VALUE_TOL = 1e-9

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    operation: str
    passed: bool
    expected: str
    actual: str


@dataclass(frozen=True)
class Claim:
    """
    A checkable assertion on an instance.

    :param claim_id: A unique identifier, prefixed by the record id.
    :param operation: The name of the operation the claim exercises.
    :param check: A function of the instance returning the tuple (passed, expected, actual).
    """
    claim_id: str
    operation: str
    check: Callable

    def verify(self, inst):
        try:
            passed, expected, actual = self.check(inst)
        except Exception as e:
            logger.exception("Claim %s raised", self.claim_id)
            return ClaimResult(self.claim_id, self.operation, False, 'no error', '{}: {}'.format(type(e).__name__, e))
        return ClaimResult(self.claim_id, self.operation, bool(passed), str(expected), str(actual))


@dataclass(frozen=True)
class CounterexampleRecord:
    record_id: str
    instance: Instance
    claims: list = field(default_factory=list)
    description: str = ''


def _close(a, b):
    return abs(a - b) <= VALUE_TOL


def _vector(x):
    return tuple(int(v) if float(v).is_integer() else round(float(v), 6) for v in np.asarray(x).reshape(-1))


def _binary_points(n):
    return [BinarySolution(np.array(bits)) for bits in itertools.product((0, 1), repeat=n)]


# Instances

def ce_t1():
    A = [[1, 1, 0], [1, 0, 1]]
    D = [[2, -1, -1], [-1, 1, 0], [-1, 0, 1]]
    return Instance(A, np.zeros(3), D, sense=Sense.COVER, name='CE-T1')


_SHARED_A = [[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]]


def ce_d1():
    D = [[10, -3, -4, -4], [-3, 2, 1, 1], [-4, 1, 3, 1], [-4, 1, 1, 3]]
    return Instance(_SHARED_A, np.zeros(4), D, sense=Sense.COVER, name='CE-D1')


def ce_d2():
    D = [[10, 2, 2, 2], [2, 3, 1, 1], [2, 1, 3, 1], [2, 1, 1, 4]]
    return Instance(_SHARED_A, np.zeros(4), D, sense=Sense.COVER, name='CE-D2')


def ce_d3():
    D = [[4, 1, 1, 1], [1, 2, 0, 0], [1, 0, 2, 0], [1, 0, 0, 2]]
    return Instance(_SHARED_A, np.zeros(4), D, sense=Sense.COVER, name='CE-D3')


def ce_p1():
    A = [[1, 1, 0], [1, 0, 1]]
    D = [[-2, 1, 0], [1, -2, 1], [0, 1, -2]]
    return Instance(A, np.zeros(3), D, sense=Sense.PACK, name='CE-P1')


# CE-T1 claims

def _t1_cover_objectives(inst):
    values = sorted(evaluate_objective(inst, x) for x in _binary_points(inst.n) if is_feasible(inst, x))
    expected = [0, 1, 1, 2, 2]
    return len(values) == len(expected) and all(_close(a, b) for a, b in zip(values, expected)), expected, values


def _t1_optimum(inst):
    result = brute_force(inst)
    return _close(result.value, 0) and _vector(result.solution.x) == (1, 1, 1), \
        '0 at (1, 1, 1)', '{:g} at {}'.format(result.value, _vector(result.solution.x))


def _t1_prime_covers(inst):
    optimum = brute_force(inst).value
    primes = {_vector(x.x): evaluate_objective(inst, x) for x in _binary_points(inst.n)
              if is_feasible(inst, x) and is_prime_cover(inst, x)}
    expected = {(0, 1, 1): 2.0, (1, 0, 0): 2.0}
    passed = set(primes) == set(expected) and all(_close(primes[k], expected[k]) for k in expected) and \
        all(value > optimum + VALUE_TOL for value in primes.values())
    return passed, 'prime covers {} all worse than {:g}'.format(expected, 0), \
        'prime covers {} vs optimum {:g}'.format(primes, optimum)


def _t1_reduction(inst):
    reduced = reduce_to_prime_cover(inst, BinarySolution(np.ones(inst.n)))
    value = evaluate_objective(inst, reduced)
    return _vector(reduced.x) == (1, 0, 0) and _close(value, 2), '(1, 0, 0) with objective 2', \
        '{} with objective {:g}'.format(_vector(reduced.x), value)


# CE-D1 claims

def _d1_unbounded_lp(inst):
    lp = saxena_arora.linearize_at(inst, FractionalPoint([1, 0, 0, 0]))
    outcome = solve_lp(lp)
    ray_ok = outcome.ray is not None and np.all(outcome.ray >= -VALUE_TOL) and \
        np.all(lp.A @ outcome.ray >= -VALUE_TOL) and lp.g @ outcome.ray < 0
    return outcome.status is LpStatus.UNBOUNDED and bool(ray_ok), \
        'Unbounded with a certificate ray for g={}'.format(_vector(lp.g)), \
        '{} with ray {}'.format(outcome.status.value, None if outcome.ray is None else _vector(outcome.ray))


def _d1_heuristic(inst):
    report = saxena_arora.run(inst, saxena_arora.SaOptions(x0_strategy='given', x0=(1, 0, 0, 0)))
    return report.status is saxena_arora.SaStatus.UNBOUNDED_LP, \
        saxena_arora.SaStatus.UNBOUNDED_LP.value, report.status.value


# CE-D2 claims

def _d2_trace(inst):
    report = saxena_arora.run(inst, saxena_arora.SaOptions(x0_strategy='given', x0=(1, 0, 0, 0)))
    points = [_vector(p.x) for p in report.iterates]
    expected = [(0, 1, 1, 1), (1, 0, 0, 0), (0, 1, 1, 1)]
    passed = points == expected and report.claimed_objective is not None and _close(report.claimed_objective, 16)
    return passed, 'trace {} claiming 16'.format(expected), \
        'trace {} claiming {}'.format(points, report.claimed_objective)


def _d2_relaxation_gap(inst):
    point = FractionalPoint(np.array([5, 2, 2, 2]) / 7.0)
    value = evaluate_objective(inst, point)
    expected = float(Fraction(434, 49))
    passed = is_feasible(inst, point) and abs(value - expected) <= 1e-9 and value < 16
    return passed, 'feasible point with value {:.6f} < 16'.format(expected), \
        'feasible={} value {:.6f}'.format(is_feasible(inst, point), value)


def _d2_optimum(inst):
    result = branch_and_bound(inst)
    return result.is_optimal and _close(result.value, 10) and _vector(result.solution.x) == (1, 0, 0, 0), \
        '10 at (1, 0, 0, 0)', '{:g} at {}'.format(result.value, _vector(result.solution.x))


# CE-D3 claims

def _d3_run_from(x0, expected_point, expected_value):
    def check(inst):
        report = saxena_arora.run(inst, saxena_arora.SaOptions(x0_strategy='given', x0=x0))
        actual = None if report.final_solution is None else _vector(report.final_solution.x)
        passed = report.status is saxena_arora.SaStatus.BINARY_AT_STEP5 and actual == expected_point and \
            _close(report.objective, expected_value)
        return passed, '{} at {}'.format(expected_value, expected_point), \
            '{} at {} ({})'.format(report.objective, actual, report.status.value)
    return check


def _d3_optimum(inst):
    result = brute_force(inst)
    return _close(result.value, 4) and _vector(result.solution.x) == (1, 0, 0, 0), \
        '4 at (1, 0, 0, 0)', '{:g} at {}'.format(result.value, _vector(result.solution.x))


def _d3_crossover(inst):
    point = FractionalPoint([0.75, 0.25, 0.25, 0.25])
    lp = saxena_arora.linearize_at(inst, point)
    outcome = crossover_to_vertex(lp, point)
    passed = outcome.is_optimal and _vector(outcome.point.x) == (0, 1, 1, 1) and _close(outcome.value, 7.5)
    return passed, 'vertex (0, 1, 1, 1) with value 7.5 for g={}'.format(_vector(lp.g)), \
        '{} {} with value {}'.format(outcome.status.value, None if outcome.point is None else
                                     _vector(outcome.point.x), outcome.value)


def _d3_binary_linear(inst):
    lp = saxena_arora.linearize_at(inst, FractionalPoint([0.75, 0.25, 0.25, 0.25])).with_unit_bounds()
    result = binary_linear_solve(lp)
    qsp_value = evaluate_objective(inst, result.solution)
    optimum = brute_force(inst).value
    passed = _vector(result.solution.x) == (0, 1, 1, 1) and _close(result.value, 7.5) and \
        _close(qsp_value, 6) and qsp_value > optimum + VALUE_TOL
    return passed, '0-1 optimum (0, 1, 1, 1) at 7.5, objective 6 > 4', \
        '0-1 optimum {} at {:g}, objective {:g} vs {:g}'.format(_vector(result.solution.x), result.value,
                                                                qsp_value, optimum)


# CE-P1 claims

def _p1_prime_packs(inst):
    primes = {_vector(x.x): evaluate_objective(inst, x) for x in _binary_points(inst.n)
              if is_feasible(inst, x) and is_prime_pack(inst, x)}
    expected = {(0, 1, 1): -2.0, (1, 0, 0): -2.0}
    passed = set(primes) == set(expected) and all(_close(primes[k], expected[k]) for k in expected)
    return passed, 'prime packs {}'.format(expected), 'prime packs {}'.format(primes)


def _p1_optimum(inst):
    result = brute_force(inst)
    zero = BinarySolution(np.zeros(inst.n))
    passed = _close(result.value, 0) and result.solution == zero and not is_prime_pack(inst, zero)
    return passed, '0 at the non-prime empty pack', '{:g} at {}'.format(result.value, _vector(result.solution.x))


def _p1_extension(inst):
    extended = extend_to_prime_pack(inst, BinarySolution(np.zeros(inst.n)))
    value = evaluate_objective(inst, extended)
    return _vector(extended.x) == (1, 0, 0) and _close(value, -2), '(1, 0, 0) with objective -2', \
        '{} with objective {:g}'.format(_vector(extended.x), value)


def counterexample_records():
    """
    Build the corpus.

    :return: The list of CounterexampleRecord.
    """
    return [
        CounterexampleRecord('CE-T1', ce_t1(), [
            Claim('CE-T1.cover-objectives', 'evaluate_objective', _t1_cover_objectives),
            Claim('CE-T1.optimum', 'brute_force', _t1_optimum),
            Claim('CE-T1.prime-covers-suboptimal', 'is_prime_cover', _t1_prime_covers),
            Claim('CE-T1.reduction', 'reduce_to_prime_cover', _t1_reduction)
        ], 'Nonnegative linear costs, every prime cover is worse than the redundant full cover'),
        CounterexampleRecord('CE-D1', ce_d1(), [
            Claim('CE-D1.unbounded-lp', 'solve_lp', _d1_unbounded_lp),
            Claim('CE-D1.heuristic-status', 'run', _d1_heuristic)
        ], 'The first linearized subproblem is unbounded'),
        CounterexampleRecord('CE-D2', ce_d2(), [
            Claim('CE-D2.trace', 'run', _d2_trace),
            Claim('CE-D2.relaxation-gap', 'evaluate_objective', _d2_relaxation_gap),
            Claim('CE-D2.optimum', 'branch_and_bound', _d2_optimum)
        ], 'The repeated vertex is not a relaxation optimum'),
        CounterexampleRecord('CE-D3', ce_d3(), [
            Claim('CE-D3.heuristic-fractional-start', 'run', _d3_run_from((1, 0.5, 0, 0), (0, 1, 1, 1), 6)),
            Claim('CE-D3.heuristic-alternate-start', 'run', _d3_run_from((0, 1, 1, 1), (1, 0, 0, 0), 4)),
            Claim('CE-D3.optimum', 'brute_force', _d3_optimum),
            Claim('CE-D3.crossover', 'crossover_to_vertex', _d3_crossover),
            Claim('CE-D3.binary-linear', 'binary_linear_solve', _d3_binary_linear)
        ], 'The heuristic result depends on the starting point'),
        CounterexampleRecord('CE-P1', ce_p1(), [
            Claim('CE-P1.prime-packs', 'is_prime_pack', _p1_prime_packs),
            Claim('CE-P1.optimum', 'brute_force', _p1_optimum),
            Claim('CE-P1.extension', 'extend_to_prime_pack', _p1_extension)
        ], 'Every prime pack is worse than the empty pack')
    ]


def verify_counterexamples(records=None):
    """
    Check every claim of the corpus.

    :param records: The records to verify, the embedded corpus by default.
    :return: The list of ClaimResult sorted by claim id.
    """
    records = counterexample_records() if records is None else records
    results = [claim.verify(record.instance) for record in records for claim in record.claims]
    for result in results:
        if not result.passed:
            logger.warning("Claim %s failed: expected %s, got %s", result.claim_id, result.expected, result.actual)
    return sorted(results, key=lambda result: result.claim_id)
