"""
Prime covers and prime packs.

A column j of a cover V is redundant if V - {j} is still a cover, a cover without redundant columns is prime.
A column j outside a pack V is redundant if V + {j} is still a pack (Ax <= 1), a pack without redundant columns
is prime.
"""
import enum

import numpy as np

from core.model import BinarySolution, Sense, evaluate_objective, is_feasible


class ReductionMode(enum.Enum):
    UNCONDITIONAL = 'unconditional'
    IMPROVING_ONLY = 'improving-only'


def _require(inst, x, sense):
    if inst.sense is not sense:
        raise ValueError("Expected a {} instance, got a {} instance".format(sense.value, inst.sense.value))
    if not isinstance(x, BinarySolution):
        x = BinarySolution(x)
    if x.n != inst.n:
        raise ValueError("Dimension mismatch: solution has length {} but the instance has n={}".format(x.n, inst.n))
    if not is_feasible(inst, x):
        raise ValueError("{} is not a {}".format(x, sense.value))
    return x


def removable_columns(inst, x):
    """
    Get the columns of the support of a cover that can be dropped leaving a cover.
    """
    coverage = inst.A @ x.x.astype(np.int64)
    return [j for j in sorted(x.support) if np.all(coverage[inst.A[:, j] == 1] >= 2)]


def addable_columns(inst, x):
    """
    Get the columns outside the support of a pack that can be added leaving a pack.
    """
    activity = inst.A @ x.x.astype(np.int64)
    return [j for j in range(inst.n) if x.x[j] == 0 and np.all(activity[inst.A[:, j] == 1] == 0)]


def is_prime_cover(inst, x):
    """
    Check whether a cover is prime, i.e. no column of its support can be removed leaving a cover.

    :param inst: A covering instance.
    :param x: A cover.
    :return: True iff x is a prime cover.
    """
    x = _require(inst, x, Sense.COVER)
    return len(removable_columns(inst, x)) == 0


def is_prime_pack(inst, x):
    """
    Check whether a pack is prime, i.e. no column outside its support can be added leaving a pack.

    :param inst: A packing instance.
    :param x: A pack.
    :return: True iff x is a prime pack.
    """
    x = _require(inst, x, Sense.PACK)
    return len(addable_columns(inst, x)) == 0


def prime_cover_steps(inst, x, mode=ReductionMode.UNCONDITIONAL):
    """
    Drop redundant columns in descending index order, yielding every intermediate cover (the input included).
    In improving-only mode a column is dropped only if the objective does not increase, and passes are repeated
    until no column can be dropped.

    :param inst: A covering instance.
    :param x: A cover.
    :param mode: The ReductionMode.
    :return: A generator of BinarySolution.
    """
    x = _require(inst, x, Sense.COVER)
    mode = ReductionMode(mode)
    yield x
    changed = True
    while changed:
        changed = False
        for j in sorted(x.support, reverse=True):
            candidate = x.with_entry(j, 0)
            if not is_feasible(inst, candidate):
                continue
            if mode is ReductionMode.IMPROVING_ONLY and \
                    evaluate_objective(inst, candidate) > evaluate_objective(inst, x):
                continue
            x = candidate
            changed = True
            yield x


def reduce_to_prime_cover(inst, x, mode=ReductionMode.UNCONDITIONAL):
    """
    Reduce a cover to a prime cover contained in it.

    :param inst: A covering instance.
    :param x: A cover.
    :param mode: ReductionMode.UNCONDITIONAL or ReductionMode.IMPROVING_ONLY.
    :return: The reduced BinarySolution.
    """
    for x in prime_cover_steps(inst, x, mode):
        pass
    return x


def prime_pack_steps(inst, x, mode=ReductionMode.UNCONDITIONAL):
    """
    Add redundant columns in ascending index order, yielding every intermediate pack (the input included).
    In improving-only mode a column is added only if the (maximized) objective does not decrease.

    :param inst: A packing instance.
    :param x: A pack.
    :param mode: The ReductionMode.
    :return: A generator of BinarySolution.
    """
    x = _require(inst, x, Sense.PACK)
    mode = ReductionMode(mode)
    yield x
    changed = True
    while changed:
        changed = False
        for j in range(inst.n):
            if x.x[j] == 1:
                continue
            candidate = x.with_entry(j, 1)
            if not is_feasible(inst, candidate):
                continue
            if mode is ReductionMode.IMPROVING_ONLY and \
                    evaluate_objective(inst, candidate) < evaluate_objective(inst, x):
                continue
            x = candidate
            changed = True
            yield x


def extend_to_prime_pack(inst, x, mode=ReductionMode.UNCONDITIONAL):
    """
    Extend a pack to a prime pack containing it.

    :param inst: A packing instance.
    :param x: A pack.
    :param mode: ReductionMode.UNCONDITIONAL or ReductionMode.IMPROVING_ONLY.
    :return: The extended BinarySolution.
    """
    for x in prime_pack_steps(inst, x, mode):
        pass
    return x
