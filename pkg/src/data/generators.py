"""
Random instance generation: integer linear costs in [3, 5] and quadratic costs D = B B^T with B an integer matrix,
so D is positive semi-definite by construction.
"""
import enum
from dataclasses import dataclass

import numpy as np

from core.model import Instance, Sense

DEFAULT_ROW_DENSITY = 0.05
COST_RANGE = (3, 5)
MAX_N = 10000


class Category(enum.IntEnum):
    PSD_MIXED_SIGN = 1
    PSD_NONNEGATIVE = 2

    @property
    def factor_range(self):
        """
        The closed range of the entries of B.
        """
        return (-10, 10) if self is Category.PSD_MIXED_SIGN else (0, 20)


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Parameters of a generated instance.

    :param n: The number of columns (subsets).
    :param m: The number of rows (elements).
    :param row_density: The probability of a 1 entry in A, rows without any 1 are drawn again.
    :param category: Category.PSD_MIXED_SIGN (B in [-10, 10]) or Category.PSD_NONNEGATIVE (B in [0, 20]).
    :param seed: The seed of the pseudo-random stream.
    """
    n: int
    m: int
    row_density: float = DEFAULT_ROW_DENSITY
    category: Category = Category.PSD_MIXED_SIGN
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'category', Category(int(self.category)))
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive, got n={} and m={}".format(self.n, self.m))
        if self.n > MAX_N:
            raise ValueError("n={} exceeds the largest supported dimension {}".format(self.n, MAX_N))
        if not 0.0 < self.row_density <= 1.0:
            raise ValueError("The row density must be in (0, 1], got {}".format(self.row_density))
        if self.seed < 0:
            raise ValueError("The seed must be nonnegative, got {}".format(self.seed))

    @property
    def name(self):
        return 'gen-c{}-n{}-m{}-s{}'.format(int(self.category), self.n, self.m, self.seed)


def _draw_costs(rng, n, category):
    c = rng.integers(COST_RANGE[0], COST_RANGE[1] + 1, size=n)
    low, high = category.factor_range
    B = rng.integers(low, high + 1, size=(n, n))
    return c.astype(np.float64), (B @ B.T).astype(np.float64)


def _draw_incidence(rng, m, n, density):
    A = rng.random((m, n)) < density
    empty = np.flatnonzero(~A.any(axis=1))
    while len(empty) > 0:
        A[empty] = rng.random((len(empty), n)) < density
        empty = empty[~A[empty].any(axis=1)]
    return A.astype(np.int8)


def generate(config):
    """
    Generate a covering instance. The costs are drawn first, then the incidence matrix, all from the stream seeded
    by config.seed, so equal configs give equal instances.

    :param config: The GeneratorConfig.
    :return: The Instance.
    """
    rng = np.random.default_rng(config.seed)
    c, D = _draw_costs(rng, config.n, config.category)
    A = _draw_incidence(rng, config.m, config.n, config.row_density)
    return Instance(A, c, D, sense=Sense.COVER, name=config.name)


def attach_quadratic(inst, config):
    """
    Replace the costs of a linear instance by generated ones, keeping its incidence matrix.

    :param inst: An instance with D = 0.
    :param config: The GeneratorConfig, its n must match the instance (m and row_density are ignored).
    :return: The new Instance.
    """
    if np.any(inst.D != 0):
        raise ValueError("The instance already has a quadratic part")
    if config.n != inst.n:
        raise ValueError("Dimension mismatch: config has n={} but the instance has n={}".format(config.n, inst.n))
    rng = np.random.default_rng(config.seed)
    c, D = _draw_costs(rng, inst.n, config.category)
    return inst.with_costs(c, D)


def generate_batch(configs):
    """
    Generate one instance per config.

    :param configs: An iterable of GeneratorConfig.
    :return: The list of instances.
    """
    return [generate(config) for config in configs]
