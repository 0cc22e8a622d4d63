import numpy as np
import pytest

from core.model import Instance, Sense, BinarySolution, evaluate_objective, is_feasible
from core.prime import ReductionMode, is_prime_cover, is_prime_pack, reduce_to_prime_cover, extend_to_prime_pack, \
    prime_cover_steps, prime_pack_steps
from data.generators import GeneratorConfig, generate, Category
from solvers.exact import brute_force


def test_is_prime_cover(ce_t1):
    assert is_prime_cover(ce_t1, BinarySolution([1, 0, 0]))
    assert is_prime_cover(ce_t1, BinarySolution([0, 1, 1]))
    assert not is_prime_cover(ce_t1, BinarySolution([1, 1, 0]))
    assert not is_prime_cover(ce_t1, BinarySolution([1, 1, 1]))


def test_single_column_is_prime():
    inst = Instance([[1]], [1], [[0]])
    assert is_prime_cover(inst, BinarySolution([1]))


def test_prime_cover_requires_cover(ce_t1, ce_p1):
    with pytest.raises(ValueError):
        is_prime_cover(ce_t1, BinarySolution([0, 1, 0]))
    with pytest.raises(ValueError):
        is_prime_cover(ce_p1, BinarySolution([1, 0, 0]))
    with pytest.raises(ValueError):
        reduce_to_prime_cover(ce_t1, BinarySolution([0, 0, 0]))


def test_reduce_ce_t1(ce_t1):
    reduced = reduce_to_prime_cover(ce_t1, BinarySolution([1, 1, 1]))
    assert reduced == BinarySolution([1, 0, 0])
    assert evaluate_objective(ce_t1, reduced) == 2


def test_reduce_ce_d3(ce_d3):
    x = BinarySolution([1, 1, 0, 0])
    assert evaluate_objective(ce_d3, x) == 8
    reduced = reduce_to_prime_cover(ce_d3, x)
    assert reduced == BinarySolution([1, 0, 0, 0])
    assert evaluate_objective(ce_d3, reduced) == 4


def test_reduce_prime_cover_is_identity(ce_t1):
    assert reduce_to_prime_cover(ce_t1, BinarySolution([0, 1, 1])) == BinarySolution([0, 1, 1])


def test_reduction_steps_stay_feasible(rng):
    for seed in range(30):
        inst = generate(GeneratorConfig(8, 6, row_density=0.3, category=Category.PSD_MIXED_SIGN, seed=seed))
        steps = list(prime_cover_steps(inst, BinarySolution(np.ones(inst.n))))
        assert steps[0] == BinarySolution(np.ones(inst.n))
        for previous, current in zip(steps, steps[1:]):
            assert is_feasible(inst, current)
            assert current.support < previous.support
        assert is_prime_cover(inst, steps[-1])


def test_improving_only_reduction_keeps_redundant_optimum(ce_t1):
    x = BinarySolution([1, 1, 1])
    assert reduce_to_prime_cover(ce_t1, x, ReductionMode.IMPROVING_ONLY) == x


def test_improving_only_never_worsens(rng):
    for seed in range(30):
        inst = generate(GeneratorConfig(8, 6, row_density=0.3, category=Category.PSD_MIXED_SIGN, seed=seed))
        x = BinarySolution(np.ones(inst.n))
        reduced = reduce_to_prime_cover(inst, x, 'improving-only')
        assert is_feasible(inst, reduced)
        assert evaluate_objective(inst, reduced) <= evaluate_objective(inst, x)


def test_prime_packs(ce_p1):
    assert is_prime_pack(ce_p1, BinarySolution([1, 0, 0]))
    assert is_prime_pack(ce_p1, BinarySolution([0, 1, 1]))
    assert not is_prime_pack(ce_p1, BinarySolution([0, 0, 0]))
    assert not is_prime_pack(ce_p1, BinarySolution([0, 1, 0]))
    with pytest.raises(ValueError):
        is_prime_pack(ce_p1, BinarySolution([1, 1, 0]))


def test_extend_ce_p1(ce_p1):
    extended = extend_to_prime_pack(ce_p1, BinarySolution([0, 0, 0]))
    assert extended == BinarySolution([1, 0, 0])
    assert evaluate_objective(ce_p1, extended) == -2
    assert extend_to_prime_pack(ce_p1, BinarySolution([0, 0, 0]), ReductionMode.IMPROVING_ONLY) == \
        BinarySolution([0, 0, 0])


def test_extension_steps_stay_feasible(ce_p1):
    steps = list(prime_pack_steps(ce_p1, BinarySolution([0, 1, 0])))
    assert steps == [BinarySolution([0, 1, 0]), BinarySolution([0, 1, 1])]
    assert all(is_feasible(ce_p1, x) for x in steps)


def _nonnegative_instances(count):
    rng = np.random.default_rng(7)
    for seed in range(count):
        n = int(rng.integers(3, 13))
        m = int(rng.integers(1, 9))
        yield generate(GeneratorConfig(n, m, row_density=0.35, category=Category.PSD_NONNEGATIVE, seed=seed))


def test_prime_cover_optimality_on_nonnegative_data():
    for inst in _nonnegative_instances(200):
        optimum = brute_force(inst)
        start = BinarySolution(np.ones(inst.n))
        reduced = reduce_to_prime_cover(inst, start)
        assert evaluate_objective(inst, reduced) <= evaluate_objective(inst, start)

        # Reducing an optimal cover gives a prime cover with the optimal value
        prime_optimum = reduce_to_prime_cover(inst, optimum.solution)
        assert is_prime_cover(inst, prime_optimum)
        assert evaluate_objective(inst, prime_optimum) == pytest.approx(optimum.value, abs=1e-9)


def test_prime_pack_optimality_on_nonnegative_data():
    for generated in _nonnegative_instances(200):
        inst = Instance(generated.A, generated.c, generated.D, sense=Sense.PACK)
        optimum = brute_force(inst)
        start = BinarySolution(np.zeros(inst.n))
        extended = extend_to_prime_pack(inst, start)
        assert evaluate_objective(inst, extended) >= evaluate_objective(inst, start)

        prime_optimum = extend_to_prime_pack(inst, optimum.solution)
        assert is_prime_pack(inst, prime_optimum)
        assert evaluate_objective(inst, prime_optimum) == pytest.approx(optimum.value, abs=1e-9)
