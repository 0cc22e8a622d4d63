import numpy as np
import pytest

from conftest import random_instance
from core.model import Instance, Sense, BinarySolution, FractionalPoint, evaluate_objective, gradient, \
    is_feasible, analyze_structure
from utilities.math import is_positive_semidefinite, symmetrize_matrix, max_asymmetry, negative_fraction


def test_objective_ce_t1(ce_t1):
    assert evaluate_objective(ce_t1, BinarySolution([1, 1, 1])) == 0
    assert evaluate_objective(ce_t1, BinarySolution([1, 1, 0])) == 1
    assert evaluate_objective(ce_t1, BinarySolution([1, 0, 0])) == 2
    assert evaluate_objective(ce_t1, BinarySolution([0, 1, 1])) == 2


def test_objective_fractional(ce_d2):
    x = FractionalPoint(np.array([5, 2, 2, 2]) / 7.0)
    assert evaluate_objective(ce_d2, x) == pytest.approx(434 / 49, abs=1e-9)


def test_objective_uses_d_as_given():
    inst = Instance([[1, 1]], [1, 0], [[0, 3], [0, 0]])
    assert evaluate_objective(inst, BinarySolution([1, 1])) == 4


def test_gradient_at_trace_points(ce_d3):
    assert gradient(ce_d3, FractionalPoint([0, 1, 1, 1])).tolist() == [6, 4, 4, 4]
    assert gradient(ce_d3, FractionalPoint([1, 0, 0, 0])).tolist() == [8, 2, 2, 2]
    assert gradient(ce_d3, FractionalPoint([0.75, 0.25, 0.25, 0.25])).tolist() == [7.5, 2.5, 2.5, 2.5]


def test_gradient_zero_point_is_c(rng):
    inst = random_instance(rng, 3, 5)
    assert np.array_equal(gradient(inst, FractionalPoint(np.zeros(5))), inst.c)


def test_gradient_asymmetric_d():
    inst = Instance([[1, 1]], [0, 0], [[0, 2], [0, 0]])
    assert gradient(inst, FractionalPoint([1, 1])).tolist() == [2, 2]


def test_gradient_finite_differences(rng):
    h = 1e-5
    for _ in range(100):
        n = int(rng.integers(2, 9))
        inst = random_instance(rng, int(rng.integers(1, 6)), n)
        x = rng.random(n) * 2
        numeric = np.zeros(n)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            numeric[j] = (evaluate_objective(inst, x + e) - evaluate_objective(inst, x - e)) / (2 * h)
        analytic = gradient(inst, FractionalPoint(x))
        assert np.linalg.norm(numeric - analytic) <= 1e-6 * max(1.0, np.linalg.norm(analytic))


def test_feasibility_cover(ce_t1):
    assert is_feasible(ce_t1, BinarySolution([1, 0, 0]))
    assert is_feasible(ce_t1, BinarySolution([0, 1, 1]))
    assert not is_feasible(ce_t1, BinarySolution([0, 1, 0]))
    assert is_feasible(ce_t1, FractionalPoint([0.5, 0.5, 0.5]))
    assert not is_feasible(ce_t1, FractionalPoint([0.5, 0.4, 0.5]))


def test_feasibility_pack(ce_p1):
    assert is_feasible(ce_p1, BinarySolution([0, 0, 0]))
    assert is_feasible(ce_p1, BinarySolution([0, 1, 1]))
    assert not is_feasible(ce_p1, BinarySolution([1, 1, 0]))


def test_dimension_mismatch(ce_t1):
    with pytest.raises(ValueError):
        evaluate_objective(ce_t1, BinarySolution([1, 0]))
    with pytest.raises(ValueError):
        gradient(ce_t1, FractionalPoint([1, 0, 0, 0]))
    with pytest.raises(ValueError):
        is_feasible(ce_t1, BinarySolution([1, 1, 1, 1]))


@pytest.mark.parametrize('A, c, D', [
    ([[1, 2]], [0, 0], np.zeros((2, 2))),
    ([[1, 0], [0, 0]], [0, 0], np.zeros((2, 2))),
    ([[1, 1]], [0, 0, 0], np.zeros((2, 2))),
    ([[1, 1]], [0, 0], np.zeros((3, 3)))
])
def test_invalid_instances(A, c, D):
    with pytest.raises(ValueError):
        Instance(A, c, D)


def test_pack_allows_empty_rows():
    inst = Instance([[1, 0], [0, 0]], [0, 0], np.zeros((2, 2)), sense=Sense.PACK)
    assert inst.m == 2 and not inst.is_cover


def test_instance_is_immutable(ce_t1):
    with pytest.raises(ValueError):
        ce_t1.D[0, 0] = 5
    assert ce_t1 == ce_t1.with_costs(ce_t1.c, ce_t1.D)
    assert hash(ce_t1) == hash(ce_t1.with_costs(ce_t1.c, ce_t1.D))


def test_binary_solution():
    x = BinarySolution.from_support(4, [0, 2])
    assert x.x.tolist() == [1, 0, 1, 0]
    assert x.support == frozenset({0, 2})
    assert x.with_entry(1, 1) == BinarySolution([1, 1, 1, 0])
    with pytest.raises(ValueError):
        BinarySolution([0.5, 1])


def test_fractional_point():
    assert FractionalPoint([1, 0.4]).round() == BinarySolution([1, 0])
    assert FractionalPoint([1.0, 0.0]).is_binary()
    assert not FractionalPoint([1.0, 0.5]).is_binary()
    with pytest.raises(ValueError):
        FractionalPoint([-0.1, 1])


def test_analyze_structure(ce_t1):
    report = analyze_structure(ce_t1)
    assert report.symmetric and report.psd and report.nonnegative_c and not report.nonnegative_D


def test_analyze_structure_symmetrizes():
    report = analyze_structure(Instance([[1, 1]], [1, 1], [[1, 2], [0, 1]]))
    assert not report.symmetric
    assert report.psd
    assert report.nonnegative_D


def test_psd_check(rng):
    for _ in range(20):
        B = rng.integers(-10, 11, size=(6, 6))
        assert is_positive_semidefinite(B @ B.T)
    assert not is_positive_semidefinite(np.diag([1.0, -1e-3, 2.0]))
    assert not is_positive_semidefinite([[0, 1], [1, 0]])
    assert is_positive_semidefinite(np.zeros((3, 3)))


def test_matrix_helpers():
    x = np.array([[1, 2], [0, 1]])
    assert symmetrize_matrix(x).tolist() == [[1, 1], [1, 1]]
    assert max_asymmetry(x) == 2
    assert negative_fraction([[-1, 0], [2, -3]]) == 50
