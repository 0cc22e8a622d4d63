import os

import numpy as np
import pytest

from conftest import FIXTURES_DIR
from core.model import analyze_structure, is_feasible, BinarySolution
from data.generators import GeneratorConfig, Category, generate, generate_batch, attach_quadratic
from data.parsers import parse_orlib_scp
from utilities.math import is_positive_semidefinite


@pytest.mark.parametrize('category', list(Category))
def test_generated_costs(category):
    for seed in range(10):
        inst = generate(GeneratorConfig(15, 10, row_density=0.2, category=category, seed=seed))
        assert np.all((inst.c >= 3) & (inst.c <= 5))
        assert np.array_equal(inst.c, np.round(inst.c))
        assert is_positive_semidefinite(inst.D)
        assert np.array_equal(inst.D, inst.D.T)
        assert analyze_structure(inst).psd
        if category is Category.PSD_NONNEGATIVE:
            assert np.all(inst.D >= 0)


def test_mixed_sign_has_negative_entries():
    inst = generate(GeneratorConfig(20, 10, category=Category.PSD_MIXED_SIGN, seed=1))
    assert np.any(inst.D < 0)


def test_rows_are_coverable():
    for seed in range(10):
        config = GeneratorConfig(30, 40, row_density=0.01, seed=seed)
        inst = generate(config)
        assert inst.A.shape == (40, 30)
        assert np.all(inst.A.sum(axis=1) >= 1)
        assert is_feasible(inst, BinarySolution(np.ones(30)))
        assert inst.name == 'gen-c1-n30-m40-s{}'.format(seed)


def test_seeded_generation():
    config = GeneratorConfig(12, 8, row_density=0.3, category=2, seed=42)
    assert generate(config) == generate(config)
    assert generate(config) != generate(GeneratorConfig(12, 8, row_density=0.3, category=2, seed=43))
    batch = generate_batch([config, GeneratorConfig(5, 3, seed=1)])
    assert [inst.n for inst in batch] == [12, 5]


@pytest.mark.parametrize('kwargs', [
    dict(n=0, m=3),
    dict(n=3, m=0),
    dict(n=3, m=3, row_density=0),
    dict(n=3, m=3, row_density=1.5),
    dict(n=3, m=3, seed=-1),
    dict(n=3, m=3, category=3),
    dict(n=20000, m=3)
])
def test_invalid_configs(kwargs):
    with pytest.raises(ValueError):
        GeneratorConfig(**kwargs)


def test_attach_quadratic():
    with open(os.path.join(FIXTURES_DIR, 'scp-small.txt')) as f:
        linear = parse_orlib_scp(f.read())
    config = GeneratorConfig(linear.n, 1, category=Category.PSD_NONNEGATIVE, seed=9)
    inst = attach_quadratic(linear, config)
    assert np.array_equal(inst.A, linear.A)
    assert np.all(inst.D >= 0)
    assert analyze_structure(inst).psd
    assert inst == attach_quadratic(linear, config)
    with pytest.raises(ValueError):
        attach_quadratic(inst, config)
    with pytest.raises(ValueError):
        attach_quadratic(linear, GeneratorConfig(linear.n + 1, 1, seed=9))
