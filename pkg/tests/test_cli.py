import json
import os

import numpy as np
import pytest

from cli import main, cmd_verify_paper, read_vector, UsageError, EXIT_OK, EXIT_FAILURE, EXIT_USAGE
from conftest import REPO_DIR, FIXTURES_DIR, COUNTEREXAMPLES_DIR
from data.counterexamples import counterexample_records
from data.parsers import load_native
from test_counterexamples import tampered_t1

CE_D3 = os.path.join(COUNTEREXAMPLES_DIR, 'ce-d3.qsp')


def test_solve_brute(capsys):
    assert main(['solve', '--instance', CE_D3, '--algo', 'brute']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'solution: 1 0 0 0' in out
    assert 'objective: 4' in out


def test_solve_bb_json(capsys):
    assert main(['solve', '--instance', CE_D3, '--algo', 'bb', '--json']) == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result['status'] == 'Optimal'
    assert result['objective'] == 4
    assert result['solution'] == [1, 0, 0, 0]


def test_solve_sa_from_file(tmp_path, capsys):
    x0 = tmp_path / 'x0.txt'
    x0.write_text('1 1/2 0 0\n')
    code = main(['solve', '--instance', CE_D3, '--algo', 'sa', '--x0', 'file', '--x0-file', str(x0), '--json'])
    assert code == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result['status'] == 'BinaryAtStep5'
    assert result['objective'] == 6
    assert result['solution'] == [0, 1, 1, 1]
    assert [entry['point'] for entry in result['trace']] == [[0, 1, 1, 1], [1, 0, 0, 0], [0, 1, 1, 1]]


def test_solve_sa_unbounded(capsys):
    code = main(['solve', '--instance', os.path.join(COUNTEREXAMPLES_DIR, 'ce-d1.qsp'), '--algo', 'sa', '--text'])
    assert code == EXIT_FAILURE
    assert 'status: UnboundedLP' in capsys.readouterr().out


def test_missing_file(tmp_path, capsys):
    code = main(['solve', '--instance', str(tmp_path / 'missing.qsp'), '--algo', 'brute'])
    assert code == EXIT_USAGE
    captured = capsys.readouterr()
    assert captured.out == ''
    assert 'missing.qsp' in captured.err


def test_malformed_file(capsys):
    code = main(['solve', '--instance', os.path.join(FIXTURES_DIR, 'bad-missing-d-row.qsp'), '--algo', 'brute'])
    assert code == EXIT_USAGE
    assert 'line 7' in capsys.readouterr().err


@pytest.mark.parametrize('extra', [
    ['--algo', 'brute', '--x0', 'greedy'],
    ['--algo', 'sa', '--x0', 'file'],
    ['--algo', 'sa', '--x0-file', 'x0.txt'],
    ['--algo', 'simplex'],
    ['--json', '--text']
])
def test_invalid_flags(extra, capsys):
    assert main(['solve', '--instance', CE_D3] + extra) == EXIT_USAGE
    assert capsys.readouterr().out == ''


def test_missing_config(tmp_path):
    assert main(['-c', str(tmp_path / 'none.yaml'), 'solve', '--instance', CE_D3]) == EXIT_USAGE


def test_read_vector():
    assert read_vector('1, 1/2 0\n0') == [1.0, 0.5, 0.0, 0.0]
    with pytest.raises(UsageError):
        read_vector('1 a')


def test_verify_paper(capsys):
    assert main(['verify-paper']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == '17 claims, 0 failed'
    assert all(line.startswith('PASS ') for line in lines[:-1])
    ids = [line.split()[1] for line in lines[:-1]]
    assert ids == sorted(ids)


def test_verify_paper_injected_fault(capsys):
    assert cmd_verify_paper(None, records=tampered_t1(counterexample_records())) == EXIT_FAILURE
    out = capsys.readouterr().out
    assert 'FAIL CE-T1.cover-objectives [evaluate_objective]' in out


def test_gen_is_deterministic(tmp_path):
    paths = [str(tmp_path / name) for name in ('a.qsp', 'b.qsp')]
    for path in paths:
        args = ['gen', '--n', '10', '--m', '8', '--density', '0.2', '--category', '2', '--seed', '7', '--out', path]
        assert main(args) == EXIT_OK
    with open(paths[0], 'rb') as a, open(paths[1], 'rb') as b:
        assert a.read() == b.read()
    inst = load_native(paths[0])
    assert (inst.m, inst.n) == (8, 10)
    assert np.all(inst.D >= 0)


def test_gen_batch(tmp_path, capsys):
    grid = os.path.join(REPO_DIR, 'econfigs', 'category1.yaml')
    assert main(['gen', '-e', grid, '--out-dir', str(tmp_path / 'batch')]) == EXIT_OK
    assert len(os.listdir(str(tmp_path / 'batch'))) == 20
    assert main(['gen', '-e', grid]) == EXIT_USAGE


def test_convert_triangle(tmp_path, capsys):
    out = str(tmp_path / 'triangle.qsp')
    assert main(['convert', '--from', 'dimacs', '--in', os.path.join(FIXTURES_DIR, 'triangle.col'),
                 '--out', out]) == EXIT_OK
    with open(out) as f:
        assert f.read() == 'QSP 3 3 cover\nc: 1 1 1\n1 1 0\n1 0 1\n0 1 1\n0 0 0\n0 0 0\n0 0 0\n'
    capsys.readouterr()
    assert main(['solve', '--instance', out, '--algo', 'brute', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['objective'] == 2


def test_convert_attach_quadratic(tmp_path):
    out = str(tmp_path / 'scp.qsp')
    args = ['convert', '--from', 'orlib', '--in', os.path.join(FIXTURES_DIR, 'scp-small.txt'), '--out', out,
            '--attach-quad', '--category', '2', '--seed', '3']
    assert main(args) == EXIT_OK
    inst = load_native(out)
    assert inst.A.tolist() == [[1, 1, 0, 0, 0], [0, 1, 1, 0, 1], [0, 0, 0, 1, 0]]
    assert np.all(inst.D >= 0) and inst.D.any()


def test_convert_flag_combination(tmp_path):
    args = ['convert', '--from', 'orlib', '--in', os.path.join(FIXTURES_DIR, 'scp-tiny.txt'),
            '--out', str(tmp_path / 'tiny.qsp'), '--seed', '3']
    assert main(args) == EXIT_USAGE
    assert not os.path.exists(str(tmp_path / 'tiny.qsp'))
