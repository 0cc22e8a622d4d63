"""
Command-line entry point.

    python src/cli.py solve --instance datasets/counterexamples/ce-d3.qsp --algo sa --x0 file --x0-file x0.txt
    python src/cli.py gen --n 10 --m 8 --category 2 --seed 7 --out inst.qsp
    python src/cli.py convert --from dimacs --in graph.col --out graph.qsp --attach-quad --category 2 --seed 1
    python src/cli.py verify-paper
    python src/cli.py bench -e econfigs/category2.yaml --category 2 --out results.csv

Exit codes: 0 success, 1 solve failure or failed claim, 2 usage error.
"""
import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from data import parsers
from data.counterexamples import verify_counterexamples
from data.generators import GeneratorConfig, generate, attach_quadratic
from heuristics import saxena_arora
from solvers.exact import brute_force, branch_and_bound
from utilities.utils import load_config, nested_dict_update, plain_dict

CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, 'config.yaml')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _read_text(path):
    try:
        with open(path, 'r') as f:
            return f.read()
    except OSError as e:
        raise UsageError("cannot read {}: {}".format(path, e.strerror)) from None


def _write_text(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        f.write(text)


def _load_instance(path):
    name = os.path.splitext(os.path.basename(path))[0]
    return parsers.read_native(_read_text(path), name=name)


def read_vector(text):
    """
    Read a vector of numbers separated by whitespace or commas, fractions such as 1/2 allowed.
    """
    try:
        return [float(Fraction(token)) for token in text.replace(',', ' ').split()]
    except (ValueError, ZeroDivisionError):
        raise UsageError("malformed vector '{}'".format(text.strip())) from None


def _format_vector(x):
    return ' '.join(parsers.format_number(v) for v in x)


def _config(args, overrides=None):
    if not os.path.exists(args.config):
        raise UsageError("cannot read the configuration file {}".format(args.config))
    return load_config(args.config, overrides=overrides)


# solve

def cmd_solve(args):
    config = _config(args)
    inst = _load_instance(args.instance)
    if args.algo != 'sa' and (args.x0 is not None or args.x0_file is not None):
        raise UsageError("--x0 applies only to --algo sa")
    if args.x0_file is not None and args.x0 != 'file':
        raise UsageError("--x0-file requires --x0 file")

    if args.algo == 'sa':
        overrides = {'fallback_time_limit': args.time_limit}
        if args.x0 == 'file':
            if args.x0_file is None:
                raise UsageError("--x0 file requires --x0-file")
            overrides.update(x0_strategy=saxena_arora.X0Strategy.GIVEN, x0=read_vector(_read_text(args.x0_file)))
        elif args.x0 is not None:
            overrides['x0_strategy'] = args.x0
        try:
            options = saxena_arora.SaOptions.from_config(config, **overrides)
            report = saxena_arora.run(inst, options)
        except ValueError as e:
            raise UsageError(str(e)) from None
        result = {
            'instance': inst.name,
            'algorithm': 'sa',
            'status': report.status.value,
            'solution': None if report.final_solution is None else report.final_solution.x.tolist(),
            'objective': report.objective,
            'claimed_relaxation_point': None if report.claimed_relaxation_point is None
            else report.claimed_relaxation_point.x.tolist(),
            'claimed_objective': report.claimed_objective,
            'trace': [{'point': entry.point.x.tolist(), 'lp_objective': entry.objective.tolist(),
                       'lp_value': entry.value, 'lp_status': entry.status.value} for entry in report.trace],
            'wall_time': round(report.wall_time, 3)
        }
        succeeded = report.final_solution is not None
    else:
        try:
            if args.algo == 'brute':
                exact = brute_force(inst, max_n=config.exact.brute_force_max_n)
            else:
                time_limit = args.time_limit if args.time_limit is not None else config.exact.time_limit
                exact = branch_and_bound(inst, time_limit=time_limit)
        except ValueError as e:
            raise UsageError(str(e)) from None
        result = {
            'instance': inst.name,
            'algorithm': args.algo,
            'status': exact.status.value,
            'solution': exact.solution.x.tolist(),
            'objective': exact.value,
            'bound': exact.lower_bound,
            'nodes_explored': exact.nodes_explored
        }
        succeeded = True

    if args.json:
        print(json.dumps(result, indent=2))
    else:
        print('instance: {}'.format(result['instance']))
        print('algorithm: {}'.format(result['algorithm']))
        print('status: {}'.format(result['status']))
        if result['solution'] is not None:
            print('solution: {}'.format(_format_vector(result['solution'])))
            print('objective: {}'.format(parsers.format_number(result['objective'])))
        for i, entry in enumerate(result.get('trace', []), start=1):
            print('  LP {}: {} (value {}, {})'.format(i, _format_vector(entry['point']),
                                                     parsers.format_number(entry['lp_value']), entry['lp_status']))
        if 'bound' in result:
            print('bound: {}'.format(parsers.format_number(result['bound'])))
    return EXIT_OK if succeeded else EXIT_FAILURE


# gen / convert

def cmd_gen(args):
    config = _config(args)
    if args.experiments is not None:
        from bench import generator_configs

        if args.out_dir is None:
            raise UsageError("-e requires --out-dir")
        configs = generator_configs(args.experiments, config.generator)
        for gen_config in configs:
            path = os.path.join(args.out_dir, gen_config.name + '.qsp')
            _write_text(path, parsers.write_native(generate(gen_config)))
        print('wrote {} instances to {}'.format(len(configs), args.out_dir))
        return EXIT_OK

    if args.out is None:
        raise UsageError("gen requires --out (or -e with --out-dir)")
    params = {'n': args.n, 'm': args.m, 'row_density': args.density, 'category': args.category, 'seed': args.seed}
    if params['seed'] is None:
        params['seed'] = config.seed
    params = nested_dict_update(plain_dict(config.generator), {k: v for k, v in params.items() if v is not None})
    try:
        gen_config = GeneratorConfig(**params)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from None
    _write_text(args.out, parsers.write_native(generate(gen_config)))
    print('wrote {}'.format(args.out))
    return EXIT_OK


def cmd_convert(args):
    config = _config(args)
    name = os.path.splitext(os.path.basename(args.input))[0]
    inst = parsers.READERS[args.source](_read_text(args.input), name=name)
    if args.attach_quad:
        category = args.category if args.category is not None else config.generator.category
        seed = args.seed if args.seed is not None else config.seed
        inst = attach_quadratic(inst, GeneratorConfig(inst.n, inst.m, category=category, seed=seed))
    elif args.category is not None or args.seed is not None:
        raise UsageError("--category and --seed apply only with --attach-quad")
    _write_text(args.out, parsers.write_native(inst))
    print('wrote {}'.format(args.out))
    return EXIT_OK


# verify-paper

def cmd_verify_paper(args, records=None):
    results = verify_counterexamples(records)
    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        line = '{} {} [{}]'.format(status, result.claim_id, result.operation)
        if not result.passed:
            line += ' expected {} got {}'.format(result.expected, result.actual)
        print(line)
    failed = sum(not result.passed for result in results)
    print('{} claims, {} failed'.format(len(results), failed))
    return EXIT_OK if failed == 0 else EXIT_FAILURE


# bench

def cmd_bench(args):
    from bench import BenchRunner, load_instances, generate_instances, batch_options

    if (args.dir is None) == (args.experiments is None):
        raise UsageError("bench requires exactly one of --dir and -e")
    overrides = {'bench': {}, 'tracking': {}}
    if args.experiments is not None:
        if not os.path.isfile(args.experiments):
            raise UsageError("cannot read the grid file {}".format(args.experiments))
        overrides['saxena_arora'] = batch_options(args.experiments)
    if args.category is not None:
        overrides['bench']['category'] = args.category
        overrides['generator'] = {'category': args.category}
    if args.seed is not None:
        overrides['bench']['seed'] = args.seed
    if args.time_floor is not None:
        overrides['bench']['time_floor'] = args.time_floor
    if args.workers is not None:
        overrides['n_workers'] = args.workers
    if args.mlflow_path is not None:
        overrides['tracking'] = {'enabled': True, 'mlflow_path': args.mlflow_path}
    config = _config(args, overrides)

    if args.dir is not None:
        if not os.path.isdir(args.dir):
            raise UsageError("{} is not a directory".format(args.dir))
        instances = load_instances(args.dir, category=config.bench.category, seed=config.bench.seed)
    else:
        instances = generate_instances(args.experiments, config.generator)
    if not instances:
        raise UsageError("no instances found")

    provenance = 'bench category={} seed={} time_floor={} source={} config={}'.format(
        config.bench.category, config.bench.seed, config.bench.time_floor,
        args.dir if args.dir is not None else args.experiments, os.path.basename(args.config))
    runner = BenchRunner(config, instances, provenance=provenance, log_dir=args.log_dir)
    try:
        rows = runner.run()
        runner.write_csv(args.out)
        runner.write_markdown(args.markdown or os.path.splitext(args.out)[0] + '.md')
    finally:
        runner.close()
    print('wrote {} rows to {}'.format(len(rows), args.out))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='qsp', description="Quadratic set covering and packing toolkit")
    parser.add_argument("-c", "--config", dest='config', type=str, help="Config input file", default=CONFIG_PATH)
    parser.add_argument("-v", "--verbose", dest='verbose', action='count', default=0,
                        help="Increase the logging verbosity on the error stream")
    subparsers = parser.add_subparsers(dest='command', required=True)

    solve = subparsers.add_parser('solve', help="Solve an instance file")
    solve.add_argument("--instance", required=True, help="Native instance file")
    solve.add_argument("--algo", choices=['sa', 'bb', 'brute'], default='sa')
    solve.add_argument("--x0", choices=['all-ones', 'greedy', 'file'], default=None,
                       help="Starting point of the heuristic")
    solve.add_argument("--x0-file", dest='x0_file', default=None, help="File holding the starting point")
    solve.add_argument("--time-limit", dest='time_limit', type=float, default=None, help="Seconds")
    output = solve.add_mutually_exclusive_group()
    output.add_argument("--json", action='store_true')
    output.add_argument("--text", action='store_true')
    solve.set_defaults(handler=cmd_solve)

    gen = subparsers.add_parser('gen', help="Generate random instances")
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--density", type=float, default=None)
    gen.add_argument("--category", type=int, choices=[1, 2], default=None)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", default=None)
    gen.add_argument("-e", "--experiments", dest='experiments', default=None, help="Grid file of generator configs")
    gen.add_argument("--out-dir", dest='out_dir', default=None)
    gen.set_defaults(handler=cmd_gen)

    convert = subparsers.add_parser('convert', help="Convert a benchmark file to the native format")
    convert.add_argument("--from", dest='source', choices=['orlib', 'dimacs'], required=True)
    convert.add_argument("--in", dest='input', required=True)
    convert.add_argument("--out", required=True)
    convert.add_argument("--attach-quad", dest='attach_quad', action='store_true')
    convert.add_argument("--category", type=int, choices=[1, 2], default=None)
    convert.add_argument("--seed", type=int, default=None)
    convert.set_defaults(handler=cmd_convert)

    verify = subparsers.add_parser('verify-paper', help="Verify the embedded counterexample claims")
    verify.set_defaults(handler=cmd_verify_paper)

    bench = subparsers.add_parser('bench', help="Time-matched comparison of the heuristic and the oracle")
    bench.add_argument("--dir", default=None, help="Directory of native instance files")
    bench.add_argument("-e", "--experiments", dest='experiments', default=None, help="Grid file of generator configs")
    bench.add_argument("--category", type=int, choices=[1, 2], default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--out", required=True, help="CSV output file")
    bench.add_argument("--markdown", default=None, help="Markdown output file, next to the CSV by default")
    bench.add_argument("--time-floor", dest='time_floor', type=float, default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--log-dir", dest='log_dir', default=None)
    bench.add_argument("--mlflow-path", dest='mlflow_path', default=None)
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    logging.basicConfig(stream=sys.stderr, format='%(asctime)s %(message)s', datefmt='[%H:%M:%S]',
                        level=logging.WARNING - 10 * min(args.verbose, 2))
    try:
        return args.handler(args)
    except (UsageError, parsers.ParseError) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
