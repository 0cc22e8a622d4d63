"""
Time-matched comparison of the Saxena-Arora heuristic against the branch-and-bound oracle.

For every instance the heuristic is run first and its wall-clock time t1 is recorded; the oracle then runs once
with limit 2 t1 and its incumbent history gives the values available at t1 and at 2 t1.
"""
import io
import logging
import os
from dataclasses import dataclass, asdict
from multiprocessing import Pool

import pandas as pd
from ruamel.yaml import YAML

from data.generators import GeneratorConfig, generate, attach_quadratic
from data.parsers import load_native
from heuristics import saxena_arora
from solvers.exact import branch_and_bound
from utilities.math import negative_fraction
from utilities.utils import get_experiment_logger, close_logger, setup_mlflow, mlflow_linearize, load_grid, \
    plain_dict

BENCH_COLUMNS = ['problem', 'm', 'n', 'bound', 'sa_time_s', 'sa_value', 'oracle_t1', 'oracle_2t1', 'neg_D_pct']
ORACLE_FOOTER = "Oracle columns: the in-repo depth-first branch-and-bound stands in for a commercial 0-1 " \
                "quadratic solver, run with the heuristic's wall-clock time t1 and with 2 t1."
DEFAULT_TIME_FLOOR = 0.1

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    """
    One line of the comparison table. When the heuristic produces no cover sa_value holds its status instead, and
    an unexpected failure is written as 'error: <type>'.
    """
    problem: str
    m: int
    n: int
    bound: float = None
    sa_time_s: float = None
    sa_value: object = None
    oracle_t1: float = None
    oracle_2t1: float = None
    neg_D_pct: float = None

    def as_record(self):
        record = asdict(self)
        if self.sa_time_s is not None:
            record['sa_time_s'] = round(self.sa_time_s, 1)
        if self.neg_D_pct is not None:
            record['neg_D_pct'] = round(self.neg_D_pct, 2)
        return record

    @property
    def gap(self):
        """
        The relative gap of the heuristic value over the final oracle value, None if either is missing.
        """
        if not isinstance(self.sa_value, (int, float)) or self.oracle_2t1 is None:
            return None
        return (self.sa_value - self.oracle_2t1) / max(abs(self.oracle_2t1), 1e-9)


def bench_instance(inst, options, time_floor=DEFAULT_TIME_FLOOR):
    """
    Run the time-matched comparison on one instance.

    :param inst: A covering instance.
    :param options: The SaOptions of the heuristic.
    :param time_floor: The smallest t1 granted to the oracle, in seconds.
    :return: A BenchRow.
    """
    row = dict(problem=inst.name, m=inst.m, n=inst.n, neg_D_pct=negative_fraction(inst.D))
    try:
        report = saxena_arora.run(inst, options)
        t1 = max(report.wall_time, time_floor)
        row['sa_time_s'] = report.wall_time
        row['sa_value'] = report.objective if report.final_solution is not None else report.status.value
        result = branch_and_bound(inst, time_limit=2 * t1)
        row.update(bound=result.lower_bound, oracle_t1=result.value_at(t1), oracle_2t1=result.value)
    except Exception as e:
        logger.exception("Benchmark of %s failed", inst.name)
        row['sa_value'] = 'error: {}'.format(type(e).__name__)
    return BenchRow(**row)


def _bench_job(job):
    return bench_instance(*job)


class BenchRunner:
    """
    Runs the comparison over a batch of instances and writes the CSV and markdown tables.
    """

    def __init__(self, config, instances, provenance='', log_dir=None):
        """
        :param config: The configuration (EasyDict), with the 'saxena_arora', 'bench', 'n_workers' and 'tracking'
            sections.
        :param instances: The list of covering instances.
        :param provenance: The text of the header comment line of the CSV.
        :param log_dir: Folder of the run log, None to only log on the module logger.
        """
        if not instances:
            raise ValueError("No instances to benchmark")
        self.config = config
        self.instances = instances
        self.provenance = provenance
        self.options = saxena_arora.SaOptions.from_config(config)
        self.time_floor = config.bench.get('time_floor', DEFAULT_TIME_FLOOR)
        self.n_workers = config.get('n_workers', 1) or 1
        self.rows = []
        self.run_logger = get_experiment_logger(log_dir) if log_dir is not None else None
        if self.run_logger is not None:
            config_str = io.StringIO()
            YAML().dump(plain_dict(config), config_str)
            self.run_logger.info('CONFIG')
            self.run_logger.info(config_str.getvalue())

    def _log(self, message, *args):
        logger.info(message, *args)
        if self.run_logger is not None:
            self.run_logger.info(message, *args)

    def run(self):
        """
        Benchmark every instance, in parallel worker processes when n_workers > 1.

        :return: The list of BenchRow, in the order of the instances.
        """
        jobs = [(inst, self.options, self.time_floor) for inst in self.instances]
        if self.n_workers > 1 and len(jobs) > 1:
            with Pool(min(self.n_workers, len(jobs))) as pool:
                self.rows = pool.map(_bench_job, jobs)
        else:
            self.rows = [_bench_job(job) for job in jobs]
        for i, row in enumerate(self.rows):
            self._log("Instance %d/%d %s: sa=%s oracle_t1=%s oracle_2t1=%s", i + 1, len(self.rows), row.problem,
                      row.sa_value, row.oracle_t1, row.oracle_2t1)
        if self.config.tracking.get('enabled'):
            self._track()
        return self.rows

    def _track(self):
        import mlflow

        setup_mlflow(self.config.tracking.exp_name, self.config.tracking.mlflow_path)
        with mlflow.start_run(run_name='bench'):
            mlflow.log_params(mlflow_linearize(plain_dict(self.config)))
            for step, row in enumerate(self.rows):
                metrics = {k: v for k, v in row.as_record().items()
                           if k in ('sa_value', 'oracle_t1', 'oracle_2t1', 'bound') and isinstance(v, (int, float))}
                if row.gap is not None:
                    metrics['gap'] = row.gap
                mlflow.log_metrics(metrics, step=step)

    def to_frame(self):
        return pd.DataFrame([row.as_record() for row in self.rows], columns=BENCH_COLUMNS)

    def write_csv(self, path):
        """
        Write the CSV table, preceded by a '#' provenance line.
        """
        with open(path, 'w', newline='') as csv_file:
            csv_file.write('# {}\n'.format(self.provenance))
            self.to_frame().to_csv(csv_file, index=False)

    def write_markdown(self, path):
        with open(path, 'w') as md_file:
            md_file.write(self.to_frame().to_markdown(index=False))
            md_file.write('\n\n{}\n'.format(ORACLE_FOOTER))

    def close(self):
        if self.run_logger is not None:
            close_logger(self.run_logger)


def load_instances(directory, category=None, seed=0):
    """
    Load every native instance file of a directory, in name order. Instances without a quadratic part get one
    attached from the given category, with seed + position as seed.

    :param directory: The directory of '.qsp' files.
    :param category: The category of attached quadratic parts, None to keep linear instances as they are.
    :param seed: The base seed.
    :return: The list of instances.
    """
    names = sorted(name for name in os.listdir(directory) if name.endswith('.qsp'))
    instances = []
    for i, name in enumerate(names):
        inst = load_native(os.path.join(directory, name))
        if category is not None and not inst.D.any():
            inst = attach_quadratic(inst, GeneratorConfig(inst.n, inst.m, category=category, seed=seed + i))
        instances.append(inst)
    return instances


def generator_configs(grid_path, defaults=None):
    """
    Expand a grid file into generator configs, every combination of the listed values being one instance.

    :param grid_path: The YAML grid file, whose entries have a 'generator' section.
    :param defaults: The default generator parameters (the 'generator' section of the configuration).
    :return: The list of GeneratorConfig.
    """
    defaults = dict(defaults or {})
    configs = []
    for entry in load_grid(grid_path).values():
        params = {**defaults, **(entry.get('generator') or {})}
        configs.append(GeneratorConfig(**params))
    return configs


def batch_options(grid_path):
    """
    Get the heuristic options a grid file fixes for its whole batch, its top-level 'saxena_arora' section.

    :param grid_path: The YAML grid file.
    :return: A dict of SaOptions fields, empty when the file fixes none.
    """
    with open(grid_path, 'r') as grid_file:
        grid = YAML(typ='safe').load(grid_file.read()) or {}
    return dict(grid.get('saxena_arora') or {})


def generate_instances(grid_path, defaults=None):
    return [generate(config) for config in generator_configs(grid_path, defaults)]
