# mimo_dos/cli/main.py
import functools
import sys

import click
import pandas as pd

from ..errors import ConfigError, DosError, OutputError, SolverError
from ..protocols import CsirMode, DecisionRule
from ..utils.experiments import DIST_SELECTORS, SELF_TESTS, ExperimentConfig, ExperimentRunner, setup_logging

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4
EXIT_VERIFY = 5


def experiment_options(func):
    """Flags shared by every subcommand; unset flags fall back to the config file and defaults."""
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='YAML key/value config file'),
        click.option('--protocol', help="TG-CSIT, TG-CSIR, SG-CSIT, a comma list, or 'all'"),
        click.option('--snr-db', help="SNR in dB, or a from:to:step sweep"),
        click.option('--rho-n', type=float, help='Interference SNR (linear)'),
        click.option('--delta', type=float, help='Mini-slot to transmission duration ratio'),
        click.option('--target-ps', type=float, help='Per-group successful contention probability'),
        click.option('--links-per-group', type=int, help='Links per contention group'),
        click.option('--renewals', type=int, help='Transmissions per simulation run'),
        click.option('--seed', type=int, help='64-bit master seed'),
        click.option('--csir-mode', type=click.Choice([m.value for m in CsirMode])),
        click.option('--decision-rule', type=click.Choice([r.value for r in DecisionRule])),
        click.option('--out', 'output_path', type=click.Path(dir_okay=False), help='Output file'),
        click.option('--threshold-points', type=int),
        click.option('--threshold-span', type=float, help='Sweep up to span * x_max'),
        click.option('--num-batches', type=int, help='Batch-means batches'),
        click.option('--workers', type=int, help='Thread pool size'),
        click.option('--grid-points', type=int),
        click.option('--inner-points', type=int),
        click.option('--verify-samples', type=int),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _runner(config_path, **overrides) -> ExperimentRunner:
    return ExperimentRunner(ExperimentConfig.from_sources(config_path, overrides))


def _echo_table(table: pd.DataFrame) -> None:
    click.echo(table.to_string(index=False, float_format=lambda v: f"{v:.9g}"))


def reports_errors(func):
    """Map toolkit errors onto the documented exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            click.echo(f"Configuration error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except SolverError as e:
            click.echo(f"Solver error: {e}", err=True)
            sys.exit(EXIT_SOLVER)
        except OutputError as e:
            click.echo(f"I/O error: {e}", err=True)
            sys.exit(EXIT_IO)
        except DosError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
def cli():
    """Distributed opportunistic scheduling for 2x2 MIMO ad-hoc networks"""
    setup_logging()


@cli.command()
@experiment_options
@click.option('--self-test', type=click.Choice(SELF_TESTS), help='Solve a built-in oracle scenario')
@reports_errors
def solve(config_path, self_test, **overrides):
    """Solve the maximal throughput x_max."""
    table = _runner(config_path, **overrides).cmd_solve(self_test)
    _echo_table(table)


@cli.command('sweep-threshold')
@experiment_options
@reports_errors
def sweep_threshold(config_path, **overrides):
    """Simulated throughput over a grid of imposed thresholds."""
    table = _runner(config_path, **overrides).cmd_sweep_threshold()
    click.echo(f"Wrote {len(table)} rows")


@cli.command('sweep-snr')
@experiment_options
@reports_errors
def sweep_snr(config_path, **overrides):
    """Solved and simulated maximal throughput per protocol and SNR."""
    table = _runner(config_path, **overrides).cmd_sweep_snr()
    _echo_table(table)


@cli.command('dump-dist')
@experiment_options
@click.option('--which', type=click.Choice(DIST_SELECTORS), help='Rate variable to tabulate')
@reports_errors
def dump_dist(config_path, which, **overrides):
    """Write a tabulated rate CDF and its JSON sidecar."""
    dist = _runner(config_path, which=which, **overrides).cmd_dump_dist()
    click.echo(f"{dist.label}: {dist.grid.size} points up to {dist.upper_rate:.6f} nats, "
               f"mean {dist.mean():.6f}")


@cli.command()
@experiment_options
@reports_errors
def verify(config_path, **overrides):
    """Run the analytic-vs-Monte-Carlo oracle suite."""
    report = _runner(config_path, **overrides).cmd_verify()
    for check in report.checks:
        status = "PASS" if check.passed else ("FAIL" if check.hard else "SOFT-FAIL")
        click.echo(f"{status:9s} {check.name}: {check.value:.6g} ({check.target})")
    if not report.passed:
        click.echo("Verification failed", err=True)
        sys.exit(EXIT_VERIFY)
    click.echo("All checks passed")


def main():
    cli()


if __name__ == '__main__':
    main()
