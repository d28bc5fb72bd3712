# mimo_dos/tests/test_experiments.py
import hashlib
import json
import math

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from mimo_dos.cli.main import EXIT_CONFIG, EXIT_VERIFY, cli
from mimo_dos.errors import ConfigError, OutputError
from mimo_dos.protocols import CsirMode, ProtocolKind
from mimo_dos.utils.experiments import (
    ExperimentConfig,
    ExperimentRunner,
    lambert_w_by_bisection,
    parse_protocols,
    parse_snr_grid,
)
from mimo_dos.utils.file_handler import ResultWriter


@pytest.fixture
def runner():
    return CliRunner()


def test_snr_grid_parsing():
    assert parse_snr_grid('0:25:5') == (0.0, 5.0, 10.0, 15.0, 20.0, 25.0)
    assert parse_snr_grid('10') == (10.0,)
    assert parse_snr_grid(12.5) == (12.5,)
    assert parse_snr_grid('0:1:0.1')[-1] == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        parse_snr_grid('5:0:1')
    with pytest.raises(ConfigError):
        parse_snr_grid('a:b')


def test_protocol_parsing():
    assert parse_protocols('all') == tuple(ProtocolKind)
    assert parse_protocols('tg-csit, SG_CSIT') == (ProtocolKind.TG_CSIT, ProtocolKind.SG_CSIT)
    with pytest.raises(ConfigError):
        parse_protocols('FOO')


def test_defaults_from_packaged_config():
    config = ExperimentConfig.from_sources()
    assert config.rho_n == 1.0
    assert config.delta == 0.1
    assert config.target_ps == pytest.approx(math.exp(-1.0))
    assert config.csir_mode is CsirMode.PAPER
    assert len(config.protocol) == 3


def test_precedence_file_then_flags(tmp_path):
    path = tmp_path / 'run.yaml'
    path.write_text("delta: 0.2\nseed: 7\n")
    config = ExperimentConfig.from_sources(path, {'seed': 9, 'rho_n': None})
    assert config.delta == 0.2
    assert config.seed == 9
    assert config.rho_n == 1.0


def test_invalid_value_reports_field_and_line(tmp_path):
    path = tmp_path / 'bad.yaml'
    path.write_text("seed: 3\ndelta: -1\n")
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_sources(path)
    assert excinfo.value.field == 'delta'
    assert excinfo.value.line == 2


def test_unknown_key_reports_line(tmp_path):
    path = tmp_path / 'bad.yaml'
    path.write_text("delta: 0.1\n\nbogus: 1\n")
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_sources(path)
    assert excinfo.value.field == 'bogus'
    assert excinfo.value.line == 3


def test_broken_yaml(tmp_path):
    path = tmp_path / 'broken.yaml'
    path.write_text("delta: [0.1\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(path)


def test_non_integer_renewals_rejected():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(overrides={'renewals': 1.5})


def test_lambert_w_oracle():
    w = lambert_w_by_bisection(10.0)
    assert w * math.exp(w) == pytest.approx(10.0, rel=1e-12)
    assert w == pytest.approx(1.745528, abs=1e-6)


def test_self_test_solve():
    table = ExperimentRunner(ExperimentConfig.from_sources()).cmd_solve('exponential')
    assert table['x_max'].iloc[0] == pytest.approx(lambert_w_by_bisection(10.0), abs=1e-6)


def test_writer_is_atomic_and_checksummed(tmp_path):
    writer = ResultWriter()
    frame = pd.DataFrame({'a': [1.0 / 3.0, 2.0], 'b': ['x', 'y']})
    result = writer.write_csv(frame, tmp_path / 'out.csv', sidecar={'note': 'test'})
    assert (tmp_path / 'out.csv').read_text() == "a,b\n0.333333333,x\n2,y\n"
    assert writer.verify(result)
    sidecar = json.loads((tmp_path / 'out.json').read_text())
    assert sidecar['csv_sha256'] == hashlib.sha256((tmp_path / 'out.csv').read_bytes()).hexdigest()
    assert sorted(p.name for p in tmp_path.iterdir()) == ['out.csv', 'out.json']


def test_writer_detects_modified_file(tmp_path):
    writer = ResultWriter()
    result = writer.write_csv(pd.DataFrame({'a': [1.0]}), tmp_path / 'out.csv')
    (tmp_path / 'out.csv').write_text("a\n2\n")
    assert not writer.verify(result)
    (tmp_path / 'out.csv').unlink()
    with pytest.raises(OutputError):
        writer.verify(result)


def test_writer_reports_io_errors(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('')
    with pytest.raises(OutputError):
        ResultWriter().write_csv(pd.DataFrame({'a': [1]}), blocker / 'out.csv')


def test_cli_solve_self_test(runner):
    result = runner.invoke(cli, ['solve', '--self-test', 'exponential'])
    assert result.exit_code == 0, result.output
    assert '1.74552' in result.output


def test_cli_solve_protocols(runner, tmp_path):
    out = tmp_path / 'solve.json'
    result = runner.invoke(cli, ['solve', '--snr-db', '10', '--grid-points', '512', '--out', str(out)])
    assert result.exit_code == 0, result.output
    solutions = json.loads(out.read_text())['solutions']
    assert len(solutions) == 3
    assert all(s['x_max'] > 0 for s in solutions)


def test_cli_rejects_bad_delta(runner, tmp_path):
    out = tmp_path / 'never.csv'
    result = runner.invoke(cli, ['sweep-snr', '--delta', '0', '--out', str(out)])
    assert result.exit_code == EXIT_CONFIG
    assert not out.exists()


def test_cli_requires_output(runner):
    result = runner.invoke(cli, ['dump-dist', '--snr-db', '10'])
    assert result.exit_code == EXIT_CONFIG


def test_cli_dump_dist(runner, tmp_path):
    out = tmp_path / 'sl.csv'
    result = runner.invoke(cli, ['dump-dist', '--which', 'sl-csir', '--csir-mode', 'physical',
                                 '--snr-db', '10', '--out', str(out)])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert list(frame.columns) == ['rate_nats', 'cdf']
    assert np.all(np.diff(frame['cdf']) >= 0)
    assert frame['cdf'].iloc[-1] >= 1 - 1e-6
    sidecar = json.loads(out.with_suffix('.json').read_text())
    assert sidecar['distribution']['tail_mass'] == pytest.approx(1e-6)
    assert sidecar['csv_sha256'] == hashlib.sha256(out.read_bytes()).hexdigest()


def test_cli_dump_dist_needs_single_snr(runner, tmp_path):
    result = runner.invoke(cli, ['dump-dist', '--snr-db', '0:10:5', '--out', str(tmp_path / 'x.csv')])
    assert result.exit_code == EXIT_CONFIG


def test_cli_threshold_sweep_is_deterministic(runner, tmp_path):
    args = ['sweep-threshold', '--protocol', 'SG-CSIT', '--snr-db', '10', '--renewals', '2000',
            '--threshold-points', '5', '--grid-points', '512', '--seed', '11']
    first, second = tmp_path / 'a.csv', tmp_path / 'b' / 'a.csv'
    assert runner.invoke(cli, args + ['--out', str(first)]).exit_code == 0
    assert runner.invoke(cli, args + ['--workers', '1', '--out', str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    frame = pd.read_csv(first)
    assert list(frame.columns) == ['protocol', 'snr_db', 'threshold_nats', 'throughput_nats', 'ci95', 'x_max']
    assert len(frame) == 5


def test_cli_snr_sweep(runner, tmp_path):
    out = tmp_path / 'snr.csv'
    result = runner.invoke(cli, ['sweep-snr', '--snr-db', '0:20:20', '--renewals', '2000', '--out', str(out)])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert list(frame.columns) == ['protocol', 'snr_db', 'x_max', 'sim_throughput', 'ci95', 'ratio_vs_sg_csit']
    assert set(frame['protocol']) == {'TG-CSIT', 'TG-CSIR', 'SG-CSIT'}
    assert sorted(set(frame['snr_db'])) == [0, 20]
    assert (frame['x_max'] > 0).all()


def test_cli_verify_writes_report(runner, tmp_path):
    out = tmp_path / 'verify.json'
    result = runner.invoke(cli, ['verify', '--verify-samples', '20000', '--renewals', '5000',
                                 '--grid-points', '1024', '--out', str(out)])
    assert result.exit_code in (0, EXIT_VERIFY), result.output
    report = json.loads(out.read_text())
    names = [check['name'] for check in report['checks']]
    assert 'self-test x_max - W(10)' in names
    assert any(name.startswith('KS sl-csit') for name in names)
    assert report['passed'] == (result.exit_code == 0)

    # sample-free checks must pass at any run size
    outcome = {check['name']: check['passed'] for check in report['checks']}
    for name in ('self-test x_max - W(10)', 'joint eigenvalue pdf mass - 1', 'trace identity (max rel. error)',
                 'determinant identity (max rel. error)', 'success_prob {0.3, 0.2, 0.1} - 0.398',
                 'min TG-CSIT - SG-CSIT over 0..25 dB', 'TG-CSIT / SG-CSIT @ 20 dB'):
        assert outcome[name], name
