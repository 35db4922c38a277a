import pytest

from pipeline.export_engine import CSV_HEADER, read_csv
from pipeline.state_manager import StateManager
from run import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main


def printed_value(output: str, label: str) -> float:
	for line in output.splitlines():
		if line.startswith(label + ' '):
			return float(line.split()[-2 if line.endswith('Hz') or line.endswith('ms') else -1])
	raise AssertionError(f'{label!r} not printed')


@pytest.fixture
def config_path(tmp_path, base_config_text):
	path = tmp_path / 'run.toml'
	path.write_text(base_config_text)
	return path


class TestParams:
	def test_rubidium_ratios(self, scenarios_dir, capsys):
		assert main(['params', '--config', str(scenarios_dir / 'excitation_number.toml')]) == EXIT_OK
		output = capsys.readouterr().out
		assert printed_value(output, 'g/omega') == pytest.approx(6.53, rel=0.02)
		assert printed_value(output, 'trap period T') == pytest.approx(1e3 / 346.0, rel=1e-5)

	def test_fluxonium_section(self, scenarios_dir, capsys):
		assert main(['params', '--config', str(scenarios_dir / 'fluxonium.toml')]) == EXIT_OK
		output = capsys.readouterr().out
		assert printed_value(output, 'fluxonium g/omega') == pytest.approx(1.91, rel=0.03)
		assert printed_value(output, 'fluxonium omega_q/omega') == pytest.approx(2.42, rel=0.03)

	def test_fluxonium_command(self, scenarios_dir, capsys):
		assert main(['fluxonium', '--config', str(scenarios_dir / 'excitation_number.toml')]) == EXIT_OK
		output = capsys.readouterr().out
		assert 'equivalent to the [system] section' in output
		assert printed_value(output, 'omega/2pi') == pytest.approx(346.0, rel=1e-9)


class TestRun:
	def test_writes_csv_and_provenance(self, config_path, tmp_path):
		csv_path = tmp_path / 'out' / 'run.csv'
		assert main(['run', '--config', str(config_path), '--out', str(csv_path)]) == EXIT_OK

		table = read_csv(csv_path)
		assert table.models() == ['pqrm', 'qrm']
		assert len(table.rows) == 10

		provenance = StateManager(csv_path).load_provenance()
		assert provenance['code_version'] == '0.1.0'
		assert len(provenance['config_hash']) == 64
		assert 'trap_freq_hz = 346.0' in provenance['config']

	def test_rerun_is_byte_identical(self, config_path, tmp_path):
		a, b = tmp_path / 'a.csv', tmp_path / 'b.csv'
		assert main(['run', '--config', str(config_path), '--out', str(a)]) == EXIT_OK
		assert main(['run', '--config', str(config_path), '--out', str(b)]) == EXIT_OK
		assert a.read_bytes() == b.read_bytes()

	def test_plot_from_run(self, config_path, tmp_path):
		csv_path = tmp_path / 'run.csv'
		svg_path = tmp_path / 'run.svg'
		assert main(['run', '--config', str(config_path), '--out', str(csv_path)]) == EXIT_OK
		assert main(['plot', str(csv_path), '--out', str(svg_path), '--observable', 'mean_x_m']) == EXIT_OK
		assert svg_path.read_text().lstrip().startswith('<?xml')

	def test_sweep(self, config_path, tmp_path):
		csv_path = tmp_path / 'sweep.csv'
		argv = ['sweep', '--config', str(config_path), '--out', str(csv_path), '--override', 'scenario.omega_q_hz=[0.0, 100.0]']
		assert main(argv) == EXIT_OK

		table = read_csv(csv_path)
		assert table.models() == ['pqrm_diff']
		assert table.splittings() == ['0', '100']
		assert len(table.rows) == 10


class TestExitCodes:
	def test_unknown_key(self, config_path, tmp_path):
		argv = ['run', '--config', str(config_path), '--out', str(tmp_path / 'x.csv'), '--override', 'grid.foo=1']
		assert main(argv) == EXIT_CONFIG
		assert not (tmp_path / 'x.csv').exists()

	def test_missing_config(self):
		assert main(['run']) == EXIT_CONFIG

	def test_bad_trap_frequency(self, config_path):
		assert main(['params', '--config', str(config_path), '--override', 'system.trap_freq_hz=0']) == EXIT_CONFIG

	def test_numerical_failure(self, config_path, tmp_path):
		argv = [
			'run',
			'--config',
			str(config_path),
			'--out',
			str(tmp_path / 'x.csv'),
			'--override',
			'grid.n_points=256',
			'--override',
			'grid.length_um=2.0',
			'--override',
			'scenario.models=["grid"]',
		]
		assert main(argv) == EXIT_NUMERICAL
		assert not (tmp_path / 'x.csv').exists()

	def test_unresolved_grid(self, config_path, tmp_path):
		argv = ['run', '--config', str(config_path), '--out', str(tmp_path / 'x.csv'), '--override', 'grid.n_points=64']
		assert main(argv) == EXIT_CONFIG
		assert not (tmp_path / 'x.csv').exists()

	def test_plot_of_empty_csv(self, tmp_path):
		csv_path = tmp_path / 'empty.csv'
		csv_path.write_text(','.join(CSV_HEADER) + '\n')
		assert main(['plot', str(csv_path)]) == EXIT_CONFIG
		assert not csv_path.with_suffix('.svg').exists()


def test_params_prints_lattice_free_peaks(scenarios_dir, capsys):
	assert main(['params', '--config', str(scenarios_dir / 'excitation_number.toml')]) == EXIT_OK
	output = capsys.readouterr().out
	ratio = printed_value(output, 'g/omega')
	assert printed_value(output, 'peak <N>, pqrm (omega_q=0)') == pytest.approx(2.0 * ratio**2, rel=1e-5)
	assert printed_value(output, 'peak <N>, qrm (omega_q=0)') == pytest.approx(4.0 * ratio**2, rel=1e-5)
