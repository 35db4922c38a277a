import math
import sys
import tomllib
from argparse import ArgumentParser, Namespace
from dataclasses import replace
from datetime import UTC, datetime
from pathlib import Path

from config.settings import settings
from models.observables import ModelTag
from models.scenario import Provenance
from orchestrator import ScenarioRunner
from physics.constants import HBAR
from physics.errors import NumericalValidityError
from physics.oracles import displaced_oscillator_excitation, folded_trajectory
from physics.param_engine import atomic_to_fluxonium, derive, fluxonium_map, rabi_triple
from pipeline.config_validator import (
	ConfigError,
	config_hash,
	dump_config,
	load_config,
	to_fluxonium,
	to_params,
	to_scenario,
)
from pipeline.export_engine import CsvFormatError, ExportEngine, plot_csv
from pipeline.state_manager import StateManager
from utils.logger import logger, setup_logger

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load(args: Namespace):
	if not args.config:
		raise ConfigError('--config is required for this command')
	return load_config(args.config, args.override)


def _output_path(args: Namespace, configured: str) -> Path:
	return Path(args.out) if args.out else Path(configured)


def cmd_params(args: Namespace) -> int:
	config = _load(args)
	params = to_params(config)
	derived = derive(params)

	print(f'{"trap frequency omega/2pi":<28} {params.trap_freq_hz:>14.6g} Hz')
	print(f'{"qubit splitting omega_q/2pi":<28} {params.qubit_split_hz:>14.6g} Hz')
	print(f'{"coupling g/2pi":<28} {derived.coupling / (2.0 * math.pi):>14.6g} Hz')
	print(f'{"g/omega":<28} {derived.coupling_ratio:>14.6g}')
	print(f'{"omega_q/omega":<28} {derived.qubit_ratio:>14.6g}')
	print(f'{"trap period T":<28} {derived.trap_period * 1e3:>14.6g} ms')
	print(f'{"recoil energy E_r/h":<28} {derived.recoil_energy / (2.0 * math.pi * HBAR):>14.6g} Hz')

	quarter, half = 0.25 * derived.trap_period, 0.5 * derived.trap_period
	pqrm_peak = folded_trajectory([quarter], params).excitation_number[0]
	qrm_peak = displaced_oscillator_excitation([half], params)[0]
	print(f'{"peak <N>, pqrm (omega_q=0)":<28} {pqrm_peak:>14.6g}')
	print(f'{"peak <N>, qrm (omega_q=0)":<28} {qrm_peak:>14.6g}')

	flux = to_fluxonium(config)
	if flux is not None:
		triple = fluxonium_map(flux)
		print(f'{"fluxonium g/omega":<28} {triple.coupling_ratio:>14.6g}')
		print(f'{"fluxonium omega_q/omega":<28} {triple.qubit_ratio:>14.6g}')
	return EXIT_OK


def cmd_fluxonium(args: Namespace) -> int:
	config = _load(args)
	flux = to_fluxonium(config)
	scale = 2.0 * math.pi * 1e9

	if flux is None:
		params = to_params(config)
		flux = atomic_to_fluxonium(params)
		triple = rabi_triple(params)
		print('Fluxonium energies equivalent to the [system] section:')
	else:
		triple = fluxonium_map(flux)
		print('Atomic parameters equivalent to the [fluxonium] section:')

	print(f'{"E_C/h":<20} {flux.E_C / scale:>14.6g} GHz')
	print(f'{"E_J/h":<20} {flux.E_J / scale:>14.6g} GHz')
	print(f'{"E_L/h":<20} {flux.E_L / scale:>14.6g} GHz')
	print(f'{"omega/2pi":<20} {triple.trap_freq / (2.0 * math.pi):>14.6g} Hz')
	print(f'{"omega_q/2pi":<20} {triple.qubit_split / (2.0 * math.pi):>14.6g} Hz')
	print(f'{"g/omega":<20} {triple.coupling_ratio:>14.6g}')
	print(f'{"omega_q/omega":<20} {triple.qubit_ratio:>14.6g}')
	return EXIT_OK


def _provenance(config, started_at: str, threads: int) -> Provenance:
	return Provenance(
		config_hash=config_hash(config),
		code_version=settings.APP_VERSION,
		started_at=started_at,
		finished_at=datetime.now(UTC).isoformat(),
		threads=threads,
	)


def _maybe_plot(config, csv_path: Path, observable: str) -> None:
	if config.output.svg_path:
		plot_csv(csv_path, config.output.svg_path, observable, trap_freq_hz=config.system.trap_freq_hz)


def cmd_run(args: Namespace) -> int:
	config = _load(args)
	scenario = to_scenario(config)
	threads = args.threads or settings.THREADS
	started_at = datetime.now(UTC).isoformat()

	logger.info('=' * 60)
	logger.info(f'RUN: {scenario.scenario_id.value} (config {config_hash(config)[:12]})')
	logger.info('=' * 60)

	series = ScenarioRunner(scenario, threads).run_scenario()

	csv_path = _output_path(args, config.output.csv_path)
	ExportEngine(config.output.precision).write_series(series, csv_path)
	diagnostics = {f'{s.model_tag.value}@{s.omega_q_hz:g}Hz': s.diagnostics for s in series}
	StateManager(csv_path).save_provenance(_provenance(config, started_at, threads), dump_config(config), diagnostics)

	observable = 'readout' if scenario.scenario_id.value == 'collapse_revival' else 'ex_number'
	_maybe_plot(config, csv_path, observable)
	return EXIT_OK


def cmd_sweep(args: Namespace) -> int:
	config = _load(args)
	scenario = to_scenario(config)
	threads = args.threads or settings.THREADS
	started_at = datetime.now(UTC).isoformat()

	model = ModelTag.PQRM if ModelTag.PQRM in scenario.models else scenario.models[0]
	sweep = ScenarioRunner(scenario, threads).excitation_difference(model)
	sweep = replace(sweep, provenance=_provenance(config, started_at, threads))

	csv_path = _output_path(args, config.output.csv_path)
	ExportEngine(config.output.precision).write_sweep(sweep, csv_path)
	StateManager(csv_path).save_provenance(sweep.provenance, dump_config(config), sweep.diagnostics)

	_maybe_plot(config, csv_path, 'ex_number')
	return EXIT_OK


def cmd_plot(args: Namespace) -> int:
	csv_path = Path(args.csv)
	svg_path = Path(args.out) if args.out else csv_path.with_suffix('.svg')

	trap_freq_hz = None
	if args.config:
		trap_freq_hz = _load(args).system.trap_freq_hz
	else:
		state = StateManager(csv_path)
		if state.has_provenance():
			embedded = tomllib.loads(state.load_provenance()['config'])
			trap_freq_hz = embedded['system']['trap_freq_hz']

	plot_csv(csv_path, svg_path, args.observable, trap_freq_hz=trap_freq_hz)
	return EXIT_OK


COMMANDS = {
	'params': cmd_params,
	'run': cmd_run,
	'sweep': cmd_sweep,
	'fluxonium': cmd_fluxonium,
	'plot': cmd_plot,
}


def build_parser() -> ArgumentParser:
	parser = ArgumentParser(prog='pqrm', description='Periodic quantum Rabi model simulator')
	parser.add_argument('--log-level', default=None, help='Override LOG_LEVEL from the environment')
	subparsers = parser.add_subparsers(dest='command', required=True)

	for name in ('params', 'run', 'sweep', 'fluxonium', 'plot'):
		sub = subparsers.add_parser(name)
		sub.add_argument('--config', help='TOML run configuration')
		sub.add_argument(
			'--override', action='append', default=[], metavar='KEY=VALUE', help='e.g. scenario.n_samples=50'
		)
		sub.add_argument('--out', help='Output path (CSV for run/sweep, SVG for plot)')
		sub.add_argument('--threads', type=int, default=None, help='Worker processes for independent trajectories')
		if name == 'plot':
			sub.add_argument('csv', help='Result CSV to plot')
			sub.add_argument('--observable', default='ex_number', help='CSV column on the y axis')

	return parser


def main(argv: list[str] | None = None) -> int:
	args = build_parser().parse_args(argv)
	if args.log_level:
		setup_logger(args.log_level)

	try:
		return COMMANDS[args.command](args)
	except (ConfigError, CsvFormatError) as e:
		logger.error(f'Configuration error: {e}')
		return EXIT_CONFIG
	except NumericalValidityError as e:
		logger.error(f'Numerical validity check failed: {e}')
		return EXIT_NUMERICAL
	except Exception as e:
		logger.error(f'Unexpected error: {e}')
		raise


if __name__ == '__main__':
	sys.exit(main())
