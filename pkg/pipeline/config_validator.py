import hashlib
import json
import math
import tomllib
from collections.abc import Iterable
from dataclasses import asdict
from pathlib import Path
from typing import Any

import dacite

from config.defaults import (
	DEFAULT_FLUXONIUM,
	DEFAULT_GRID,
	DEFAULT_OUTPUT,
	DEFAULT_SCENARIO,
	DEFAULT_SYSTEM,
	SCENARIO_PRESETS,
	VALID_INITIAL_STATES,
	VALID_MODELS,
	VALID_SCENARIOS,
)
from models.observables import ModelTag
from models.params import FluxoniumParams, PhysicalParams
from models.run_config import RunConfigFile
from models.scenario import NumericsSpec, ScenarioConfig, ScenarioId, SpreadSpec
from models.state import InitialKind, PulseSpec
from physics.constants import AMU, HBAR, TWO_PI
from physics.grid_propagator import make_grid
from physics.param_engine import recoil_energy

SECTIONS = ('system', 'grid', 'scenario', 'output', 'fluxonium')


class ConfigError(Exception):
	exit_code = 2


class ConfigValidator:
	"""Merge a raw run config with the defaults and check every value.

	Returns a plain dict with one entry per section, ready for ``dacite``.
	"""

	def validate(self, raw_input: dict[str, Any]) -> dict[str, Any]:
		self._validate_sections(raw_input)

		result = {
			'system': self._validate_system(raw_input.get('system', {})),
			'grid': self._validate_grid(raw_input.get('grid', {})),
			'scenario': self._validate_scenario(raw_input.get('scenario', {})),
			'output': self._validate_output(raw_input.get('output', {})),
		}
		if 'fluxonium' in raw_input:
			result['fluxonium'] = self._validate_fluxonium(raw_input['fluxonium'])
		return result

	def _validate_sections(self, data: dict) -> None:
		for name, value in data.items():
			if name not in SECTIONS:
				raise ConfigError(f"Unknown section: '{name}'. Must be one of: {', '.join(SECTIONS)}")
			if not isinstance(value, dict):
				raise ConfigError(f"'{name}' must be a section of key = value pairs")

	def _merge(self, section: str, defaults: dict, given: dict) -> dict:
		result = dict(defaults)
		for key, value in given.items():
			if key not in defaults:
				raise ConfigError(f"Unknown key: '{section}.{key}'")
			result[key] = value
		return result

	def _number(self, section: str, key: str, value: Any, minimum: float | None = None, strict: bool = False) -> float:
		if isinstance(value, bool) or not isinstance(value, int | float):
			raise ConfigError(f"'{section}.{key}' must be a number")
		value = float(value)
		if not math.isfinite(value):
			raise ConfigError(f"'{section}.{key}' must be finite")
		if minimum is not None and (value < minimum or (strict and value == minimum)):
			relation = 'greater than' if strict else 'at least'
			raise ConfigError(f"'{section}.{key}' must be {relation} {minimum:g}, got {value:g}")
		return value

	def _integer(self, section: str, key: str, value: Any, minimum: int) -> int:
		if isinstance(value, bool) or not isinstance(value, int):
			raise ConfigError(f"'{section}.{key}' must be an integer")
		if value < minimum:
			raise ConfigError(f"'{section}.{key}' must be at least {minimum}, got {value}")
		return value

	def _choice(self, section: str, key: str, value: Any, valid: list[str]) -> str:
		if value not in valid:
			raise ConfigError(f"Invalid {section}.{key} '{value}'. Must be one of: {', '.join(valid)}")
		return value

	def _validate_system(self, system: dict) -> dict:
		if 'qubit_split_hz' in system and 'lattice_depth_er' in system:
			raise ConfigError("Give either 'system.qubit_split_hz' or 'system.lattice_depth_er', not both")

		result = self._merge('system', {**DEFAULT_SYSTEM, 'lattice_depth_er': None}, system)
		result['mass_u'] = self._number('system', 'mass_u', result['mass_u'], 0.0, strict=True)
		result['wavelength_nm'] = self._number('system', 'wavelength_nm', result['wavelength_nm'], 0.0, strict=True)
		result['trap_freq_hz'] = self._number('system', 'trap_freq_hz', result['trap_freq_hz'], 0.0, strict=True)
		result['qubit_split_hz'] = self._number('system', 'qubit_split_hz', result['qubit_split_hz'], 0.0)
		if result['lattice_depth_er'] is not None:
			result['lattice_depth_er'] = self._number('system', 'lattice_depth_er', result['lattice_depth_er'], 0.0)
		return result

	def _validate_grid(self, grid: dict) -> dict:
		result = self._merge('grid', DEFAULT_GRID, grid)

		n_points = self._integer('grid', 'n_points', result['n_points'], 2)
		if n_points & (n_points - 1):
			raise ConfigError(f"'grid.n_points' must be a power of two, got {n_points}")

		result['length_um'] = self._number('grid', 'length_um', result['length_um'], 0.0, strict=True)
		result['dt_ns'] = self._number('grid', 'dt_ns', result['dt_ns'], 0.0, strict=True)
		result['n_bands'] = self._integer('grid', 'n_bands', result['n_bands'], 2)
		result['fock_n_max'] = self._integer('grid', 'fock_n_max', result['fock_n_max'], 1)
		return result

	def _validate_scenario(self, scenario: dict) -> dict:
		scenario_id = self._choice('scenario', 'id', scenario.get('id', DEFAULT_SCENARIO['id']), VALID_SCENARIOS)
		defaults = {**DEFAULT_SCENARIO, **SCENARIO_PRESETS[scenario_id]}
		result = self._merge('scenario', defaults, scenario)

		models = result['models']
		if not isinstance(models, list | tuple) or not models:
			raise ConfigError("'scenario.models' must be a non-empty list")
		for model in models:
			self._choice('scenario', 'models', model, VALID_MODELS)
		if len(set(models)) != len(models):
			raise ConfigError("'scenario.models' contains duplicates")
		result['models'] = list(models)

		t_start = self._number('scenario', 't_start_periods', result['t_start_periods'], 0.0)
		t_end = self._number('scenario', 't_end_periods', result['t_end_periods'], 0.0)
		if not t_end > t_start:
			raise ConfigError(f'Empty time span: t_end_periods ({t_end:g}) must exceed t_start_periods ({t_start:g})')
		result['t_start_periods'] = t_start
		result['t_end_periods'] = t_end
		result['n_samples'] = self._integer('scenario', 'n_samples', result['n_samples'], 2)

		splits = result['omega_q_hz']
		if not isinstance(splits, list | tuple):
			raise ConfigError("'scenario.omega_q_hz' must be a list of frequencies")
		result['omega_q_hz'] = [self._number('scenario', 'omega_q_hz', f, 0.0) for f in splits]

		self._choice('scenario', 'initial_state', result['initial_state'], VALID_INITIAL_STATES)
		result['relative_phase_rad'] = self._number('scenario', 'relative_phase_rad', result['relative_phase_rad'])
		result['momentum_offset_hbar_k'] = self._number(
			'scenario', 'momentum_offset_hbar_k', result['momentum_offset_hbar_k']
		)
		result['spread_sigma_hbar_k'] = self._number(
			'scenario', 'spread_sigma_hbar_k', result['spread_sigma_hbar_k'], 0.0
		)
		result['quadrature_k'] = self._integer('scenario', 'quadrature_k', result['quadrature_k'], 1)

		area = self._number('scenario', 'pulse_area_rad', result['pulse_area_rad'], 0.0)
		if area > TWO_PI:
			raise ConfigError(f"'scenario.pulse_area_rad' must lie in [0, 2pi], got {area:g}")
		result['pulse_area_rad'] = area
		result['pulse_phase_rad'] = self._number('scenario', 'pulse_phase_rad', result['pulse_phase_rad'])
		result['phase_average_k'] = self._integer('scenario', 'phase_average_k', result['phase_average_k'], 0)
		return result

	def _validate_output(self, output: dict) -> dict:
		result = self._merge('output', DEFAULT_OUTPUT, output)

		for key in ('csv_path', 'svg_path'):
			if not isinstance(result[key], str):
				raise ConfigError(f"'output.{key}' must be a string")
		if not result['csv_path'].strip():
			raise ConfigError("'output.csv_path' cannot be empty")
		precision = self._integer('output', 'precision', result['precision'], 1)
		if precision > 17:
			raise ConfigError(f"'output.precision' must be at most 17, got {precision}")
		return result

	def _validate_fluxonium(self, fluxonium: dict) -> dict:
		required = ('e_c_ghz', 'e_j_ghz', 'e_l_ghz')
		for key in required:
			if key not in fluxonium:
				raise ConfigError(f"Missing required key: 'fluxonium.{key}'")

		result = self._merge('fluxonium', {**dict.fromkeys(required), **DEFAULT_FLUXONIUM}, fluxonium)
		for key in required:
			result[key] = self._number('fluxonium', key, result[key], 0.0, strict=True)
		result['ext_flux_rad'] = self._number('fluxonium', 'ext_flux_rad', result['ext_flux_rad'])
		return result


def _parse_override(override: str) -> tuple[str, str, Any]:
	if '=' not in override:
		raise ConfigError(f"Override '{override}' must look like section.key=value")
	target, text = override.split('=', 1)
	if target.count('.') != 1:
		raise ConfigError(f"Override target '{target}' must look like section.key")
	section, key = (part.strip() for part in target.split('.'))

	text = text.strip()
	try:
		value = tomllib.loads(f'value = {text}')['value']
	except tomllib.TOMLDecodeError:
		# bare words such as scenario.id=phase_space
		value = text
	return section, key, value


def apply_overrides(raw: dict[str, Any], overrides: Iterable[str]) -> dict[str, Any]:
	merged = {name: dict(section) for name, section in raw.items()}
	for override in overrides:
		section, key, value = _parse_override(override)
		if section not in SECTIONS:
			raise ConfigError(f"Unknown section in override: '{section}'")
		merged.setdefault(section, {})[key] = value
	return merged


def parse_config(text: str, overrides: Iterable[str] = ()) -> RunConfigFile:
	try:
		raw = tomllib.loads(text)
	except tomllib.TOMLDecodeError as e:
		raise ConfigError(f'Invalid TOML: {e}') from e

	data = ConfigValidator().validate(apply_overrides(raw, overrides))
	try:
		return dacite.from_dict(RunConfigFile, data, config=dacite.Config(strict=True, cast=[tuple]))
	except dacite.DaciteError as e:
		raise ConfigError(f'Invalid config: {e}') from e


def load_config(path: Path | str, overrides: Iterable[str] = ()) -> RunConfigFile:
	path = Path(path)
	if not path.exists():
		raise ConfigError(f'Config file not found: {path}')
	return parse_config(path.read_text(encoding='utf-8'), overrides)


def _toml_value(value: Any) -> str:
	match value:
		case bool():
			return 'true' if value else 'false'
		case int():
			return str(value)
		case float():
			return repr(value)
		case str():
			return json.dumps(value)
		case list() | tuple():
			return '[' + ', '.join(_toml_value(v) for v in value) + ']'
	raise TypeError(f'cannot serialise {value!r}')


def dump_config(config: RunConfigFile) -> str:
	"""Canonical TOML text: sections and keys sorted, unset optional keys omitted."""
	lines = []
	data = asdict(config)
	if config.system.lattice_depth_er is not None:
		del data['system']['qubit_split_hz']

	for name, section in sorted(data.items()):
		if section is None:
			continue
		lines.append(f'[{name}]')
		for key, value in sorted(section.items()):
			if value is not None:
				lines.append(f'{key} = {_toml_value(value)}')
		lines.append('')
	return '\n'.join(lines)


def config_hash(config: RunConfigFile) -> str:
	return hashlib.sha256(dump_config(config).encode('utf-8')).hexdigest()


def to_params(config: RunConfigFile) -> PhysicalParams:
	system = config.system
	try:
		params = PhysicalParams(
			mass=system.mass_u * AMU,
			wavelength=system.wavelength_nm * 1e-9,
			trap_freq=TWO_PI * system.trap_freq_hz,
			qubit_split=TWO_PI * system.qubit_split_hz,
		)
		if system.lattice_depth_er is not None:
			params = params.with_lattice_depth(system.lattice_depth_er * recoil_energy(params))
	except ValueError as e:
		raise ConfigError(f'Invalid system section: {e}') from e
	return params


def to_fluxonium(config: RunConfigFile) -> FluxoniumParams | None:
	if config.fluxonium is None:
		return None
	section = config.fluxonium
	scale = TWO_PI * 1e9
	return FluxoniumParams(
		E_C=section.e_c_ghz * scale,
		E_J=section.e_j_ghz * scale,
		E_L=section.e_l_ghz * scale,
		ext_flux=section.ext_flux_rad,
	)


def to_scenario(config: RunConfigFile) -> ScenarioConfig:
	params = to_params(config)
	scenario = config.scenario
	grid = config.grid
	period = TWO_PI / params.trap_freq
	hbar_k = HBAR * params.wavevector

	try:
		# rejects a grid that cannot resolve the lattice before any model runs
		make_grid(params, grid.n_points, grid.length_um * 1e-6)
		return ScenarioConfig(
			scenario_id=ScenarioId(scenario.id),
			params=params,
			models=tuple(ModelTag(m) for m in scenario.models),
			t_start=scenario.t_start_periods * period,
			t_end=scenario.t_end_periods * period,
			n_samples=scenario.n_samples,
			initial_kind=InitialKind(scenario.initial_state),
			relative_phase=scenario.relative_phase_rad,
			momentum_offset=scenario.momentum_offset_hbar_k * hbar_k,
			omega_q_list=tuple(TWO_PI * f for f in scenario.omega_q_hz),
			spread=SpreadSpec(sigma_p=scenario.spread_sigma_hbar_k * hbar_k, quadrature_k=scenario.quadrature_k),
			pulse=PulseSpec(area=scenario.pulse_area_rad, phase=scenario.pulse_phase_rad),
			phase_average_k=scenario.phase_average_k,
			numerics=NumericsSpec(
				n_points=grid.n_points,
				length=grid.length_um * 1e-6,
				dt=grid.dt_ns * 1e-9,
				n_bands=grid.n_bands,
				fock_n_max=grid.fock_n_max,
			),
		)
	except ValueError as e:
		raise ConfigError(f'Invalid scenario: {e}') from e
