import math
import multiprocessing as mp
from dataclasses import dataclass, replace
from functools import partial
from typing import Any

import numpy as np

from config.settings import settings
from models.observables import ModelTag, ObservableRecord, ObservableSeries
from models.params import PhysicalParams
from models.scenario import ScenarioConfig, SweepResult
from models.state import InitialKind
from physics.band_models import BandPropagator, band_grid_for, band_initial_state, corner_weight, flag_corner_weight
from physics.errors import NumericalValidityError, TruncationError
from physics.grid_propagator import GridPropagator, energy, initial_state, make_grid
from physics.observables import record
from physics.qrm import QrmPropagator, qrm_initial_state, qrm_overlap, top_population
from utils.logger import logger

AVERAGED_FIELDS = ('excitation_number', 'mean_x', 'mean_p', 'mean_q', 'var_x', 'var_q', 'band_occupation')


@dataclass(frozen=True)
class Trajectory:
	"""One independent work item: a single model run at one qubit splitting."""

	model: ModelTag
	qubit_split: float  # rad/s
	initial_kind: InitialKind
	momentum_offset: float = 0.0  # kg m/s


def step_plan(times: np.ndarray, dt: float) -> list[tuple[int, float]]:
	"""(n_steps, step) per sample so that every sample time is hit exactly with step <= dt."""
	plan = []
	previous = 0.0
	for t in times:
		interval = float(t) - previous
		n_steps = math.ceil(interval / dt - 1e-9) if interval > 0 else 0
		plan.append((n_steps, interval / n_steps if n_steps else 0.0))
		previous = float(t)
	return plan


def _coordinates(trajectory: Trajectory, time: float) -> dict[str, str]:
	return {
		'model': trajectory.model.value,
		't': f'{time:.6e}s',
		'omega_q/2pi': f'{trajectory.qubit_split / (2.0 * math.pi):g}Hz',
		'initial': trajectory.initial_kind.value,
	}


def _run_split_step(
	config: ScenarioConfig, params: PhysicalParams, trajectory: Trajectory, times: np.ndarray
) -> tuple[list[ObservableRecord], dict[str, Any]]:
	numerics = config.numerics
	grid = make_grid(params, numerics.n_points, numerics.length)
	diagnostics: dict[str, Any] = {'n_periods': grid.n_periods}

	if trajectory.model is ModelTag.GRID:
		state = initial_state(trajectory.initial_kind, params, grid, trajectory.momentum_offset, config.relative_phase)
		build = partial(GridPropagator, params, grid)
		initial_energy = energy(state, params)
		diagnostics['energy_drift'] = 0.0
	else:
		n_bands = 2 if trajectory.model is ModelTag.PQRM else numerics.n_bands
		band_grid = band_grid_for(grid, n_bands)
		state = band_initial_state(
			trajectory.initial_kind, params, band_grid, trajectory.momentum_offset, config.relative_phase
		)
		build = partial(BandPropagator, params, band_grid)
		diagnostics['max_corner_weight'] = 0.0
		diagnostics['n_bands'] = n_bands

	propagators = {}
	records = []
	time = 0.0
	for t, (n_steps, step) in zip(times, step_plan(times, numerics.dt), strict=True):
		time = float(t)
		if n_steps:
			if step not in propagators:
				propagators[step] = build(step)
			try:
				state = propagators[step].evolve(state, n_steps)
			except NumericalValidityError as e:
				raise e.with_context(**_coordinates(trajectory, time)) from e
		state = replace(state, time=time)

		if trajectory.model is ModelTag.GRID:
			drift = abs(energy(state, params) - initial_energy) / abs(initial_energy)
			diagnostics['energy_drift'] = max(diagnostics['energy_drift'], drift)
		else:
			weight = corner_weight(state)
			if weight > settings.BAND_CORNER_THRESHOLD >= diagnostics['max_corner_weight']:
				flag_corner_weight(state, label=f'{trajectory.model.value}: ')
			diagnostics['max_corner_weight'] = max(diagnostics['max_corner_weight'], weight)

		records.append(record(state, params, trajectory.model, config.pulse, n_phases=config.phase_average_k))

	return records, diagnostics


def _run_fock(
	config: ScenarioConfig, params: PhysicalParams, trajectory: Trajectory, times: np.ndarray
) -> tuple[list[ObservableRecord], dict[str, Any]]:
	n_max = config.numerics.fock_n_max
	for attempt in range(settings.MAX_FOCK_DOUBLINGS + 1):
		initial = qrm_initial_state(
			trajectory.initial_kind, params, n_max, trajectory.momentum_offset, config.relative_phase
		)
		propagator = QrmPropagator(params, n_max)
		states = [propagator.evolve(initial, float(t)) for t in times]
		inadequate = [s for s in states if not propagator.is_adequate(s)]
		if not inadequate:
			break
		if attempt == settings.MAX_FOCK_DOUBLINGS:
			worst = inadequate[0]
			error = TruncationError(
				f'Fock truncation still inadequate at n_max={n_max} '
				f'(top-level population {top_population(worst):.2e})'
			)
			raise error.with_context(**_coordinates(trajectory, worst.time))
		logger.warning(f'Fock truncation n_max={n_max} inadequate, doubling to {2 * n_max}')
		n_max *= 2

	records = [
		record(state, params, ModelTag.QRM, overlap=qrm_overlap(initial, state)) for state in states
	]
	return records, {'fock_n_max': n_max}


def run_trajectory(
	config: ScenarioConfig, trajectory: Trajectory, times: np.ndarray | None = None
) -> ObservableSeries:
	times = config.sample_times if times is None else np.asarray(times, dtype=float)
	params = config.params.with_qubit_split(trajectory.qubit_split)
	logger.info(
		f'Running {trajectory.model.value} at omega_q/2pi = {params.qubit_split_hz:g} Hz '
		f'({trajectory.initial_kind.value}, {len(times)} samples)'
	)

	try:
		if trajectory.model is ModelTag.QRM:
			records, diagnostics = _run_fock(config, params, trajectory, times)
		else:
			records, diagnostics = _run_split_step(config, params, trajectory, times)
	except NumericalValidityError as e:
		if hasattr(e, 'coordinates'):
			raise
		# failures while preparing the initial state
		raise e.with_context(**_coordinates(trajectory, 0.0)) from e

	return ObservableSeries(
		model_tag=trajectory.model,
		omega_q_hz=params.qubit_split_hz,
		initial_kind=trajectory.initial_kind.value,
		records=tuple(records),
		diagnostics=diagnostics,
	)


def average_series(series: list[ObservableSeries], weights: np.ndarray) -> ObservableSeries:
	"""Incoherent weighted average of series that share model, splitting and time axis."""
	first = series[0]
	names = list(AVERAGED_FIELDS)
	names += [name for name in ('readout', 'overlap') if getattr(first.records[0], name) is not None]

	records = []
	for index, base in enumerate(first.records):
		column = [s.records[index] for s in series]
		averaged = {
			name: float(np.dot(weights, [getattr(r, name) for r in column]))
			for name in names
		}
		records.append(replace(base, **averaged))

	diagnostics = {'quadrature_nodes': len(series)}
	for key in first.diagnostics:
		values = [s.diagnostics[key] for s in series]
		diagnostics[key] = max(values)
	return replace(first, records=tuple(records), diagnostics=diagnostics)


def hermite_nodes(sigma: float, order: int) -> tuple[np.ndarray, np.ndarray]:
	"""Offsets and normalised weights for averaging over a Gaussian of standard deviation ``sigma``."""
	if order < 1:
		raise ValueError(f'quadrature order must be at least 1, got {order}')
	nodes, weights = np.polynomial.hermite.hermgauss(order)
	return np.sqrt(2.0) * sigma * nodes, weights / np.sqrt(np.pi)


class ScenarioRunner:
	def __init__(self, config: ScenarioConfig, threads: int | None = None):
		self.config = config
		self.threads = max(1, threads or settings.THREADS)

	def _map(self, trajectories: list[Trajectory], times: np.ndarray | None = None) -> list[ObservableSeries]:
		args = [(self.config, trajectory, times) for trajectory in trajectories]
		if self.threads == 1 or len(args) == 1:
			return [run_trajectory(*a) for a in args]

		logger.info(f'Dispatching {len(args)} trajectories to {self.threads} workers')
		with mp.get_context('spawn').Pool(processes=min(self.threads, len(args))) as pool:
			# starmap returns results in submission order whatever the completion order
			return pool.starmap(run_trajectory, args)

	def _trajectories(self, kind: InitialKind, offset: float = 0.0) -> list[Trajectory]:
		return [
			Trajectory(model=model, qubit_split=split, initial_kind=kind, momentum_offset=offset)
			for split in self.config.qubit_splits
			for model in self.config.models
		]

	def run_scenario(self) -> list[ObservableSeries]:
		config = self.config
		logger.info('=' * 60)
		logger.info(f'SCENARIO: {config.scenario_id.value}')
		logger.info('=' * 60)

		if config.spread.sigma_p > 0:
			return self.spread_average()
		return self._map(self._trajectories(config.initial_kind, config.momentum_offset))

	def spread_average(self) -> list[ObservableSeries]:
		"""Average every series over Gauss-Hermite nodes of the initial momentum offset."""
		config = self.config
		base = self._trajectories(config.initial_kind, config.momentum_offset)
		if config.spread.sigma_p == 0:
			return self._map(base)

		offsets, weights = hermite_nodes(config.spread.sigma_p, config.spread.quadrature_k)
		logger.info(f'Momentum spread: {len(offsets)} quadrature nodes per series')

		trajectories = [replace(t, momentum_offset=t.momentum_offset + float(d)) for t in base for d in offsets]
		results = self._map(trajectories)

		k = len(offsets)
		return [average_series(results[i * k : (i + 1) * k], weights) for i in range(len(base))]

	def excitation_difference(self, model: ModelTag | None = None, times: np.ndarray | None = None) -> SweepResult:
		"""<N> from the upper qubit state (qubit_g) minus <N> from the lower one (qubit_e)."""
		config = self.config
		model = model or config.models[0]
		times = config.sample_times if times is None else np.atleast_1d(np.asarray(times, dtype=float))
		splits = config.qubit_splits

		logger.info('=' * 60)
		logger.info(f'EXCITATION DIFFERENCE: {model.value}, {len(splits)} splittings x {len(times)} samples')
		logger.info('=' * 60)

		trajectories = [
			Trajectory(model=model, qubit_split=split, initial_kind=kind, momentum_offset=config.momentum_offset)
			for split in splits
			for kind in (InitialKind.QUBIT_G, InitialKind.QUBIT_E)
		]
		results = self._map(trajectories, times)

		values = np.empty((len(splits), len(times)))
		diagnostics = {}
		for i, split in enumerate(splits):
			upper, lower = results[2 * i], results[2 * i + 1]
			values[i] = np.array(upper.values('excitation_number')) - np.array(lower.values('excitation_number'))
			diagnostics[f'{split / (2.0 * math.pi):g}'] = {'upper': upper.diagnostics, 'lower': lower.diagnostics}

		return SweepResult(
			times=np.asarray(times),
			qubit_splits=np.asarray(splits, dtype=float),
			values=values,
			model_tag=model,
			diagnostics=diagnostics,
		)


def run_scenario(config: ScenarioConfig, threads: int | None = None) -> list[ObservableSeries]:
	return ScenarioRunner(config, threads).run_scenario()


def excitation_difference(config: ScenarioConfig, threads: int | None = None) -> SweepResult:
	return ScenarioRunner(config, threads).excitation_difference()


def spread_average(config: ScenarioConfig, threads: int | None = None) -> list[ObservableSeries]:
	return ScenarioRunner(config, threads).spread_average()
