"""Measured quantities for grid, band-model and Fock-space states.

Everything is computed in scaled units (momentum 2 hbar k, length 1/(2k)) and
converted to SI only when an ``ObservableRecord`` is built.
"""

import math
from collections.abc import Iterable
from dataclasses import dataclass, replace
from functools import singledispatch

import numpy as np

from models.observables import ModelTag, ObservableRecord, PhaseSpaceTrajectory
from models.params import PhysicalParams
from models.state import BandState, FockState, GridState, PulseSpec
from physics.band_models import apply_band_raman_pulse, to_position
from physics.grid_propagator import apply_raman_pulse, to_momentum
from physics.param_engine import nondimensionalize
from physics.qrm import annihilation


@dataclass(frozen=True)
class Moments:
	"""Scaled first and second moments of one state."""

	mean_x: float
	mean_x2: float
	mean_p: float
	mean_q: float
	mean_q2: float
	band_occupation: float
	number: float | None = None  # <a^dag a>, Fock states only

	@property
	def var_x(self) -> float:
		return max(0.0, self.mean_x2 - self.mean_x**2)

	@property
	def var_q(self) -> float:
		return max(0.0, self.mean_q2 - self.mean_q**2)


def fold_scaled(p: float | np.ndarray) -> tuple[float | np.ndarray, int | np.ndarray]:
	"""Scaled p -> (q, n) with n = ceil(p / 2) and q = p - (2n - 1) in (-1, 1]."""
	band = np.ceil(np.asarray(p, dtype=float) / 2.0).astype(int)
	q = p - (2 * band - 1)
	if np.ndim(p) == 0:
		return float(q), int(band)
	return q, band


def fold_momentum(p: float | np.ndarray, params: PhysicalParams) -> tuple[float | np.ndarray, int | np.ndarray]:
	"""Physical momentum -> (quasimomentum in kg m/s, Bloch band index).

	p in (-4hk, 0] is band 0 (q = p + 2hk), p in (0, 4hk] is band 1 (q = p - 2hk); larger
	|p| continues the same ladder, one band per 4hk.
	"""
	unit = nondimensionalize(params).momentum_unit
	q, band = fold_scaled(np.asarray(p, dtype=float) / unit)
	return q * unit, band


def band_parity(band: np.ndarray) -> np.ndarray:
	"""+1 on the even (n_b = 0) ladder rungs, -1 on the odd ones."""
	return np.where(band % 2 == 0, 1.0, -1.0)


def _grid_band_index(m: np.ndarray, per_band: int) -> np.ndarray:
	# ceil(m / per_band) in integer arithmetic so band edges are assigned exactly
	return -((-m) // per_band)


@singledispatch
def band_occupation(state) -> float:
	"""P(n_b = 0) - P(n_b = 1), the expectation of sigma_x in the band basis."""
	raise TypeError(f'no band occupation for {type(state).__name__}')


@band_occupation.register
def _(state: GridState) -> float:
	density = np.abs(to_momentum(state)) ** 2
	band = _grid_band_index(state.grid.p_index, state.grid.n_periods)
	return float(np.sum(density * band_parity(band)) / np.sum(density))


@band_occupation.register
def _(state: BandState) -> float:
	density = np.abs(state.amplitudes) ** 2
	return float(np.sum(density * band_parity(state.band_grid.band_index)) / np.sum(density))


@band_occupation.register
def _(state: FockState) -> float:
	up, down = state.amplitudes
	sigma_x = 2.0 * float(np.vdot(up, down).real)
	return -sigma_x / state.norm


@singledispatch
def moments(state, params: PhysicalParams) -> Moments:
	raise TypeError(f'no moments for {type(state).__name__}')


@moments.register
def _(state: GridState, params: PhysicalParams) -> Moments:
	grid = state.grid
	position = np.abs(state.amplitudes) ** 2
	position = position / position.sum()
	x = grid.x_scaled

	momentum = np.abs(to_momentum(state)) ** 2
	momentum = momentum / momentum.sum()
	m = grid.p_index
	band = _grid_band_index(m, grid.n_periods)
	p = m * grid.dp_scaled
	q = grid.dp_scaled * (m - band * grid.n_periods) + 1.0

	return Moments(
		mean_x=float(np.sum(position * x)),
		mean_x2=float(np.sum(position * x**2)),
		mean_p=float(np.sum(momentum * p)),
		mean_q=float(np.sum(momentum * q)),
		mean_q2=float(np.sum(momentum * q**2)),
		band_occupation=float(np.sum(momentum * band_parity(band))),
	)


@moments.register
def _(state: BandState, params: PhysicalParams) -> Moments:
	band_grid = state.band_grid
	momentum = np.abs(state.amplitudes) ** 2
	momentum = momentum / momentum.sum()
	position = np.abs(to_position(state)) ** 2
	position = position / position.sum()
	x = band_grid.x_scaled

	return Moments(
		mean_x=float(np.sum(position * x)),
		mean_x2=float(np.sum(position * x**2)),
		mean_p=float(np.sum(momentum * band_grid.p_scaled)),
		mean_q=float(np.sum(momentum * band_grid.q_scaled)),
		mean_q2=float(np.sum(momentum * band_grid.q_scaled**2)),
		band_occupation=float(np.sum(momentum * band_parity(band_grid.band_index))),
	)


@moments.register
def _(state: FockState, params: PhysicalParams) -> Moments:
	scaled = nondimensionalize(params)
	x_zpf = 1.0 / math.sqrt(scaled.omega)
	p_zpf = 0.5 * math.sqrt(scaled.omega)

	a = annihilation(state.n_max)
	amplitudes = state.amplitudes / math.sqrt(state.norm)
	lowered = amplitudes @ a.T
	mean_a = complex(np.vdot(amplitudes, lowered))
	mean_a2 = complex(np.vdot(amplitudes, lowered @ a.T))
	number = float(np.sum(np.arange(state.n_max + 1) * np.abs(amplitudes) ** 2))

	occupation = band_occupation(state)
	mean_q = 2.0 * p_zpf * mean_a.imag
	return Moments(
		mean_x=2.0 * x_zpf * mean_a.real,
		mean_x2=x_zpf**2 * (2.0 * mean_a2.real + 2.0 * number + 1.0),
		mean_p=mean_q - occupation,
		mean_q=mean_q,
		mean_q2=p_zpf**2 * (2.0 * number + 1.0 - 2.0 * mean_a2.real),
		band_occupation=occupation,
		number=number,
	)


def _excitation(result: Moments, omega: float) -> float:
	if result.number is not None:
		return result.number
	return (0.25 * omega**2 * result.mean_x2 + result.mean_q2) / omega - 0.5


def excitation_number(state: GridState | BandState | FockState, params: PhysicalParams) -> float:
	"""<N> from hbar omega (<N> + 1/2) = m omega^2 <x^2> / 2 + <q^2> / 2m, or <a^dag a> for Fock states."""
	return _excitation(moments(state, params), nondimensionalize(params).omega)


def mean_position(state: GridState | BandState | FockState, params: PhysicalParams) -> float:
	return moments(state, params).mean_x * nondimensionalize(params).length_unit


def mean_momentum(state: GridState | BandState | FockState, params: PhysicalParams) -> float:
	return moments(state, params).mean_p * nondimensionalize(params).momentum_unit


def mean_quasimomentum(state: GridState | BandState | FockState, params: PhysicalParams) -> float:
	return moments(state, params).mean_q * nondimensionalize(params).momentum_unit


def _imbalance(density: np.ndarray, index: np.ndarray) -> float:
	# the p = 0 bin is split evenly, so it cancels from the numerator
	negative = density[index < 0].sum()
	positive = density[index > 0].sum()
	value = (negative - positive) / density.sum()
	return float(np.clip(value, -1.0, 1.0))


@singledispatch
def sigma_z_readout(state, pulse: PulseSpec | None = None) -> float:
	"""Population imbalance n_{p<0} after a four-photon Raman pulse applied to a copy of ``state``."""
	raise TypeError(f'no Raman readout for {type(state).__name__}')


@sigma_z_readout.register
def _(state: GridState, pulse: PulseSpec | None = None) -> float:
	pulsed = apply_raman_pulse(state, pulse or PulseSpec())
	return _imbalance(np.abs(to_momentum(pulsed)) ** 2, pulsed.grid.p_index)


@sigma_z_readout.register
def _(state: BandState, pulse: PulseSpec | None = None) -> float:
	pulsed = apply_band_raman_pulse(state, pulse or PulseSpec())
	return _imbalance(np.abs(pulsed.amplitudes) ** 2, pulsed.band_grid.p_index)


def phase_averaged_readout(state: GridState | BandState, pulse: PulseSpec | None = None, n_phases: int = 8) -> float:
	"""Readout averaged over ``n_phases`` pulse phases equally spaced around ``pulse.phase``."""
	if n_phases < 1:
		raise ValueError(f'n_phases must be at least 1, got {n_phases}')
	pulse = pulse or PulseSpec()
	phases = pulse.phase + 2.0 * np.pi * np.arange(n_phases) / n_phases
	return float(np.mean([sigma_z_readout(state, replace(pulse, phase=float(phi))) for phi in phases]))


def phase_space_trajectory(
	states: Iterable[GridState | BandState | FockState], params: PhysicalParams
) -> PhaseSpaceTrajectory:
	scaled = nondimensionalize(params)
	times, x, p, q = [], [], [], []
	for state in states:
		result = moments(state, params)
		times.append(state.time)
		x.append(result.mean_x * scaled.length_unit)
		p.append(result.mean_p * scaled.momentum_unit)
		q.append(result.mean_q * scaled.momentum_unit)
	return PhaseSpaceTrajectory(times=tuple(times), mean_x=tuple(x), mean_p=tuple(p), mean_q=tuple(q))


def record(
	state: GridState | BandState | FockState,
	params: PhysicalParams,
	model_tag: ModelTag,
	pulse: PulseSpec | None = None,
	overlap: float | None = None,
	n_phases: int = 0,
) -> ObservableRecord:
	"""Collect every observable of ``state`` into one SI-unit record.

	The readout is taken only for momentum-resolved states and only when ``pulse`` is
	given; ``n_phases > 0`` switches to the phase-averaged readout.
	"""
	scaled = nondimensionalize(params)
	result = moments(state, params)

	readout = None
	if pulse is not None and isinstance(state, GridState | BandState):
		readout = phase_averaged_readout(state, pulse, n_phases) if n_phases > 0 else sigma_z_readout(state, pulse)

	return ObservableRecord(
		time=state.time,
		excitation_number=_excitation(result, scaled.omega),
		mean_x=result.mean_x * scaled.length_unit,
		mean_p=result.mean_p * scaled.momentum_unit,
		mean_q=result.mean_q * scaled.momentum_unit,
		var_x=result.var_x * scaled.length_unit**2,
		var_q=result.var_q * scaled.momentum_unit**2,
		band_occupation=float(np.clip(result.band_occupation, -1.0, 1.0)),
		model_tag=model_tag,
		readout=readout,
		overlap=overlap,
	)
