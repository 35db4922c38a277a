"""Exact single-particle reference solver on a uniform position grid.

Symmetric (Strang) split-step propagation: half potential step, full kinetic step
in the momentum representation, half potential step. All arithmetic happens in
the scaled units of ``physics.param_engine.nondimensionalize``.
"""

import numpy as np

from config.settings import settings
from models.params import PhysicalParams, ScaledParams
from models.state import Grid, GridState, InitialKind, PulseSpec
from physics.errors import BoundaryError, NormDriftError
from physics.param_engine import nondimensionalize
from utils.logger import logger

DEFAULT_N_POINTS = 4096
DEFAULT_LENGTH = 40e-6  # m
DEFAULT_DT = 100e-9  # s


def make_grid(params: PhysicalParams, n_points: int = DEFAULT_N_POINTS, length: float = DEFAULT_LENGTH) -> Grid:
	"""Build a grid whose length is rounded to a whole number of lattice periods (lambda / 4)."""
	if n_points < 2 or n_points & (n_points - 1):
		raise ValueError(f'n_points must be a power of two, got {n_points}')
	if not length > 0:
		raise ValueError(f'grid length must be positive, got {length}')

	period = params.wavelength / 4.0
	n_periods = max(1, round(length / period))
	grid = Grid(n_points=n_points, length=n_periods * period, n_periods=n_periods, wavelength=params.wavelength)

	if grid.dx >= params.wavelength / 16.0:
		raise ValueError(
			f'grid spacing {grid.dx:.3e} m does not resolve the lattice (need dx < lambda/16 = '
			f'{params.wavelength / 16.0:.3e} m); increase n_points or shrink the box'
		)

	logger.debug(
		f'Grid: {n_points} points over {grid.length * 1e6:.3f} um ({n_periods} lattice periods), '
		f'{period / grid.dx:.1f} samples per period'
	)
	return grid


def _centred_sign(grid: Grid) -> np.ndarray:
	# exp(-i p x_0) with x_0 = -L/2 is (-1)^m on the centred momentum index m
	m = np.arange(grid.n_points) - grid.n_points // 2
	return np.where(m % 2 == 0, 1.0, -1.0)


def to_momentum(state: GridState) -> np.ndarray:
	"""Unit-norm momentum amplitudes on the centred axis ``grid.p_scaled_centred``."""
	phi = np.fft.fftshift(np.fft.fft(state.amplitudes, norm='ortho'))
	return phi * _centred_sign(state.grid)


def from_momentum(phi: np.ndarray, grid: Grid) -> np.ndarray:
	return np.fft.ifft(np.fft.ifftshift(phi * _centred_sign(grid)), norm='ortho')


def potential(scaled: ScaledParams, x: np.ndarray) -> np.ndarray:
	return 0.25 * scaled.omega**2 * x**2 + 0.5 * scaled.lattice_depth * np.cos(2.0 * x)


def check_boundary(state: GridState, threshold: float | None = None) -> None:
	threshold = settings.BOUNDARY_THRESHOLD if threshold is None else threshold
	edge = max(1, state.grid.n_points // 32)

	density = np.abs(state.amplitudes) ** 2
	position_edge = density[:edge].sum() + density[-edge:].sum()
	if position_edge > threshold:
		raise BoundaryError(
			f'wavepacket reached the position grid edge (edge probability {position_edge:.3e} > {threshold:.1e}); '
			f'enlarge the box'
		)

	momentum = np.abs(to_momentum(state)) ** 2
	momentum_edge = momentum[:edge].sum() + momentum[-edge:].sum()
	if momentum_edge > threshold:
		raise BoundaryError(
			f'wavepacket reached the momentum grid edge (edge probability {momentum_edge:.3e} > {threshold:.1e}); '
			f'refine the grid spacing'
		)


def _check_norm(amplitudes: np.ndarray) -> None:
	drift = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
	if drift > settings.NORM_DRIFT_THRESHOLD:
		raise NormDriftError(f'norm drifted by {drift:.3e} during propagation')


def initial_state(
	kind: InitialKind | str,
	params: PhysicalParams,
	grid: Grid,
	momentum_offset: float = 0.0,
	relative_phase: float = 0.0,
) -> GridState:
	"""Trap ground-state envelope times plane waves at -2hk (+offset) and/or +2hk (+offset)."""
	try:
		kind = InitialKind(kind)
	except ValueError as e:
		raise ValueError(f'Unknown initial state kind: {kind!r}') from e

	scaled = nondimensionalize(params)
	x = grid.x_scaled
	offset = momentum_offset / scaled.momentum_unit

	envelope = np.exp(-0.25 * scaled.omega * x**2)
	left = np.exp(1j * (offset - 1.0) * x)
	right = np.exp(1j * (offset + 1.0) * x)

	match kind:
		case InitialKind.MOMENTUM_KICK:
			psi = envelope * left
		case InitialKind.QUBIT_G:
			psi = envelope * (left + right)
		case InitialKind.QUBIT_E:
			psi = envelope * (left - right)
		case InitialKind.CUSTOM:
			psi = envelope * (left + np.exp(1j * relative_phase) * right)

	psi = psi / np.linalg.norm(psi)
	state = GridState(amplitudes=psi.astype(complex), time=0.0, grid=grid)
	check_boundary(state)
	return state


class GridPropagator:
	def __init__(self, params: PhysicalParams, grid: Grid, dt: float):
		if not dt > 0:
			raise ValueError(f'time step must be positive, got {dt}')

		self.params = params
		self.grid = grid
		self.dt = dt
		self.scaled = nondimensionalize(params)

		tau = dt / self.scaled.time_unit
		v = potential(self.scaled, grid.x_scaled)
		self.half_potential = np.exp(-0.5j * tau * v)
		self.full_potential = self.half_potential * self.half_potential
		self.kinetic = np.exp(-1j * tau * grid.p_scaled**2)

	def _kinetic_step(self, psi: np.ndarray) -> np.ndarray:
		return np.fft.ifft(self.kinetic * np.fft.fft(psi))

	def evolve(self, state: GridState, n_steps: int) -> GridState:
		if n_steps < 0:
			raise ValueError(f'n_steps must be non-negative, got {n_steps}')
		if n_steps == 0:
			return state

		psi = state.amplitudes * self.half_potential
		for _ in range(n_steps - 1):
			psi = self._kinetic_step(psi)
			psi *= self.full_potential
		psi = self._kinetic_step(psi)
		psi *= self.half_potential

		_check_norm(psi)
		evolved = GridState(amplitudes=psi, time=state.time + n_steps * self.dt, grid=state.grid)
		check_boundary(evolved)
		return evolved


def propagate(state: GridState, params: PhysicalParams, dt: float = DEFAULT_DT, n_steps: int = 1) -> GridState:
	return GridPropagator(params, state.grid, dt).evolve(state, n_steps)


def apply_raman_pulse(state: GridState, pulse: PulseSpec) -> GridState:
	"""Instantaneous beamsplitter between each p in (0, 4hk] and its partner p - 4hk.

	(chi_+, chi_-) -> (c chi_+ - e^{i phi} s chi_-, e^{-i phi} s chi_+ + c chi_-) with
	c = cos(theta / 2), s = sin(theta / 2); amplitudes with |p| > 4hk are untouched.
	"""
	grid = state.grid
	phi = to_momentum(state)
	centre = grid.n_points // 2
	shift = grid.n_periods

	upper = slice(centre + 1, centre + shift + 1)
	lower = slice(centre + 1 - shift, centre + 1)
	chi_plus, chi_minus = rotate_pair(phi[upper], phi[lower], pulse)

	phi = phi.copy()
	phi[upper] = chi_plus
	phi[lower] = chi_minus
	return GridState(amplitudes=from_momentum(phi, grid), time=state.time, grid=grid)


def rotate_pair(chi_plus: np.ndarray, chi_minus: np.ndarray, pulse: PulseSpec) -> tuple[np.ndarray, np.ndarray]:
	c = np.cos(pulse.area / 2.0)
	s = np.sin(pulse.area / 2.0)
	phase = np.exp(1j * pulse.phase)
	return c * chi_plus - phase * s * chi_minus, np.conj(phase) * s * chi_plus + c * chi_minus


def energy(state: GridState, params: PhysicalParams) -> float:
	"""Expectation value of the full Hamiltonian in J."""
	scaled = nondimensionalize(params)
	grid = state.grid
	kinetic = np.sum(np.abs(to_momentum(state)) ** 2 * grid.p_scaled_centred**2)
	pot = np.sum(np.abs(state.amplitudes) ** 2 * potential(scaled, grid.x_scaled))
	return float(kinetic + pot) * scaled.energy_unit
