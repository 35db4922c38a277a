"""Reduced band-model propagators on the concatenated momentum axis.

Band n of the Bloch basis holds p = q + (2n - 1) (scaled, q in (-1, 1]); bands are
laid end to end so the axis runs continuously across p = 0. The harmonic term,
x^2 with x conjugate to p, is applied spectrally on that axis, which makes it
periodic at its two ends; this realises the zone-edge (Umklapp) coupling between
neighbouring bands exactly without an explicit boundary term.
"""

from dataclasses import dataclass

import numpy as np

from config.settings import settings
from models.params import PhysicalParams
from models.state import BandGrid, BandState, Grid, GridState, InitialKind, PulseSpec
from physics.errors import BandBreakdownError, NormDriftError
from physics.grid_propagator import DEFAULT_DT, rotate_pair, to_momentum
from physics.param_engine import nondimensionalize
from utils.logger import logger


def band_grid_for(grid: Grid, n_bands: int = 2) -> BandGrid:
	"""Band axis sharing the quasimomentum spacing of ``grid`` so projection is exact."""
	return BandGrid(n_bands=n_bands, points_per_band=grid.n_periods)


def band_initial_state(
	kind: InitialKind | str,
	params: PhysicalParams,
	band_grid: BandGrid,
	momentum_offset: float = 0.0,
	relative_phase: float = 0.0,
) -> BandState:
	"""Same initial kinds as the grid solver, written directly in momentum space.

	The trap ground-state envelope exp(-omega x^2 / 4) becomes exp(-(p - p0)^2 / omega).
	"""
	try:
		kind = InitialKind(kind)
	except ValueError as e:
		raise ValueError(f'Unknown initial state kind: {kind!r}') from e

	scaled = nondimensionalize(params)
	p = band_grid.p_scaled
	offset = momentum_offset / scaled.momentum_unit

	left = np.exp(-((p - offset + 1.0) ** 2) / scaled.omega)
	right = np.exp(-((p - offset - 1.0) ** 2) / scaled.omega)

	match kind:
		case InitialKind.MOMENTUM_KICK:
			amplitudes = left
		case InitialKind.QUBIT_G:
			amplitudes = left + right
		case InitialKind.QUBIT_E:
			amplitudes = left - right
		case InitialKind.CUSTOM:
			amplitudes = left + np.exp(1j * relative_phase) * right

	amplitudes = np.asarray(amplitudes, dtype=complex)
	return BandState(amplitudes=amplitudes / np.linalg.norm(amplitudes), time=0.0, band_grid=band_grid)


def to_position(state: BandState) -> np.ndarray:
	"""Position amplitudes on ``state.band_grid.x_scaled``."""
	return np.fft.ifft(state.amplitudes, norm='ortho')


class BandPropagator:
	"""Split-step propagator: q-diagonal band block (half) / trap (full) / band block (half).

	The band block is the kinetic energy of each band at fixed q plus the lattice
	coupling V/4 between adjacent bands, exponentiated exactly per q point.
	"""

	def __init__(self, params: PhysicalParams, band_grid: BandGrid, dt: float = DEFAULT_DT):
		if not dt > 0:
			raise ValueError(f'time step must be positive, got {dt}')

		self.params = params
		self.band_grid = band_grid
		self.dt = dt
		scaled = nondimensionalize(params)
		tau = dt / scaled.time_unit

		n, m = band_grid.n_bands, band_grid.points_per_band
		p = band_grid.p_scaled.reshape(n, m)

		hamiltonian = np.zeros((m, n, n))
		hamiltonian[:, np.arange(n), np.arange(n)] = (p**2).T
		coupling = 0.25 * scaled.lattice_depth
		hamiltonian[:, np.arange(n - 1), np.arange(1, n)] = coupling
		hamiltonian[:, np.arange(1, n), np.arange(n - 1)] = coupling

		energies, vectors = np.linalg.eigh(hamiltonian)
		self.half_band = self._exponentiate(energies, vectors, 0.5 * tau)
		self.full_band = self._exponentiate(energies, vectors, tau)
		self.trap = np.exp(-1j * tau * 0.25 * scaled.omega**2 * band_grid.x_scaled**2)

	@staticmethod
	def _exponentiate(energies: np.ndarray, vectors: np.ndarray, tau: float) -> np.ndarray:
		phases = np.exp(-1j * tau * energies)
		return np.einsum('qab,qb,qcb->qac', vectors, phases, vectors.conj())

	def _band_step(self, amplitudes: np.ndarray, unitary: np.ndarray) -> np.ndarray:
		n, m = self.band_grid.n_bands, self.band_grid.points_per_band
		spinor = amplitudes.reshape(n, m)
		return np.einsum('qab,bq->aq', unitary, spinor).reshape(n * m)

	def _trap_step(self, amplitudes: np.ndarray) -> np.ndarray:
		return np.fft.fft(self.trap * np.fft.ifft(amplitudes))

	def evolve(self, state: BandState, n_steps: int) -> BandState:
		if n_steps < 0:
			raise ValueError(f'n_steps must be non-negative, got {n_steps}')
		if state.band_grid != self.band_grid:
			raise ValueError('state and propagator use different band grids')
		if n_steps == 0:
			return state

		amplitudes = self._band_step(state.amplitudes, self.half_band)
		for _ in range(n_steps - 1):
			amplitudes = self._trap_step(amplitudes)
			amplitudes = self._band_step(amplitudes, self.full_band)
		amplitudes = self._trap_step(amplitudes)
		amplitudes = self._band_step(amplitudes, self.half_band)

		drift = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
		if drift > settings.NORM_DRIFT_THRESHOLD:
			raise NormDriftError(f'band-model norm drifted by {drift:.3e}')

		return BandState(amplitudes=amplitudes, time=state.time + n_steps * self.dt, band_grid=state.band_grid)


def pqrm_propagate(state: BandState, params: PhysicalParams, dt: float = DEFAULT_DT, n_steps: int = 1) -> BandState:
	if state.band_grid.n_bands != 2:
		raise ValueError(f'pqrm_propagate needs a two-band state, got {state.band_grid.n_bands} bands')
	return BandPropagator(params, state.band_grid, dt).evolve(state, n_steps)


def multiband_propagate(
	state: BandState, params: PhysicalParams, dt: float = DEFAULT_DT, n_steps: int = 1
) -> BandState:
	return BandPropagator(params, state.band_grid, dt).evolve(state, n_steps)


def corner_weight(state: BandState) -> float:
	"""Probability near the wrap point at the two ends of the concatenated axis."""
	edge = max(1, state.band_grid.points_per_band // 16)
	density = np.abs(state.amplitudes) ** 2
	return float(density[:edge].sum() + density[-edge:].sum())


def flag_corner_weight(state: BandState, label: str = '') -> float:
	weight = corner_weight(state)
	if weight > settings.BAND_CORNER_THRESHOLD:
		logger.warning(
			f'{label}band truncation: {weight:.2e} of the population sits at the wrapped zone corner '
			f'(t = {state.time * 1e3:.4f} ms); results beyond this time are not trustworthy'
		)
	return weight


@dataclass(frozen=True, eq=False)
class BandProjection:
	state: BandState
	discarded_weight: float


def project_grid_to_bands(
	state: GridState, params: PhysicalParams, n_bands: int = 2, threshold: float | None = None
) -> BandProjection:
	"""Bin grid momentum amplitudes into the kept bands by the exact p -> (q, n) relabelling.

	The kept amplitudes are renormalised; the weight outside the kept bands is reported and
	raises ``BandBreakdownError`` above ``threshold``.
	"""
	threshold = settings.DISCARDED_WEIGHT_THRESHOLD if threshold is None else threshold
	grid = state.grid
	band_grid = band_grid_for(grid, n_bands)

	centre = grid.n_points // 2
	start = centre + grid.n_periods * (band_grid.band_min - 1) + 1
	stop = centre + grid.n_periods * band_grid.band_max + 1
	if start < 0 or stop > grid.n_points:
		raise ValueError(f'grid momentum range does not cover {n_bands} bands; refine the grid spacing')

	phi = to_momentum(state)
	kept = phi[start:stop]
	kept_weight = float(np.vdot(kept, kept).real)
	discarded = max(0.0, 1.0 - kept_weight)

	if discarded > threshold:
		raise BandBreakdownError(
			f'{discarded:.3e} of the population lies outside the {n_bands} kept bands '
			f'(threshold {threshold:.1e}); the {n_bands}-band approximation has broken down'
		)

	projected = BandState(amplitudes=kept / np.sqrt(kept_weight), time=state.time, band_grid=band_grid)
	return BandProjection(state=projected, discarded_weight=discarded)


def apply_band_raman_pulse(state: BandState, pulse: PulseSpec) -> BandState:
	"""The grid beamsplitter restricted to the band axis: pairs band 1 with band 0 at equal q."""
	band_grid = state.band_grid
	upper = band_grid.band_slice(1)
	lower = band_grid.band_slice(0)
	chi_plus, chi_minus = rotate_pair(state.amplitudes[upper], state.amplitudes[lower], pulse)

	amplitudes = state.amplitudes.copy()
	amplitudes[upper] = chi_plus
	amplitudes[lower] = chi_minus
	return BandState(amplitudes=amplitudes, time=state.time, band_grid=band_grid)
