"""Standard quantum Rabi model in qubit x truncated Fock space.

H / hbar = omega a^dag a + omega_q / 2 sigma_z + i g sigma_x (a^dag - a), evolved by exact
eigendecomposition. The qubit basis is (up, down) of sigma_z; the band states of the
lattice picture are sigma_x eigenstates, n_b = 0 <-> sigma_x = -1 and n_b = 1 <-> +1.
"""

import math

import numpy as np
import scipy.linalg

from config.settings import settings
from models.params import PhysicalParams
from models.state import FockState, InitialKind
from physics.errors import TruncationError
from physics.param_engine import nondimensionalize
from utils.logger import logger

DEFAULT_N_MAX = 600

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def annihilation(n_max: int) -> np.ndarray:
	return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)


def qrm_hamiltonian(params: PhysicalParams, n_max: int) -> np.ndarray:
	"""Dense Hamiltonian in units of the recoil energy, basis index = qubit * (n_max + 1) + n."""
	scaled = nondimensionalize(params)
	a = annihilation(n_max)
	number = np.diag(np.arange(n_max + 1, dtype=float))
	identity = np.eye(n_max + 1)

	return (
		scaled.omega * np.kron(np.eye(2), number)
		+ 0.5 * scaled.omega_q * np.kron(SIGMA_Z, identity)
		+ scaled.coupling * np.kron(SIGMA_X, 1j * (a.T - a))
	)


def _band_qubit(kind: InitialKind, relative_phase: float) -> np.ndarray:
	match kind:
		case InitialKind.MOMENTUM_KICK:
			bands = np.array([1.0, 0.0], dtype=complex)
		case InitialKind.QUBIT_G:
			bands = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
		case InitialKind.QUBIT_E:
			bands = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)
		case InitialKind.CUSTOM:
			bands = np.array([1.0, np.exp(1j * relative_phase)], dtype=complex) / math.sqrt(2.0)

	# (n_b = 0, n_b = 1) -> (up, down)
	return np.array([bands[0] + bands[1], bands[1] - bands[0]]) / math.sqrt(2.0)


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
	amplitudes = np.empty(n_max + 1, dtype=complex)
	amplitudes[0] = math.exp(-0.5 * abs(alpha) ** 2)
	for n in range(1, n_max + 1):
		amplitudes[n] = amplitudes[n - 1] * alpha / math.sqrt(n)
	return amplitudes


def qrm_initial_state(
	kind: InitialKind | str,
	params: PhysicalParams,
	n_max: int = DEFAULT_N_MAX,
	momentum_offset: float = 0.0,
	relative_phase: float = 0.0,
) -> FockState:
	"""Oscillator vacuum (displaced in momentum by ``momentum_offset``) times the qubit state of ``kind``."""
	try:
		kind = InitialKind(kind)
	except ValueError as e:
		raise ValueError(f'Unknown initial state kind: {kind!r}') from e

	scaled = nondimensionalize(params)
	# q = i p_zpf (a^dag - a) with p_zpf = sqrt(omega) / 2 in scaled units
	alpha = 1j * (momentum_offset / scaled.momentum_unit) / math.sqrt(scaled.omega)
	oscillator = coherent_amplitudes(alpha, n_max)
	amplitudes = np.outer(_band_qubit(kind, relative_phase), oscillator)
	return FockState(amplitudes=amplitudes / np.linalg.norm(amplitudes), time=0.0)


def pad(state: FockState, n_max: int) -> FockState:
	if n_max < state.n_max:
		raise ValueError(f'cannot pad a Fock state of n_max={state.n_max} down to {n_max}')
	amplitudes = np.zeros((2, n_max + 1), dtype=complex)
	amplitudes[:, : state.n_max + 1] = state.amplitudes
	return FockState(amplitudes=amplitudes, time=state.time)


def top_population(state: FockState) -> float:
	"""Population in the top 10% of Fock levels."""
	cutoff = int(math.ceil(0.9 * (state.n_max + 1)))
	return float(np.sum(np.abs(state.amplitudes[:, cutoff:]) ** 2))


class QrmPropagator:
	def __init__(self, params: PhysicalParams, n_max: int = DEFAULT_N_MAX):
		self.params = params
		self.n_max = n_max
		self.time_unit = nondimensionalize(params).time_unit

		logger.debug(f'Diagonalising QRM Hamiltonian of dimension {2 * (n_max + 1)}')
		hamiltonian = qrm_hamiltonian(params, n_max)
		self.energies, self.vectors = scipy.linalg.eigh(hamiltonian)

	def evolve(self, state: FockState, duration: float) -> FockState:
		if state.n_max != self.n_max:
			raise ValueError(f'state truncation {state.n_max} does not match propagator truncation {self.n_max}')

		coefficients = self.vectors.conj().T @ state.amplitudes.reshape(-1)
		phases = np.exp(-1j * self.energies * duration / self.time_unit)
		amplitudes = (self.vectors @ (phases * coefficients)).reshape(2, self.n_max + 1)
		return FockState(amplitudes=amplitudes, time=state.time + duration)

	def is_adequate(self, state: FockState) -> bool:
		return top_population(state) < settings.TRUNCATION_THRESHOLD


def qrm_propagate(
	state: FockState, params: PhysicalParams, dt: float, n_steps: int, max_doublings: int | None = None
) -> FockState:
	"""Exact evolution over n_steps * dt; the truncation is doubled until the top-level check passes."""
	if not dt > 0:
		raise ValueError(f'time step must be positive, got {dt}')
	if n_steps < 0:
		raise ValueError(f'n_steps must be non-negative, got {n_steps}')
	if n_steps == 0:
		return state

	max_doublings = settings.MAX_FOCK_DOUBLINGS if max_doublings is None else max_doublings
	n_max = state.n_max
	for attempt in range(max_doublings + 1):
		propagator = QrmPropagator(params, n_max)
		evolved = propagator.evolve(pad(state, n_max), n_steps * dt)
		if propagator.is_adequate(evolved):
			return evolved
		if attempt < max_doublings:
			logger.warning(f'Fock truncation n_max={n_max} inadequate, doubling to {2 * n_max}')
			n_max *= 2

	raise TruncationError(
		f'Fock truncation still inadequate at n_max={n_max} (top-level population {top_population(evolved):.2e})'
	)


def qrm_overlap(initial: FockState, evolved: FockState) -> float:
	if initial.n_max != evolved.n_max:
		raise ValueError(f'mismatched truncations: {initial.n_max} vs {evolved.n_max}')
	value = abs(np.vdot(initial.amplitudes, evolved.amplitudes)) ** 2
	return float(min(1.0, value))
