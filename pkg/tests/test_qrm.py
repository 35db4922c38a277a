import numpy as np
import pytest

from models.params import PhysicalParams
from models.state import InitialKind
from physics.errors import TruncationError
from physics.observables import band_occupation, excitation_number, moments
from physics.oracles import coherent_overlap, displaced_oscillator_excitation, folded_trajectory
from physics.param_engine import nondimensionalize
from physics.qrm import QrmPropagator, qrm_hamiltonian, qrm_initial_state, qrm_overlap, qrm_propagate


@pytest.fixture(scope='module')
def propagator346():
	return QrmPropagator(PhysicalParams.rubidium(346.0), 400)


class TestHamiltonian:
	def test_hermitian(self):
		h = qrm_hamiltonian(PhysicalParams.rubidium(346.0, qubit_split_hz=800.0), 30)
		assert h.shape == (62, 62)
		assert np.allclose(h, h.conj().T)


class TestInitialState:
	def test_kick_is_vacuum_in_lower_band(self, rb346):
		state = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 50)
		result = moments(state, rb346)

		assert excitation_number(state, rb346) == pytest.approx(0.0, abs=1e-12)
		assert result.band_occupation == pytest.approx(1.0, abs=1e-12)
		assert result.mean_p == pytest.approx(-1.0, abs=1e-12)
		assert result.var_x == pytest.approx(1.0 / nondimensionalize(rb346).omega, rel=1e-9)

	def test_qubit_g_is_sigma_z_eigenstate(self, rb346):
		state = qrm_initial_state(InitialKind.QUBIT_G, rb346, 10)
		assert abs(state.amplitudes[0, 0]) == pytest.approx(1.0, abs=1e-12)
		assert band_occupation(state) == pytest.approx(0.0, abs=1e-12)

	def test_momentum_offset_displaces_quasimomentum(self, rb346):
		scaled = nondimensionalize(rb346)
		state = qrm_initial_state('momentum_kick', rb346, 80, momentum_offset=0.3 * scaled.momentum_unit)
		result = moments(state, rb346)
		assert result.mean_q == pytest.approx(0.3, abs=1e-10)
		assert result.mean_p == pytest.approx(-0.7, abs=1e-10)


class TestEvolution:
	def test_displaced_oscillator_without_lattice(self, rb346, propagator346):
		period = 1.0 / rb346.trap_freq_hz
		initial = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 400)
		times = np.array([0.125, 0.25, 0.5]) * period
		expected = displaced_oscillator_excitation(times, rb346)

		for t, n in zip(times, expected, strict=True):
			state = propagator346.evolve(initial, t)
			assert excitation_number(state, rb346) == pytest.approx(n, rel=1e-6)
			assert propagator346.is_adequate(state)

	def test_peak_excitation(self, rb346, propagator346):
		initial = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 400)
		state = propagator346.evolve(initial, 0.5 / rb346.trap_freq_hz)
		ratio = 1.0 / np.sqrt(nondimensionalize(rb346).omega)
		assert excitation_number(state, rb346) == pytest.approx(4.0 * ratio**2, rel=0.005)

	def test_overlap_revives_after_one_period(self, rb346, propagator346):
		period = 1.0 / rb346.trap_freq_hz
		initial = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 400)

		half = propagator346.evolve(initial, 0.5 * period)
		full = propagator346.evolve(initial, period)
		assert qrm_overlap(initial, half) == pytest.approx(coherent_overlap([0.5 * period], rb346)[0], abs=1e-10)
		assert qrm_overlap(initial, full) == pytest.approx(1.0, abs=1e-6)

	def test_phase_space_follows_classical_orbit(self, rb346, propagator346):
		"""Before the packet crosses p = 0 the centroid matches the folded classical orbit."""
		scaled = nondimensionalize(rb346)
		period = 1.0 / rb346.trap_freq_hz
		initial = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 400)
		times = np.array([0.05, 0.125, 0.2]) * period
		orbit = folded_trajectory(times, rb346)

		for i, t in enumerate(times):
			result = moments(propagator346.evolve(initial, t), rb346)
			assert result.mean_x * scaled.length_unit == pytest.approx(orbit.x[i], rel=1e-6)
			assert result.mean_q * scaled.momentum_unit == pytest.approx(orbit.q[i], rel=1e-6)
			assert result.mean_p * scaled.momentum_unit == pytest.approx(orbit.p[i], rel=1e-6)


class TestTruncation:
	def test_doubles_until_adequate(self, rb346):
		state = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 200)
		duration = 0.5 / rb346.trap_freq_hz
		evolved = qrm_propagate(state, rb346, duration / 100, 100, max_doublings=1)
		assert evolved.n_max == 400
		assert evolved.norm == pytest.approx(1.0, abs=1e-10)

	def test_raises_when_doubling_is_exhausted(self, rb346):
		state = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 20)
		duration = 0.5 / rb346.trap_freq_hz
		with pytest.raises(TruncationError, match='n_max=20'):
			qrm_propagate(state, rb346, duration / 10, 10, max_doublings=0)

	def test_overlap_needs_matching_truncation(self, rb346):
		a = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 20)
		b = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 40)
		with pytest.raises(ValueError, match='mismatched'):
			qrm_overlap(a, b)

	def test_propagator_rejects_other_truncation(self, rb346):
		state = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 20)
		with pytest.raises(ValueError, match='truncation'):
			QrmPropagator(rb346, 30).evolve(state, 1e-4)
