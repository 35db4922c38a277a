import math

import numpy as np
import pytest

from models.observables import ModelTag
from models.state import InitialKind, PulseSpec
from physics.band_models import band_grid_for, band_initial_state
from physics.grid_propagator import GridPropagator, initial_state
from physics.observables import (
	band_occupation,
	excitation_number,
	fold_momentum,
	fold_scaled,
	mean_momentum,
	mean_position,
	phase_averaged_readout,
	phase_space_trajectory,
	record,
	sigma_z_readout,
)
from physics.oracles import displaced_oscillator_excitation, folded_trajectory
from physics.param_engine import derive, nondimensionalize
from physics.qrm import qrm_initial_state


class TestFolding:
	@pytest.mark.parametrize(
		('p_hbar_k', 'q_hbar_k', 'band'),
		[(-2.0, 0.0, 0), (2.0, 0.0, 1), (3.0, 1.0, 1), (0.0, 2.0, 0), (4.0, 2.0, 1), (5.0, -1.0, 2), (-5.0, 1.0, -1)],
	)
	def test_fold_momentum(self, rb346, p_hbar_k, q_hbar_k, band):
		unit = nondimensionalize(rb346).momentum_unit
		q, n = fold_momentum(0.5 * p_hbar_k * unit, rb346)
		assert n == band
		assert q == pytest.approx(0.5 * q_hbar_k * unit, abs=1e-12 * unit)

	def test_fold_array(self):
		q, band = fold_scaled(np.array([-1.5, -0.5, 0.5, 1.5]))
		assert list(band) == [0, 0, 1, 1]
		assert np.allclose(q, [-0.5, 0.5, -0.5, 0.5])

	def test_fold_range_and_inverse(self):
		p = np.linspace(-7.3, 6.1, 101)
		q, band = fold_scaled(p)
		assert np.all(q > -1.0)
		assert np.all(q <= 1.0)
		assert np.allclose(q + 2 * band - 1, p, rtol=0.0, atol=1e-12)


class TestExcitationNumber:
	def test_kick_leaves_trap_ground_state(self, rb346, small_grid):
		state = initial_state(InitialKind.MOMENTUM_KICK, rb346, small_grid)
		assert excitation_number(state, rb346) == pytest.approx(0.0, abs=1e-6)

	def test_models_agree_at_start(self, rb346, small_grid):
		grid_state = initial_state(InitialKind.QUBIT_G, rb346, small_grid)
		band_state = band_initial_state(InitialKind.QUBIT_G, rb346, band_grid_for(small_grid))
		fock_state = qrm_initial_state(InitialKind.QUBIT_G, rb346, 20)

		values = [excitation_number(s, rb346) for s in (grid_state, band_state, fock_state)]
		assert values == pytest.approx([0.0, 0.0, 0.0], abs=1e-6)

	def test_position_and_momentum_in_si(self, rb346, small_grid):
		state = initial_state(InitialKind.MOMENTUM_KICK, rb346, small_grid)
		assert mean_position(state, rb346) == pytest.approx(0.0, abs=1e-15)
		assert mean_momentum(state, rb346) == pytest.approx(-nondimensionalize(rb346).momentum_unit, rel=1e-9)


class TestReadout:
	def test_pulse_phase_rotates_readout(self, rb346, small_grid):
		state = initial_state(InitialKind.QUBIT_G, rb346, small_grid)
		assert sigma_z_readout(state, PulseSpec(phase=math.pi / 3)) == pytest.approx(0.5, abs=1e-9)

	def test_phase_average_washes_out_coherence(self, rb346, small_grid):
		state = initial_state(InitialKind.QUBIT_G, rb346, small_grid)
		assert phase_averaged_readout(state, PulseSpec(), n_phases=4) == pytest.approx(0.0, abs=1e-9)

	def test_band_readout_matches_grid(self, rb346, small_grid):
		pulse = PulseSpec(phase=0.6)
		grid_state = initial_state(InitialKind.CUSTOM, rb346, small_grid, relative_phase=1.1)
		band_state = band_initial_state(InitialKind.CUSTOM, rb346, band_grid_for(small_grid), relative_phase=1.1)
		assert sigma_z_readout(band_state, pulse) == pytest.approx(sigma_z_readout(grid_state, pulse), abs=1e-9)

	def test_fock_states_have_no_readout(self, rb346):
		state = qrm_initial_state(InitialKind.QUBIT_G, rb346, 10)
		with pytest.raises(TypeError):
			sigma_z_readout(state)

	def test_rejects_zero_phases(self, rb346, small_grid):
		state = initial_state(InitialKind.QUBIT_G, rb346, small_grid)
		with pytest.raises(ValueError, match='n_phases'):
			phase_averaged_readout(state, n_phases=0)


class TestRecord:
	def test_grid_record(self, rb346, small_grid):
		state = initial_state(InitialKind.MOMENTUM_KICK, rb346, small_grid)
		result = record(state, rb346, ModelTag.GRID, PulseSpec())

		assert result.model_tag is ModelTag.GRID
		assert result.band_occupation == pytest.approx(1.0, abs=1e-9)
		assert result.readout is not None
		assert result.overlap is None

	def test_record_matches_single_observables(self, rb346, small_grid):
		state = initial_state(InitialKind.MOMENTUM_KICK, rb346, small_grid)
		state = GridPropagator(rb346, small_grid, 100e-9).evolve(state, 1000)
		result = record(state, rb346, ModelTag.GRID)

		assert result.excitation_number == excitation_number(state, rb346)
		assert result.excitation_number > 1.0
		assert result.mean_x == pytest.approx(mean_position(state, rb346), rel=1e-12)
		assert result.mean_p == pytest.approx(mean_momentum(state, rb346), rel=1e-12)

	def test_fock_record_keeps_overlap_only(self, rb346):
		state = qrm_initial_state(InitialKind.MOMENTUM_KICK, rb346, 10)
		result = record(state, rb346, ModelTag.QRM, PulseSpec(), overlap=1.0)
		assert result.readout is None
		assert result.overlap == 1.0

	def test_unsupported_state(self, rb346):
		with pytest.raises(TypeError):
			band_occupation(object())


class TestPhaseSpace:
	def test_trap_ground_state_stays_put(self, rb346, small_grid):
		scaled = nondimensionalize(rb346)
		state = initial_state(InitialKind.MOMENTUM_KICK, rb346, small_grid, momentum_offset=scaled.momentum_unit)
		propagator = GridPropagator(rb346, small_grid, 100e-9)

		states = [state]
		for _ in range(4):
			states.append(propagator.evolve(states[-1], 500))
		trajectory = phase_space_trajectory(states, rb346)

		assert len(trajectory.position_momentum) == 5
		assert np.allclose(trajectory.mean_x, 0.0, atol=1e-9 * scaled.length_unit)
		assert np.allclose(trajectory.mean_p, 0.0, atol=1e-9 * scaled.momentum_unit)
		assert trajectory.times[-1] == pytest.approx(2000 * 100e-9)


class TestOracles:
	def test_folded_orbit_peaks_at_quarter_period(self, rb346):
		period = 1.0 / rb346.trap_freq_hz
		orbit = folded_trajectory(np.array([0.0, 0.25 * period]), rb346)
		ratio = derive(rb346).coupling_ratio

		assert orbit.excitation_number[0] == pytest.approx(0.0, abs=1e-12)
		assert orbit.excitation_number[1] == pytest.approx(2.0 * ratio**2, rel=1e-9)

	def test_displaced_oscillator(self, rb346):
		period = 1.0 / rb346.trap_freq_hz
		ratio = derive(rb346).coupling_ratio
		values = displaced_oscillator_excitation(np.array([0.0, 0.5 * period, period]), rb346)
		assert values == pytest.approx([0.0, 4.0 * ratio**2, 0.0], abs=1e-9)
