from pathlib import Path

import pytest

from models.params import PhysicalParams
from physics.constants import DRIVE_WAVELENGTH, RB87_MASS
from physics.grid_propagator import make_grid
from physics.param_engine import nondimensionalize

SCENARIOS_DIR = Path(__file__).parent.parent / 'scenarios'


@pytest.fixture
def scenarios_dir():
	return SCENARIOS_DIR


@pytest.fixture
def rb346():
	return PhysicalParams.rubidium(346.0)


@pytest.fixture
def rb650():
	return PhysicalParams.rubidium(650.0)


@pytest.fixture
def time_unit(rb346):
	return nondimensionalize(rb346).time_unit


@pytest.fixture
def toy_params(time_unit):
	"""Stiff trap (scaled omega = 0.5) with a shallow lattice (scaled omega_q = 0.1)."""
	return PhysicalParams(
		mass=RB87_MASS,
		wavelength=DRIVE_WAVELENGTH,
		trap_freq=0.5 / time_unit,
		qubit_split=0.1 / time_unit,
	)


@pytest.fixture
def toy_grid(toy_params):
	# twelve lattice periods on 64 points
	return make_grid(toy_params, n_points=64, length=3.0 * DRIVE_WAVELENGTH)


@pytest.fixture
def small_grid(rb346):
	return make_grid(rb346, n_points=2048)


@pytest.fixture
def base_config_text():
	return '\n'.join(
		[
			'[system]',
			'trap_freq_hz = 346.0',
			'',
			'[scenario]',
			'id = "excitation_number"',
			'models = ["pqrm", "qrm"]',
			'omega_q_hz = [0.0]',
			'n_samples = 5',
			't_end_periods = 0.25',
			'',
			'[grid]',
			'n_points = 2048',
			'fock_n_max = 300',
			'',
		]
	)
