import math

DEFAULT_SYSTEM = {
	'mass_u': 86.909180,
	'wavelength_nm': 783.5,
	'trap_freq_hz': 346.0,
	'qubit_split_hz': 0.0,
}

DEFAULT_GRID = {
	'n_points': 4096,
	'length_um': 40.0,
	'dt_ns': 100.0,
	'n_bands': 6,
	'fock_n_max': 600,
}

DEFAULT_SCENARIO = {
	'id': 'excitation_number',
	'models': ['grid', 'pqrm', 'qrm'],
	't_start_periods': 0.0,
	't_end_periods': 2.2,
	'n_samples': 200,
	'omega_q_hz': [],
	'initial_state': 'momentum_kick',
	'relative_phase_rad': 0.0,
	'momentum_offset_hbar_k': 0.0,
	'spread_sigma_hbar_k': 0.0,
	'quadrature_k': 7,
	'pulse_area_rad': math.pi / 2,
	'pulse_phase_rad': 0.0,
	'phase_average_k': 0,
}

DEFAULT_OUTPUT = {
	'csv_path': 'output/run.csv',
	'svg_path': '',
	'precision': 12,
}

DEFAULT_FLUXONIUM = {
	'ext_flux_rad': math.pi,
}

# Scenario presets; explicit config keys win.
SCENARIO_PRESETS = {
	'excitation_number': {
		'models': ['grid', 'pqrm', 'qrm'],
		'omega_q_hz': [0.0, 800.0, 1280.0],
		'initial_state': 'momentum_kick',
	},
	'band_occupation': {
		'models': ['grid', 'pqrm'],
		'omega_q_hz': [0.0, 1750.0],
		'initial_state': 'momentum_kick',
	},
	'phase_space': {
		'models': ['grid', 'pqrm', 'qrm'],
		'omega_q_hz': [0.0, 800.0],
		'initial_state': 'momentum_kick',
	},
	'collapse_revival': {
		'models': ['pqrm', 'qrm'],
		'omega_q_hz': [0.0, 800.0, 1280.0],
		'initial_state': 'qubit_g',
	},
	'excitation_difference': {
		'models': ['pqrm'],
		'omega_q_hz': [float(f) for f in range(0, 2001, 100)],
		't_end_periods': 1.2,
		'n_samples': 61,
	},
}

VALID_SCENARIOS = list(SCENARIO_PRESETS)
VALID_MODELS = ['grid', 'pqrm', 'multiband', 'qrm']
VALID_INITIAL_STATES = ['momentum_kick', 'qubit_g', 'qubit_e', 'custom']
