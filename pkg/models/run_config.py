from dataclasses import dataclass, field


@dataclass(frozen=True)
class SystemSection:
	mass_u: float
	wavelength_nm: float
	trap_freq_hz: float
	qubit_split_hz: float = 0.0
	lattice_depth_er: float | None = None  # alternative to qubit_split_hz, in recoil energies


@dataclass(frozen=True)
class GridSection:
	n_points: int
	length_um: float
	dt_ns: float
	n_bands: int
	fock_n_max: int


@dataclass(frozen=True)
class ScenarioSection:
	id: str
	models: tuple[str, ...]
	t_start_periods: float
	t_end_periods: float
	n_samples: int
	omega_q_hz: tuple[float, ...]
	initial_state: str
	relative_phase_rad: float
	momentum_offset_hbar_k: float
	spread_sigma_hbar_k: float
	quadrature_k: int
	pulse_area_rad: float
	pulse_phase_rad: float
	phase_average_k: int


@dataclass(frozen=True)
class OutputSection:
	csv_path: str
	svg_path: str
	precision: int


@dataclass(frozen=True)
class FluxoniumSection:
	"""Circuit energies as E / h in GHz."""

	e_c_ghz: float
	e_j_ghz: float
	e_l_ghz: float
	ext_flux_rad: float


@dataclass(frozen=True)
class RunConfigFile:
	system: SystemSection
	grid: GridSection
	scenario: ScenarioSection
	output: OutputSection
	fluxonium: FluxoniumSection | None = field(default=None)
