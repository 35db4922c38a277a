from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .observables import ModelTag
from .params import PhysicalParams
from .state import InitialKind, PulseSpec


class ScenarioId(Enum):
	EXCITATION_NUMBER = 'excitation_number'
	BAND_OCCUPATION = 'band_occupation'
	PHASE_SPACE = 'phase_space'
	COLLAPSE_REVIVAL = 'collapse_revival'
	EXCITATION_DIFFERENCE = 'excitation_difference'


@dataclass(frozen=True)
class SpreadSpec:
	sigma_p: float = 0.0  # kg m/s, zero means a single trajectory
	quadrature_k: int = 7

	def __post_init__(self):
		if self.quadrature_k < 1:
			raise ValueError(f'quadrature order must be at least 1, got {self.quadrature_k}')
		if self.sigma_p < 0:
			raise ValueError(f'momentum spread must be non-negative, got {self.sigma_p}')


@dataclass(frozen=True)
class NumericsSpec:
	n_points: int = 4096
	length: float = 40e-6  # m
	dt: float = 100e-9  # s
	n_bands: int = 6
	fock_n_max: int = 600


@dataclass(frozen=True)
class ScenarioConfig:
	scenario_id: ScenarioId
	params: PhysicalParams
	models: tuple[ModelTag, ...]
	t_start: float  # s
	t_end: float  # s
	n_samples: int
	initial_kind: InitialKind = InitialKind.MOMENTUM_KICK
	relative_phase: float = 0.0  # rad, for InitialKind.CUSTOM
	momentum_offset: float = 0.0  # kg m/s
	omega_q_list: tuple[float, ...] = ()  # rad/s, empty means params.qubit_split only
	spread: SpreadSpec = field(default_factory=SpreadSpec)
	pulse: PulseSpec = field(default_factory=PulseSpec)
	phase_average_k: int = 0
	numerics: NumericsSpec = field(default_factory=NumericsSpec)

	def __post_init__(self):
		if self.n_samples < 2:
			raise ValueError(f'at least two time samples are required, got {self.n_samples}')
		if not self.t_end > self.t_start:
			raise ValueError(f'empty time span [{self.t_start}, {self.t_end}]')
		if self.t_start < 0:
			raise ValueError(f'time span must start at t >= 0, got {self.t_start}')
		if not self.models:
			raise ValueError('at least one model must be selected')

	@property
	def sample_times(self) -> np.ndarray:
		return np.linspace(self.t_start, self.t_end, self.n_samples)

	@property
	def qubit_splits(self) -> tuple[float, ...]:
		return self.omega_q_list or (self.params.qubit_split,)


@dataclass(frozen=True)
class Provenance:
	config_hash: str
	code_version: str
	started_at: str  # ISO timestamp
	finished_at: str  # ISO timestamp
	threads: int


@dataclass(frozen=True, eq=False)
class SweepResult:
	"""Observable matrix indexed [omega_q index, time index]."""

	times: np.ndarray  # s
	qubit_splits: np.ndarray  # rad/s
	values: np.ndarray
	model_tag: ModelTag
	observable: str = 'excitation_difference'
	provenance: Provenance | None = None
	diagnostics: dict[str, Any] = field(default_factory=dict)

	def __post_init__(self):
		expected = (len(self.qubit_splits), len(self.times))
		if self.values.shape != expected:
			raise ValueError(f'sweep matrix shape {self.values.shape} does not match axes {expected}')
