from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class ModelTag(Enum):
	GRID = 'grid'
	PQRM = 'pqrm'
	MULTIBAND = 'multiband'
	QRM = 'qrm'


@dataclass(frozen=True)
class ObservableRecord:
	time: float  # s
	excitation_number: float
	mean_x: float  # m
	mean_p: float  # kg m/s
	mean_q: float  # kg m/s
	var_x: float  # m^2
	var_q: float  # (kg m/s)^2
	band_occupation: float
	model_tag: ModelTag
	readout: float | None = None
	overlap: float | None = None

	def __post_init__(self):
		# round-off can push a vacuum-like state a hair below zero
		if self.excitation_number < -1e-6:
			raise ValueError(f'excitation_number must be non-negative, got {self.excitation_number}')
		if abs(self.band_occupation) > 1.0 + 1e-9:
			raise ValueError(f'band_occupation outside [-1, 1]: {self.band_occupation}')
		if self.readout is not None and abs(self.readout) > 1.0 + 1e-9:
			raise ValueError(f'readout outside [-1, 1]: {self.readout}')
		if self.overlap is not None and not -1e-9 <= self.overlap <= 1.0 + 1e-9:
			raise ValueError(f'overlap outside [0, 1]: {self.overlap}')


@dataclass(frozen=True)
class ObservableSeries:
	model_tag: ModelTag
	omega_q_hz: float
	initial_kind: str
	records: tuple[ObservableRecord, ...]
	diagnostics: dict[str, Any] = field(default_factory=dict)

	@property
	def times(self) -> list[float]:
		return [r.time for r in self.records]

	def values(self, name: str) -> list[float | None]:
		return [getattr(r, name) for r in self.records]


@dataclass(frozen=True)
class PhaseSpaceTrajectory:
	times: tuple[float, ...]  # s
	mean_x: tuple[float, ...]  # m
	mean_p: tuple[float, ...]  # kg m/s
	mean_q: tuple[float, ...]  # kg m/s

	@property
	def position_momentum(self) -> list[tuple[float, float]]:
		return list(zip(self.mean_x, self.mean_p, strict=True))

	@property
	def position_quasimomentum(self) -> list[tuple[float, float]]:
		return list(zip(self.mean_x, self.mean_q, strict=True))
