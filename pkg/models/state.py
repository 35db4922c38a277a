import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np


class InitialKind(Enum):
	MOMENTUM_KICK = 'momentum_kick'
	QUBIT_G = 'qubit_g'
	QUBIT_E = 'qubit_e'
	CUSTOM = 'custom'


@dataclass(frozen=True)
class PulseSpec:
	area: float = math.pi / 2  # rad
	phase: float = 0.0  # rad

	def __post_init__(self):
		if not 0.0 <= self.area <= 2.0 * math.pi:
			raise ValueError(f'pulse area must lie in [0, 2pi], got {self.area}')


@dataclass(frozen=True)
class Grid:
	"""Uniform position grid centred on zero spanning ``n_periods`` lattice periods.

	Scaled axes use length unit 1/(2k) and momentum unit 2 hbar k, so the box is
	``n_periods * pi`` long and the momentum spacing is ``2 / n_periods``.
	``momentum_axis`` is in standard FFT ordering (zero first, negative half last).
	"""

	n_points: int
	length: float  # m
	n_periods: int
	wavelength: float  # m

	@property
	def dx(self) -> float:
		return self.length / self.n_points

	@cached_property
	def momentum_axis(self) -> np.ndarray:
		return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

	@property
	def dx_scaled(self) -> float:
		return self.n_periods * np.pi / self.n_points

	@property
	def dp_scaled(self) -> float:
		return 2.0 / self.n_periods

	@cached_property
	def x_scaled(self) -> np.ndarray:
		return (np.arange(self.n_points) - self.n_points // 2) * self.dx_scaled

	@cached_property
	def p_scaled(self) -> np.ndarray:
		return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx_scaled)

	@cached_property
	def p_index(self) -> np.ndarray:
		"""Centred momentum index m; p = m * dp_scaled."""
		return np.arange(self.n_points) - self.n_points // 2

	@cached_property
	def p_scaled_centred(self) -> np.ndarray:
		return self.p_index * self.dp_scaled


@dataclass(frozen=True, eq=False)
class GridState:
	amplitudes: np.ndarray  # unit-norm vector over the position grid
	time: float  # s
	grid: Grid

	@property
	def norm(self) -> float:
		return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class BandGrid:
	"""Concatenated momentum axis for an N-band truncation.

	Bloch band n occupies p in (2n - 2, 2n] (scaled), so bands 0 and 1 together
	cover (-2, 2]. Each band carries ``points_per_band`` quasimomentum samples with
	q in (-1, 1].
	"""

	n_bands: int
	points_per_band: int

	def __post_init__(self):
		if self.n_bands < 2:
			raise ValueError(f'n_bands must be at least 2, got {self.n_bands}')
		if self.points_per_band < 1:
			raise ValueError(f'points_per_band must be positive, got {self.points_per_band}')

	@property
	def band_min(self) -> int:
		return 1 - self.n_bands // 2

	@property
	def band_max(self) -> int:
		return self.band_min + self.n_bands - 1

	@property
	def n_points(self) -> int:
		return self.n_bands * self.points_per_band

	@property
	def dp(self) -> float:
		return 2.0 / self.points_per_band

	@cached_property
	def p_index(self) -> np.ndarray:
		"""Momentum in units of ``dp``; zero marks p = 0 exactly."""
		return np.arange(1, self.n_points + 1) - self.points_per_band * (1 - self.band_min)

	@cached_property
	def p_scaled(self) -> np.ndarray:
		return self.dp * self.p_index

	@cached_property
	def q_scaled(self) -> np.ndarray:
		return np.tile(-1.0 + self.dp * np.arange(1, self.points_per_band + 1), self.n_bands)

	@cached_property
	def band_index(self) -> np.ndarray:
		return np.repeat(np.arange(self.band_min, self.band_max + 1), self.points_per_band)

	@cached_property
	def x_scaled(self) -> np.ndarray:
		return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dp)

	def band_slice(self, band: int) -> slice:
		offset = (band - self.band_min) * self.points_per_band
		return slice(offset, offset + self.points_per_band)


@dataclass(frozen=True, eq=False)
class BandState:
	"""Band-model state stored on the concatenated momentum axis."""

	amplitudes: np.ndarray
	time: float  # s
	band_grid: BandGrid

	@property
	def spinor(self) -> np.ndarray:
		return self.amplitudes.reshape(self.band_grid.n_bands, self.band_grid.points_per_band)

	@property
	def norm(self) -> float:
		return float(np.vdot(self.amplitudes, self.amplitudes).real)


TwoBandState = BandState


@dataclass(frozen=True, eq=False)
class FockState:
	"""Qubit (row 0 = up, row 1 = down) times truncated oscillator Fock space."""

	amplitudes: np.ndarray  # shape (2, n_max + 1)
	time: float  # s

	@property
	def n_max(self) -> int:
		return self.amplitudes.shape[1] - 1

	@property
	def norm(self) -> float:
		return float(np.vdot(self.amplitudes, self.amplitudes).real)
