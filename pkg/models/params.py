import math
from dataclasses import dataclass, field, replace

from physics.constants import DRIVE_WAVELENGTH, HBAR, RB87_MASS, TWO_PI


@dataclass(frozen=True)
class PhysicalParams:
	"""Laboratory-frame parameters of the trap + lattice system.

	The lattice depth is not an independent field: V = 2 hbar omega_q always holds,
	so it is derived from ``qubit_split`` (use ``with_lattice_depth`` to go the other way).
	"""

	mass: float  # kg
	wavelength: float  # m
	trap_freq: float  # rad/s
	qubit_split: float = 0.0  # rad/s
	lattice_depth: float = field(init=False)  # J
	wavevector: float = field(init=False)  # 1/m

	def __post_init__(self):
		if not self.mass > 0:
			raise ValueError(f'mass must be positive, got {self.mass}')
		if not self.wavelength > 0:
			raise ValueError(f'wavelength must be positive, got {self.wavelength}')
		if not self.trap_freq > 0:
			raise ValueError(f'trap_freq must be positive, got {self.trap_freq}')
		if not self.qubit_split >= 0:
			raise ValueError(f'qubit_split must be non-negative, got {self.qubit_split}')

		object.__setattr__(self, 'lattice_depth', 2.0 * HBAR * self.qubit_split)
		object.__setattr__(self, 'wavevector', TWO_PI / self.wavelength)

	@classmethod
	def rubidium(cls, trap_freq_hz: float, qubit_split_hz: float = 0.0, wavelength: float = DRIVE_WAVELENGTH):
		return cls(
			mass=RB87_MASS,
			wavelength=wavelength,
			trap_freq=TWO_PI * trap_freq_hz,
			qubit_split=TWO_PI * qubit_split_hz,
		)

	def with_qubit_split(self, qubit_split: float) -> 'PhysicalParams':
		return replace(self, qubit_split=qubit_split)

	def with_lattice_depth(self, lattice_depth: float) -> 'PhysicalParams':
		return replace(self, qubit_split=lattice_depth / (2.0 * HBAR))

	@property
	def trap_freq_hz(self) -> float:
		return self.trap_freq / TWO_PI

	@property
	def qubit_split_hz(self) -> float:
		return self.qubit_split / TWO_PI


@dataclass(frozen=True)
class DerivedParams:
	coupling: float  # rad/s
	coupling_ratio: float
	qubit_ratio: float
	trap_period: float  # s
	recoil_energy: float  # J


@dataclass(frozen=True)
class ScaledParams:
	"""Dimensionless parameter set with hbar = 1 and momentum unit 2 hbar k.

	``mass`` and ``wavevector`` are the unit anchors needed to go back to SI.
	"""

	omega: float
	omega_q: float
	mass: float
	wavevector: float

	@property
	def lattice_depth(self) -> float:
		return 2.0 * self.omega_q

	@property
	def coupling(self) -> float:
		return math.sqrt(self.omega)

	@property
	def momentum_unit(self) -> float:
		return 2.0 * HBAR * self.wavevector

	@property
	def length_unit(self) -> float:
		return 1.0 / (2.0 * self.wavevector)

	@property
	def energy_unit(self) -> float:
		return self.momentum_unit**2 / (2.0 * self.mass)

	@property
	def time_unit(self) -> float:
		return HBAR / self.energy_unit


@dataclass(frozen=True)
class FluxoniumParams:
	"""Circuit energies in angular-frequency units (hbar = 1)."""

	E_C: float
	E_J: float
	E_L: float
	ext_flux: float = math.pi

	def __post_init__(self):
		for name in ('E_C', 'E_J', 'E_L'):
			value = getattr(self, name)
			if not value > 0:
				raise ValueError(f'{name} must be positive, got {value}')


@dataclass(frozen=True)
class RabiTriple:
	trap_freq: float  # rad/s
	qubit_split: float  # rad/s
	coupling: float  # rad/s

	@property
	def coupling_ratio(self) -> float:
		return self.coupling / self.trap_freq

	@property
	def qubit_ratio(self) -> float:
		return self.qubit_split / self.trap_freq
