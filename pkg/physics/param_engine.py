import math

from models.params import DerivedParams, FluxoniumParams, PhysicalParams, RabiTriple, ScaledParams
from physics.constants import HBAR, TWO_PI
from utils.logger import logger


def recoil_energy(params: PhysicalParams) -> float:
	return (2.0 * HBAR * params.wavevector) ** 2 / (2.0 * params.mass)


def derive(params: PhysicalParams) -> DerivedParams:
	coupling = params.wavevector * math.sqrt(2.0 * HBAR * params.trap_freq / params.mass)
	return DerivedParams(
		coupling=coupling,
		coupling_ratio=coupling / params.trap_freq,
		qubit_ratio=params.qubit_split / params.trap_freq,
		trap_period=TWO_PI / params.trap_freq,
		recoil_energy=recoil_energy(params),
	)


def nondimensionalize(params: PhysicalParams) -> ScaledParams:
	"""Express params with hbar = 1, momentum unit 2 hbar k and energy unit E_r.

	In these units H = p^2 + (omega^2 / 4) x^2 + (V / 2) cos(2x) and g / omega = 1 / sqrt(omega).
	"""
	rate = recoil_energy(params) / HBAR
	return ScaledParams(
		omega=params.trap_freq / rate,
		omega_q=params.qubit_split / rate,
		mass=params.mass,
		wavevector=params.wavevector,
	)


def redimensionalize(scaled: ScaledParams) -> PhysicalParams:
	rate = scaled.energy_unit / HBAR
	return PhysicalParams(
		mass=scaled.mass,
		wavelength=TWO_PI / scaled.wavevector,
		trap_freq=scaled.omega * rate,
		qubit_split=scaled.omega_q * rate,
	)


def fluxonium_map(flux: FluxoniumParams) -> RabiTriple:
	"""Map circuit energies onto the trap frequency, qubit splitting and coupling.

	Follows from E_C = 2k^2/m, E_L = m omega^2 / 16k^2, E_J = omega_q (hbar = 1),
	hence E_L E_C = omega^2 / 8.
	"""
	if not math.isclose(flux.ext_flux, math.pi, rel_tol=0.0, abs_tol=1e-12):
		logger.warning(f'External flux {flux.ext_flux:.6f} rad differs from pi, the atomic mapping is not exact')

	return RabiTriple(
		trap_freq=math.sqrt(8.0 * flux.E_L * flux.E_C),
		qubit_split=flux.E_J,
		coupling=(8.0 * flux.E_L * flux.E_C**3) ** 0.25,
	)


def atomic_to_fluxonium(params: PhysicalParams) -> FluxoniumParams:
	k = params.wavevector
	return FluxoniumParams(
		E_C=2.0 * HBAR * k**2 / params.mass,
		E_J=params.qubit_split,
		E_L=params.mass * params.trap_freq**2 / (16.0 * HBAR * k**2),
		ext_flux=math.pi,
	)


def rabi_triple(params: PhysicalParams) -> RabiTriple:
	return RabiTriple(trap_freq=params.trap_freq, qubit_split=params.qubit_split, coupling=derive(params).coupling)
