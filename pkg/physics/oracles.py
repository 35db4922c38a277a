"""Closed-form references for the lattice-free limit (omega_q = 0)."""

from dataclasses import dataclass

import numpy as np

from models.params import PhysicalParams
from physics.observables import fold_scaled
from physics.param_engine import derive, nondimensionalize


@dataclass(frozen=True)
class ClassicalTrajectory:
	times: np.ndarray  # s
	x: np.ndarray  # m
	p: np.ndarray  # kg m/s
	q: np.ndarray  # kg m/s
	excitation_number: np.ndarray


def folded_trajectory(times: np.ndarray, params: PhysicalParams, momentum_offset: float = 0.0) -> ClassicalTrajectory:
	"""Classical orbit from p(0) = -2hk + offset, x(0) = 0 with momentum folded into the first zone.

	<N> follows from the folded orbit; the Gaussian zero-point spread cancels the 1/2 exactly.
	"""
	scaled = nondimensionalize(params)
	omega = scaled.omega
	phase = params.trap_freq * np.asarray(times, dtype=float)
	p0 = momentum_offset / scaled.momentum_unit - 1.0

	p = p0 * np.cos(phase)
	x = 2.0 * p0 * np.sin(phase) / omega
	q, _ = fold_scaled(p)
	number = (0.25 * omega**2 * x**2 + q**2) / omega

	return ClassicalTrajectory(
		times=np.asarray(times, dtype=float),
		x=x * scaled.length_unit,
		p=p * scaled.momentum_unit,
		q=np.asarray(q) * scaled.momentum_unit,
		excitation_number=number,
	)


def displaced_oscillator_excitation(times: np.ndarray, params: PhysicalParams) -> np.ndarray:
	"""QRM <N>(t) = 2 (g / omega)^2 (1 - cos omega t) for a sigma_x eigenstate in the vacuum."""
	ratio = derive(params).coupling_ratio
	return 2.0 * ratio**2 * (1.0 - np.cos(params.trap_freq * np.asarray(times, dtype=float)))


def coherent_overlap(times: np.ndarray, params: PhysicalParams) -> np.ndarray:
	"""Return probability exp(-|alpha(t)|^2) of the displaced oscillator."""
	return np.exp(-displaced_oscillator_excitation(times, params))
