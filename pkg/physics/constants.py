import math

from scipy import constants

HBAR = constants.hbar  # J s
AMU = constants.atomic_mass  # kg
RB87_MASS_U = 86.909180
RB87_MASS = RB87_MASS_U * AMU
DRIVE_WAVELENGTH = 783.5e-9  # m

TWO_PI = 2.0 * math.pi
