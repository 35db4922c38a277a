class NumericalValidityError(Exception):
	"""A propagator or observable left its domain of numerical validity."""

	exit_code = 3

	def with_context(self, **coordinates) -> 'NumericalValidityError':
		parts = ', '.join(f'{key}={value}' for key, value in coordinates.items())
		error = type(self)(f'[{parts}] {self}')
		error.coordinates = coordinates
		return error


class BoundaryError(NumericalValidityError):
	pass


class NormDriftError(NumericalValidityError):
	pass


class TruncationError(NumericalValidityError):
	pass


class BandBreakdownError(NumericalValidityError):
	pass
