from .observables import (
	ModelTag,
	ObservableRecord,
	ObservableSeries,
	PhaseSpaceTrajectory,
)
from .params import (
	DerivedParams,
	FluxoniumParams,
	PhysicalParams,
	RabiTriple,
	ScaledParams,
)
from .run_config import RunConfigFile
from .scenario import (
	NumericsSpec,
	Provenance,
	ScenarioConfig,
	ScenarioId,
	SpreadSpec,
	SweepResult,
)
from .state import (
	BandGrid,
	BandState,
	FockState,
	Grid,
	GridState,
	InitialKind,
	PulseSpec,
	TwoBandState,
)

__all__ = [
	'PhysicalParams',
	'DerivedParams',
	'ScaledParams',
	'FluxoniumParams',
	'RabiTriple',
	'Grid',
	'GridState',
	'BandGrid',
	'BandState',
	'TwoBandState',
	'FockState',
	'InitialKind',
	'PulseSpec',
	'ModelTag',
	'ObservableRecord',
	'ObservableSeries',
	'PhaseSpaceTrajectory',
	'ScenarioId',
	'ScenarioConfig',
	'SpreadSpec',
	'NumericsSpec',
	'Provenance',
	'SweepResult',
	'RunConfigFile',
]
