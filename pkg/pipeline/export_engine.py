import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from config.settings import settings  # noqa: E402
from models.observables import ObservableSeries  # noqa: E402
from models.scenario import SweepResult  # noqa: E402
from utils.logger import logger  # noqa: E402

CSV_HEADER = (
	'model',
	'time_s',
	'ex_number',
	'mean_x_m',
	'mean_p_si',
	'mean_q_si',
	'sigma_x',
	'readout',
	'overlap',
	'omega_q_hz',
)
DIFF_SUFFIX = '_diff'

LINE_STYLES = {
	'pqrm': {'linestyle': '-'},
	'multiband': {'linestyle': ':'},
	'qrm': {'linestyle': '--'},
	'grid': {'linestyle': 'none', 'marker': 'o', 'markersize': 2.5},
}
Y_LABELS = {
	'ex_number': r'$\langle N \rangle$',
	'mean_x_m': r'$\langle x \rangle$ (m)',
	'mean_p_si': r'$\langle p \rangle$ (kg m/s)',
	'mean_q_si': r'$\langle q \rangle$ (kg m/s)',
	'sigma_x': r'$\langle \sigma_x \rangle$',
	'readout': r'$n_{p<0}$',
	'overlap': 'overlap',
}


class CsvFormatError(ValueError):
	exit_code = 2


@dataclass(frozen=True)
class CsvTable:
	rows: list[dict[str, str]]

	def models(self) -> list[str]:
		return list(dict.fromkeys(row['model'] for row in self.rows))

	def splittings(self) -> list[str]:
		return list(dict.fromkeys(row['omega_q_hz'] for row in self.rows))

	def select(self, model: str, omega_q_hz: str) -> list[dict[str, str]]:
		return [row for row in self.rows if row['model'] == model and row['omega_q_hz'] == omega_q_hz]


def _number(value: float | None, precision: int) -> str:
	if value is None:
		return ''
	return f'{value:.{precision}g}'


def _write_atomic(path: Path, text: str) -> None:
	path.parent.mkdir(parents=True, exist_ok=True)
	temp_file = path.with_suffix(path.suffix + '.tmp')
	temp_file.write_text(text, encoding='utf-8', newline='')
	temp_file.replace(path)


class ExportEngine:
	def __init__(self, precision: int = 12):
		self.precision = precision

	def series_rows(self, series: list[ObservableSeries]) -> list[list[str]]:
		rows = []
		for s in series:
			omega_q = _number(s.omega_q_hz, self.precision)
			for r in s.records:
				rows.append(
					[
						s.model_tag.value,
						_number(r.time, self.precision),
						_number(r.excitation_number, self.precision),
						_number(r.mean_x, self.precision),
						_number(r.mean_p, self.precision),
						_number(r.mean_q, self.precision),
						_number(r.band_occupation, self.precision),
						_number(r.readout, self.precision),
						_number(r.overlap, self.precision),
						omega_q,
					]
				)
		return rows

	def sweep_rows(self, sweep: SweepResult) -> list[list[str]]:
		model = sweep.model_tag.value + DIFF_SUFFIX
		rows = []
		for i, split in enumerate(sweep.qubit_splits):
			omega_q = _number(float(split) / (2.0 * math.pi), self.precision)
			for j, t in enumerate(sweep.times):
				value = _number(float(sweep.values[i, j]), self.precision)
				rows.append([model, _number(float(t), self.precision), value, '', '', '', '', '', '', omega_q])
		return rows

	def _render(self, rows: list[list[str]]) -> str:
		buffer = io.StringIO()
		writer = csv.writer(buffer, lineterminator='\n')
		writer.writerow(CSV_HEADER)
		writer.writerows(rows)
		return buffer.getvalue()

	def write_series(self, series: list[ObservableSeries], path: Path | str) -> Path:
		path = Path(path)
		_write_atomic(path, self._render(self.series_rows(series)))
		logger.info(f'Wrote {sum(len(s.records) for s in series)} rows to {path}')
		return path

	def write_sweep(self, sweep: SweepResult, path: Path | str) -> Path:
		path = Path(path)
		_write_atomic(path, self._render(self.sweep_rows(sweep)))
		logger.info(f'Wrote {sweep.values.size} sweep rows to {path}')
		return path


def read_csv(path: Path | str) -> CsvTable:
	path = Path(path)
	if not path.exists():
		raise CsvFormatError(f'CSV file not found: {path}')

	with open(path, newline='', encoding='utf-8') as f:
		reader = csv.reader(f)
		header = next(reader, None)
		if header is None:
			raise CsvFormatError(f'{path} is empty')
		if tuple(header) != CSV_HEADER:
			raise CsvFormatError(f'{path}: unexpected header {header}, expected {list(CSV_HEADER)}')

		rows = []
		for line_number, values in enumerate(reader, start=2):
			if len(values) != len(CSV_HEADER):
				raise CsvFormatError(f'{path}:{line_number}: expected {len(CSV_HEADER)} fields, got {len(values)}')
			row = dict(zip(CSV_HEADER, values, strict=True))
			for key in CSV_HEADER[1:]:
				if row[key]:
					try:
						float(row[key])
					except ValueError as e:
						raise CsvFormatError(f'{path}:{line_number}: {key} is not a number: {row[key]!r}') from e
			if not row['time_s'] or not row['omega_q_hz']:
				raise CsvFormatError(f'{path}:{line_number}: time_s and omega_q_hz are required')
			rows.append(row)

	return CsvTable(rows=rows)


def _column(rows: list[dict[str, str]], key: str) -> np.ndarray:
	return np.array([float(row[key]) if row[key] else np.nan for row in rows])


def _time_axis(rows: list[dict[str, str]], trap_freq_hz: float | None) -> np.ndarray:
	times = _column(rows, 'time_s')
	return times * trap_freq_hz if trap_freq_hz else times * 1e3


def _plot_series(table: CsvTable, observable: str, trap_freq_hz: float | None):
	splittings = table.splittings()
	fig, axes = plt.subplots(len(splittings), 1, figsize=(7.0, 2.4 * len(splittings)), sharex=True, squeeze=False)

	for ax, split in zip(axes[:, 0], splittings, strict=True):
		twin = None
		for model in table.models():
			rows = table.select(model, split)
			if not rows:
				continue
			t = _time_axis(rows, trap_freq_hz)
			ax.plot(t, _column(rows, observable), label=model, **LINE_STYLES.get(model, {}))

			# overlap of the qrm series sits next to the readout on its own axis
			if observable == 'readout' and rows[0]['overlap']:
				twin = twin or ax.twinx()
				style = LINE_STYLES.get(model, {})
				twin.plot(t, _column(rows, 'overlap'), color='grey', label=f'{model} overlap', **style)
				twin.set_ylabel('overlap')
				twin.set_ylim(-0.05, 1.05)

		ax.set_ylabel(Y_LABELS.get(observable, observable))
		ax.set_title(rf'$\omega_q/2\pi$ = {float(split):g} Hz', fontsize='medium')
		ax.legend(loc='upper right', fontsize='small')

	axes[-1, 0].set_xlabel(r'$t$ ($2\pi/\omega$)' if trap_freq_hz else r'$t$ (ms)')
	fig.tight_layout()
	return fig


def _plot_sweep(table: CsvTable, trap_freq_hz: float | None):
	model = next(m for m in table.models() if m.endswith(DIFF_SUFFIX))
	rows = [row for row in table.rows if row['model'] == model]
	splittings = sorted({float(row['omega_q_hz']) for row in rows})
	times = sorted({float(row['time_s']) for row in rows})

	matrix = np.full((len(splittings), len(times)), np.nan)
	split_index = {s: i for i, s in enumerate(splittings)}
	time_index = {t: j for j, t in enumerate(times)}
	for row in rows:
		matrix[split_index[float(row['omega_q_hz'])], time_index[float(row['time_s'])]] = float(row['ex_number'])

	t_axis = np.array(times) * (trap_freq_hz if trap_freq_hz else 1e3)
	limit = np.nanmax(np.abs(matrix)) or 1.0

	fig, ax = plt.subplots(figsize=(7.0, 4.5))
	mesh = ax.pcolormesh(t_axis, splittings, matrix, shading='nearest', cmap='RdBu_r', vmin=-limit, vmax=limit)
	fig.colorbar(mesh, ax=ax, label=r'$\langle N \rangle_\uparrow - \langle N \rangle_\downarrow$')
	ax.set_xlabel(r'$t$ ($2\pi/\omega$)' if trap_freq_hz else r'$t$ (ms)')
	ax.set_ylabel(r'$\omega_q/2\pi$ (Hz)')
	ax.set_title(model.removesuffix(DIFF_SUFFIX), fontsize='medium')
	fig.tight_layout()
	return fig


def plot_csv(
	csv_path: Path | str, svg_path: Path | str, observable: str = 'ex_number', trap_freq_hz: float | None = None
) -> Path:
	"""Render a static SVG of a result CSV: stacked panels per splitting, or a colour map for sweeps."""
	table = read_csv(csv_path)
	if not table.rows:
		raise CsvFormatError(f'{csv_path} has no data rows; nothing to plot')
	if observable not in Y_LABELS:
		raise CsvFormatError(f"Unknown observable '{observable}'. Must be one of: {', '.join(Y_LABELS)}")

	plt.rcParams['svg.hashsalt'] = settings.APP_NAME
	if any(m.endswith(DIFF_SUFFIX) for m in table.models()):
		fig = _plot_sweep(table, trap_freq_hz)
	else:
		fig = _plot_series(table, observable, trap_freq_hz)

	svg_path = Path(svg_path)
	svg_path.parent.mkdir(parents=True, exist_ok=True)
	temp_file = svg_path.with_suffix(svg_path.suffix + '.tmp')
	try:
		fig.savefig(temp_file, format='svg', metadata={'Date': None})
	finally:
		plt.close(fig)
	temp_file.replace(svg_path)

	logger.info(f'Wrote plot to {svg_path}')
	return svg_path
