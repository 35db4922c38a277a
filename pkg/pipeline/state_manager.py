import json
from dataclasses import asdict
from pathlib import Path
from typing import Any

from models.scenario import Provenance


class StateManager:
	"""Writes the provenance sidecar that travels next to every output CSV."""

	def __init__(self, csv_path: Path | str):
		self.csv_path = Path(csv_path)
		self.provenance_file = self.csv_path.with_name(self.csv_path.name + '.provenance.json')

	def save_provenance(self, provenance: Provenance, config_text: str, diagnostics: dict[str, Any]) -> Path:
		payload = {
			**asdict(provenance),
			'csv': self.csv_path.name,
			'config': config_text,
			'diagnostics': diagnostics,
		}

		self.provenance_file.parent.mkdir(parents=True, exist_ok=True)
		# Atomic write (write to temp, then rename)
		temp_file = self.provenance_file.with_suffix('.tmp')
		with open(temp_file, 'w') as f:
			json.dump(payload, f, indent=2, sort_keys=True, default=str)
		temp_file.replace(self.provenance_file)
		return self.provenance_file

	def load_provenance(self) -> dict[str, Any]:
		with open(self.provenance_file) as f:
			return json.load(f)

	def has_provenance(self) -> bool:
		return self.provenance_file.exists()
