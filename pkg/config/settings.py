from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
	# App Settings
	APP_NAME: str = 'pqrm-sim'
	APP_VERSION: str = '0.1.0'
	LOG_LEVEL: str = 'INFO'
	LOG_FILE: str | None = None

	# Execution
	THREADS: int = 1

	# Numerical validity thresholds
	BAND_CORNER_THRESHOLD: float = 1e-3
	DISCARDED_WEIGHT_THRESHOLD: float = 1e-3
	BOUNDARY_THRESHOLD: float = 1e-8
	NORM_DRIFT_THRESHOLD: float = 1e-8
	TRUNCATION_THRESHOLD: float = 1e-8
	MAX_FOCK_DOUBLINGS: int = 2

	model_config = SettingsConfigDict(env_file='.env', env_file_encoding='utf-8', extra='ignore')


settings = Settings()
