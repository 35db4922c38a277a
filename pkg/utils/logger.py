import sys

from loguru import logger

from config.settings import settings

LOG_FORMAT = (
	'<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | '
	'<magenta>{process.name}</magenta> | '
	'<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>'
)


def setup_logger(level: str | None = None):
	"""Reset loguru sinks. Worker processes call this again on import, so they share the format."""
	logger.remove()

	level = level or settings.LOG_LEVEL
	logger.add(sys.stderr, level=level, format=LOG_FORMAT)
	if settings.LOG_FILE:
		logger.add(settings.LOG_FILE, level=level, format=LOG_FORMAT, enqueue=True)


setup_logger()
