import logging
import os
from logging.handlers import RotatingFileHandler

from config import Config

LOG_DIR = Config.LOGS_DIR
LOG_FILE = Config.LOG_FILE

# Ensure log directory exists
os.makedirs(LOG_DIR, exist_ok=True)

# Set up rotating file handler (5MB per file, keep 3 backups)
handler = RotatingFileHandler(LOG_FILE, maxBytes=5*1024*1024, backupCount=3)
formatter = logging.Formatter('%(asctime)s %(levelname)s %(message)s', datefmt='%Y-%m-%d %H:%M:%S')
handler.setFormatter(formatter)

logger = logging.getLogger("groupalg")
logger.setLevel(getattr(logging, str(Config.LOG_LEVEL).upper(), logging.INFO))
if not logger.hasHandlers():
    logger.addHandler(handler)

# Convenience functions

def log_debug(message):
    logger.debug(message)

def log_info(message):
    logger.info(message)

def log_warning(message):
    logger.warning(message)

def log_error(message):
    logger.error(message)


def log_verdict(check: str, subject: str, outcome) -> None:
    """One INFO line per verdict: check name, subject, outcome."""
    logger.info(f"{check} [{subject}] -> {outcome}")
