import os
import logging
from logging.handlers import RotatingFileHandler

# Logging configuration
LOG_LEVEL = os.environ.get("FCM_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Log directory and file settings
LOG_DIR = os.environ.get("FCM_LOG_DIR", os.path.join(os.getcwd(), "logs"))
LOG_FILE = os.path.join(LOG_DIR, "fcm_effects.log")
LOG_MAX_BYTES = int(os.environ.get("FCM_LOG_MAX_BYTES", 10 * 1024 * 1024))  # 10 MB default
LOG_BACKUP_COUNT = int(os.environ.get("FCM_LOG_BACKUP_COUNT", 5))  # Keep 5 backup files

OUTPUT_DIR = os.environ.get("FCM_OUTPUT_DIR", os.path.join(os.getcwd(), "output"))

# Worker threads for all-pairs / all-sources solves and graph generation in benches
DEFAULT_THREADS = int(os.environ.get("FCM_THREADS", "1"))

# Exhaustive oracle guard rails
PATH_BUDGET = int(os.environ.get("FCM_PATH_BUDGET", str(10 ** 8)))
EXHAUSTIVE_MAX_N = int(os.environ.get("FCM_EXHAUSTIVE_MAX_N", "13"))

# Generator: smallest weight magnitude drawn for a random FCM
MIN_MAGNITUDE = float(os.environ.get("FCM_MIN_MAGNITUDE", "1e-3"))

# Inference defaults
MAX_ITER = int(os.environ.get("FCM_MAX_ITER", "100"))
TOLERANCE = float(os.environ.get("FCM_TOLERANCE", "1e-5"))

_configured = False


def configure_logging(level: str = None, log_file: str = None) -> logging.Logger:
    """Install the console + rotating file handlers on the root logger.

    Safe to call more than once; only the first call attaches handlers.
    """
    global _configured
    level = level or LOG_LEVEL
    log_file = log_file or LOG_FILE
    app_logger = logging.getLogger("fcm_effects")
    if _configured:
        logging.getLogger().setLevel(level)
        return app_logger

    # Create logs directory if it doesn't exist
    os.makedirs(os.path.dirname(log_file), exist_ok=True)

    # Configure root logger
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT
    )
    logging.getLogger().setLevel(level)

    # Create file handler with rotation
    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=LOG_MAX_BYTES,
        backupCount=LOG_BACKUP_COUNT,
        encoding='utf-8'
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))

    # Add file handler to root logger so all modules use it
    logging.getLogger().addHandler(file_handler)
    _configured = True

    app_logger.debug(f"Logging initialized. Log file: {log_file}")
    return app_logger
