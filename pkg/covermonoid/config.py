import logging
import os
from dotenv import load_dotenv


load_dotenv()

logger = logging.getLogger(__name__)


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("%s=%r is not an integer, using 1", name, raw)
        return 1
    if value <= 0:
        logger.warning("%s=%d must be positive, using 1", name, value)
        return 1
    return value


# Worker cap for verify and parallel enumerations
THREADS = _positive_int("COVERMONOID_THREADS", os.cpu_count() or 1)

DEFAULT_MAX_ORDER = _positive_int("COVERMONOID_MAX_ORDER", 12)
DEFAULT_PRIME = _positive_int("COVERMONOID_PRIME", 101)

_level = os.getenv("COVERMONOID_LOG_LEVEL", "WARNING").upper()
LOG_LEVEL = _level if isinstance(logging.getLevelName(_level), int) else "WARNING"
