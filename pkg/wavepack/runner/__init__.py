from .config import RunConfig, parse_seeds  # noqa F401
from .pool import get_thread_count, parallel_map  # noqa F401
