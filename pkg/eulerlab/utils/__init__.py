from .log import setup_logger
from .parallel import ordered_map, thread_count

__all__ = ["setup_logger", "ordered_map", "thread_count"]
