# src/besselpairs/workers/pool.py

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from besselpairs.config.settings import settings
from besselpairs.utils.logger import get_logger

T = TypeVar("T")
U = TypeVar("U")

log = get_logger(__name__)


def ordered_map(fn: Callable[[T], U], items: Iterable[T], threads: Optional[int] = None) -> List[U]:
    """Apply fn concurrently; results come back in input order.

    Exceptions propagate from the first failing item in input order, so callers
    that must not abort catch inside fn.
    """
    items = list(items)
    threads = settings.threads if threads is None else threads
    workers = max(1, min(threads, len(items) or 1))
    if workers == 1:
        return [fn(item) for item in items]

    log.debug("pool_start", items=len(items), workers=workers)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="bessel") as executor:
        futures = [executor.submit(fn, item) for item in items]
        return [future.result() for future in futures]
