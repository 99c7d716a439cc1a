import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from scatpoles.utils import raise_value_error

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """Order-preserving thread pool for data-parallel grid points and quadrature nodes.

    numpy/scipy release the GIL inside LAPACK, so threads give real speed-up
    for the dense solves. ``threads == 1`` runs everything inline.

    Args:
        threads (int): Worker count, >= 1.
        logger (logging.Logger, optional): Logger. Defaults to None.

    Examples:
        >>> from scatpoles.solver.pool import WorkerPool
        >>> with WorkerPool(threads=2) as pool:
        ...     pool.map(lambda x: x * x, [1, 2, 3])
        [1, 4, 9]
    """

    classname: str = "WorkerPool"

    def __init__(self, threads: int = 1, logger: Optional[logging.Logger] = None):
        if threads < 1:
            raise_value_error(f"{self.classname}: threads must be >= 1, got {threads}")
        self.threads = threads
        self.logger = logger or logging.getLogger(__name__)
        self._executor: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        items = list(items)
        if self.threads == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        if self._executor is None:
            self.logger.debug(f"{self.classname}: starting {self.threads} threads")
            self._executor = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="scatpoles")
        return list(self._executor.map(fn, items))
