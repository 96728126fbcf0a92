# common/utils.py
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

LOG_LEVEL_ENV = "PAULI_LAB_LOG_LEVEL"
THREADS_ENV = "PAULI_LAB_THREADS"
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"

# Fixed so that Monte Carlo results do not depend on the thread count.
MC_CHUNKS = 16


def setup_logging(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Attaches one stderr handler to the named logger. The level comes from the
    argument, then PAULI_LAB_LOG_LEVEL, then INFO; unknown names fall back to INFO.
    Calling it again only updates the level.
    """
    logger = logging.getLogger(name)
    requested = (level or os.getenv(LOG_LEVEL_ENV) or "INFO").upper()
    resolved = logging.getLevelName(requested)
    known = isinstance(resolved, int)
    logger.setLevel(resolved if known else logging.INFO)
    if not any(getattr(h, "_pauli_lab", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
        handler._pauli_lab = True
        logger.addHandler(handler)
        # Reports go to stdout; keep log lines off the root handlers.
        logger.propagate = False
    if not known:
        logger.warning(f"Unknown log level {requested!r}, using INFO")
    return logger


def worker_count() -> int:
    """Thread cap from PAULI_LAB_THREADS, else the CPU count."""
    raw = os.getenv(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logging.getLogger(__name__).warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map over items on a thread pool; output order follows input order."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def chunk_seeds(seed: int, chunks: int = MC_CHUNKS) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(chunks)


def split_counts(total: int, chunks: int = MC_CHUNKS) -> List[int]:
    base, extra = divmod(total, chunks)
    return [base + (1 if i < extra else 0) for i in range(chunks)]


def parse_count(text: str) -> int:
    """Integer from plain or scientific notation ("2e9")."""
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"expected an integer count, got {text!r}")
        return int(value)

