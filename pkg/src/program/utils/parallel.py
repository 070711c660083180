from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np


def map_chunks(fn: Callable[[np.ndarray], np.ndarray], values: np.ndarray, max_workers: int = 1) -> np.ndarray:
    """Apply fn to contiguous chunks of values and concatenate along the first axis.

    Results do not depend on max_workers; chunks are re-joined in order.
    """
    values = np.asarray(values)
    if max_workers <= 1 or values.shape[0] < 2 * max_workers:
        return fn(values)
    chunks = np.array_split(values, max_workers)
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="deltascatter") as executor:
        results = list(executor.map(fn, chunks))
    return np.concatenate(results, axis=0)
