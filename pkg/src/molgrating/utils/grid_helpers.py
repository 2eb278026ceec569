from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
from tqdm import tqdm


def evaluate_on_grid(
    func: Callable[[float], complex],
    grid: np.ndarray,
    max_workers: int = 1,
    progress: bool = False,
    desc: str = "K2 grid",
) -> np.ndarray:
    """
    Evaluate `func` at every grid point and return the values as a complex array in grid order.

    With max_workers > 1 the points are handed to a thread pool; executor.map keeps the input order, so the
    result is identical to the serial evaluation.
    """
    grid = np.asarray(grid, dtype=float)
    points = [float(k) for k in grid]
    max_workers = max(1, min(max_workers, len(points)))

    if max_workers == 1:
        values = [func(k) for k in tqdm(points, desc=desc, disable=not progress)]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            values = list(tqdm(executor.map(func, points), total=len(points), desc=desc, disable=not progress))

    return np.asarray(values, dtype=complex).reshape(grid.shape)
