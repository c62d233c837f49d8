"""
Resolution refinement for sampled computations.

A GridRefinement runs a sampled computation at resolution N, then at
factor * N, and so on, and reports the largest change between the last two
runs as an empirical error estimate.
"""

import logging
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

logger = logging.getLogger(__name__)


class RefinementResult:
    """
    Outcome of a refinement loop.

    Attributes:
        values: Output of the finest run
        resolution: Resolution of the finest run
        change: Largest absolute difference between the last two runs
        error: change inflated by the strategy's safety factor
        runs: Number of evaluations performed
    """

    def __init__(
        self,
        values: np.ndarray,
        resolution: int,
        change: float,
        error: float,
        runs: int,
    ):
        self.values = values
        self.resolution = resolution
        self.change = change
        self.error = error
        self.runs = runs

    def __repr__(self) -> str:
        return (
            f"RefinementResult(resolution={self.resolution}, change={self.change:.3g}, "
            f"runs={self.runs})"
        )


class GridRefinement:
    """
    Resolution-doubling refinement strategy.

    Args:
        max_refinements: Number of refinements after the first run (>= 1)
        factor: Resolution multiplier per refinement (>= 2)
        inflation: Factor applied to the observed change
        tolerance: Stop early once the change is at most this; None runs
            every refinement
    """

    def __init__(
        self,
        max_refinements: int = 1,
        factor: int = 2,
        inflation: float = 4.0,
        tolerance: Optional[float] = None,
    ):
        if max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")
        if factor < 2:
            raise DomainError("factor must be >= 2")
        self.max_refinements = int(max_refinements)
        self.factor = int(factor)
        self.inflation = float(inflation)
        self.tolerance = tolerance

    def execute(
        self, func: Callable[[int], np.ndarray], resolution: int
    ) -> RefinementResult:
        """
        Run ``func`` at increasing resolution.

        Args:
            func: Maps a resolution to an array of fixed shape
            resolution: Starting resolution

        Returns:
            RefinementResult for the finest run
        """
        previous = np.asarray(func(resolution))
        change = float("inf")
        runs = 1
        for attempt in range(self.max_refinements):
            resolution *= self.factor
            current = np.asarray(func(resolution))
            runs += 1
            change = float(np.max(np.abs(current - previous))) if current.size else 0.0
            logger.debug(
                "refinement %d: N=%d, change %.3g", attempt + 1, resolution, change
            )
            previous = current
            if self.tolerance is not None and change <= self.tolerance:
                break
        error = self.inflation * change
        return RefinementResult(previous, resolution, change, error, runs)


def doubling(inflation: float = 4.0) -> GridRefinement:
    """
    A single N -> 2N probe.

    Example:
        result = apnorm.refine.doubling().execute(sample, 1024)
        result.error   # 4 * max |f_2048 - f_1024|
    """
    return GridRefinement(max_refinements=1, factor=2, inflation=inflation)


def until_stable(tolerance: float, max_refinements: int = 4) -> GridRefinement:
    """
    Keep doubling until the change drops to ``tolerance``.

    Args:
        tolerance: Target change between successive runs
        max_refinements: Upper bound on the number of doublings
    """
    return GridRefinement(max_refinements=max_refinements, tolerance=tolerance)
