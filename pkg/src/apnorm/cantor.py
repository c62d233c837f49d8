"""
Symmetric perfect sets and their staircase functions.

Level j of the set consists of 2**j closed intervals of length rho_j. Each
level-j interval keeps two children of length rho_{j+1}, one flush with each
end, and loses the open middle. The staircase sigma gains exactly 2**-j
across every level-j interval and is constant on the gaps.

Endpoints are built from the shifts rho_j - rho_{j+1} (the offset of a right
child inside its parent), and sigma is evaluated on [0, L/2] only and
mirrored. sigma(t) + sigma(L - t) = 1 then holds up to the rounding of
L - t, within 1e-12.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .errors import ConstructionError, DomainError
from .modulus import Modulus
from .modulus.base import ArrayLike

logger = logging.getLogger(__name__)

MAX_DEPTH = 40
# Levels beyond this are refused by the enumerating accessors (2**24 intervals).
MAX_ENUMERATION_LEVEL = 24


class CantorLevels:
    """
    Finite-depth description of the perfect set on [0, L].

    The full set lives on [0, 2*pi] (start level 0). ``branch(m)`` gives the
    part of the set inside its leftmost level-m interval, rescaled nowhere:
    it lives on [0, rho_m] and uses the lengths rho_m, ..., rho_J.

    Attributes:
        modulus: Modulus defining the lengths
        depth: Number of levels below the top interval
        start: Absolute level of the top interval
        lengths: rho_start, ..., rho_{start+depth}
        shifts: Offset of the right child inside its parent, per level
    """

    def __init__(self, modulus: Modulus, depth: int, start: int = 0):
        if not (0 <= depth <= MAX_DEPTH):
            raise DomainError(f"depth must be in [0, {MAX_DEPTH}], got {depth}")
        self.modulus = modulus
        self.depth = int(depth)
        self.start = int(start)
        self.lengths = np.array(
            [modulus.rho(start + i) for i in range(self.depth + 1)], dtype=float
        )
        self.shifts = self.lengths[:-1] - self.lengths[1:]
        gap_lengths = self.shifts - self.lengths[1:]
        bad = np.flatnonzero(gap_lengths <= 0)
        if bad.size:
            level = self.start + int(bad[0])
            scale = float(self.lengths[bad[0]])
            raise ConstructionError(
                f"no gap at level {level}: 2 rho_{level + 1} >= rho_{level} "
                f"(scale {scale:.6g})",
                scale=scale,
            )

    @property
    def length(self) -> float:
        """Length L of the top interval."""
        return float(self.lengths[0])

    def rho(self, j: int) -> float:
        """Length of a level-j interval, j relative to the top."""
        return float(self.lengths[j])

    def branch(self, m: int) -> "CantorLevels":
        """
        The set inside the leftmost level-m interval, truncated at the same
        absolute depth.
        """
        if not (0 <= m <= self.depth):
            raise DomainError(f"branch level {m} outside [0, {self.depth}]")
        return CantorLevels(self.modulus, self.depth - m, self.start + m)

    # ------------------------------------------------------------------
    # Level enumeration
    # ------------------------------------------------------------------

    def _check_level(self, j: int) -> None:
        if not (0 <= j <= self.depth):
            raise DomainError(f"level {j} outside [0, {self.depth}]")
        if j > MAX_ENUMERATION_LEVEL:
            raise DomainError(f"level {j} has too many intervals to enumerate")

    def left_endpoints(self, j: int) -> np.ndarray:
        """Sorted left endpoints of the 2**j level-j intervals."""
        self._check_level(j)
        left = np.zeros(1)
        for i in range(j):
            left = np.column_stack([left, left + self.shifts[i]]).ravel()
        return left

    @property
    def levels(self) -> List[np.ndarray]:
        """Left endpoints for every level 0..depth."""
        return [self.left_endpoints(j) for j in range(self.depth + 1)]

    @property
    def staircase_nodes(self) -> np.ndarray:
        """
        Staircase values at the level-J endpoints.

        Returns:
            Array of shape (2**J, 2): sigma at the left and right end of each
            level-J interval
        """
        count = 1 << self.depth
        left = np.arange(count, dtype=float) / count
        return np.column_stack([left, left + 1.0 / count])

    # ------------------------------------------------------------------
    # Staircase
    # ------------------------------------------------------------------

    def _sigma_left_half(self, t: np.ndarray) -> np.ndarray:
        base = np.zeros_like(t)
        corner = np.zeros_like(t)
        result = np.empty_like(t)
        done = np.zeros(t.shape, dtype=bool)
        for i in range(self.depth):
            child = self.lengths[i + 1]
            shift = self.shifts[i]
            gain = math.ldexp(1.0, -(i + 1))
            rel = t - corner
            in_gap = ~done & (rel > child) & (rel < shift)
            result[in_gap] = base[in_gap] + gain
            done |= in_gap
            right = ~done & (rel >= shift)
            base[right] += gain
            corner[right] += shift
        rest = ~done
        frac = np.clip((t[rest] - corner[rest]) / self.lengths[-1], 0.0, 1.0)
        result[rest] = base[rest] + math.ldexp(1.0, -self.depth) * frac
        return result

    def staircase(self, t: ArrayLike) -> ArrayLike:
        """
        Evaluate sigma.

        Exact dyadic values on gaps of depth <= J, linear inside level-J
        intervals. Arguments outside [0, L] are reduced modulo L.
        """
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr).astype(float, copy=True)
        outside = (flat < 0) | (flat > self.length)
        flat[outside] = np.mod(flat[outside], self.length)
        half = self.length / 2.0
        upper = flat > half
        out = np.empty_like(flat)
        out[~upper] = self._sigma_left_half(flat[~upper])
        out[upper] = 1.0 - self._sigma_left_half(self.length - flat[upper])
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def build_levels(modulus: Modulus, depth: int) -> CantorLevels:
    """
    Build the perfect set on [0, 2*pi] to the given depth.

    Args:
        modulus: A strictly doubling modulus
        depth: J in [0, 40]

    Returns:
        CantorLevels instance

    Raises:
        ConstructionError: If the modulus is not strictly doubling
    """
    violation = modulus.doubling_violation(strict=True)
    if violation is not None:
        raise ConstructionError(
            f"{modulus!r} is not strictly doubling at scale {violation:.6g}",
            scale=violation,
        )
    levels = CantorLevels(modulus, depth)
    logger.debug(
        "built %d levels for %r, rho_J=%.3g", depth, modulus, levels.lengths[-1]
    )
    return levels


def cover(levels: CantorLevels, j: int) -> np.ndarray:
    """
    The level-j cover F_j.

    Returns:
        Array of shape (2**j, 2) of closed intervals [a, b]
    """
    left = levels.left_endpoints(j)
    return np.column_stack([left, left + levels.lengths[j]])


def gaps(levels: CantorLevels, j: int) -> np.ndarray:
    """
    The open intervals of [0, L] minus F_j.

    Returns:
        Array of shape (2**j - 1, 2) of open intervals (a, b)
    """
    intervals = cover(levels, j)
    return np.column_stack([intervals[:-1, 1], intervals[1:, 0]])


def staircase(levels: CantorLevels, t: ArrayLike) -> ArrayLike:
    """Module-level form of CantorLevels.staircase."""
    return levels.staircase(t)


def depth_for(
    modulus: Modulus, lam_max: float, budget: float = 0.1, minimum: int = 1
) -> int:
    """
    Smallest depth J >= minimum with lam_max * chi(rho_J) <= budget.

    Args:
        modulus: Modulus of the construction
        lam_max: Largest frequency multiplier of the sweep
        budget: Allowed value of lam_max * chi(rho_J)
        minimum: Lower bound on the returned depth

    Returns:
        The depth, capped at 40
    """
    for j in range(max(minimum, 0), MAX_DEPTH + 1):
        if lam_max * float(modulus.chi(modulus.rho(j))) <= budget:
            return j
    return MAX_DEPTH


def measure(intervals: np.ndarray, clip: Optional[Tuple[float, float]] = None) -> float:
    """Total length of disjoint intervals, optionally clipped to a window."""
    a, b = intervals[:, 0], intervals[:, 1]
    if clip is not None:
        a = np.maximum(a, clip[0])
        b = np.minimum(b, clip[1])
    return float(np.sum(np.maximum(b - a, 0.0)))
