"""
Nested nowhere-linear phase.

S_M = sum_{m <= M} eps_m f_m, where f_0 is the Cantor primitive on [0, 2*pi]
and f_m (m >= 1) is the primitive of the level-m branch set, copied affinely
onto an interval I_m placed concentrically in the largest gap left by the
sets already used. Each f_m is affine-free on I_m and vanishes off it, so
the sum is not affine on any I_m.
"""

import logging
import math
import warnings
from typing import List, Tuple

import numpy as np

from ..cantor import CantorLevels, build_levels, cover
from ..errors import DomainError
from ..modulus import TWO_PI, Modulus
from .base import AffinePieces, LipCertificate, PhaseFn, probe_lip_ratio
from .cantor import StaircasePrimitive

logger = logging.getLogger(__name__)

# Cover level used to locate gaps; deeper gaps are shorter than rho_q anyway.
GAP_SEARCH_LEVEL = 10


class NestedSchedule:
    """
    Bookkeeping of a nested construction.

    Attributes:
        levels: Number of levels M actually built
        requested: Number of levels asked for
        head_weight: eps_0
        intervals: (M + 1, 2) array, row m is I_m (I_0 = [0, 2*pi])
        epsilons: eps_0 .. eps_M
        weights: eps_m * rho_m / |I_m|, the sup of |eps_m f_m'|
        residuals: delta_0 .. delta_M, delta_j = sum of the weights beyond j
    """

    def __init__(
        self,
        modulus: Modulus,
        requested: int,
        head_weight: float,
        intervals: np.ndarray,
        epsilons: np.ndarray,
        residuals: np.ndarray,
        primitives: List[StaircasePrimitive],
    ):
        self.modulus = modulus
        self.requested = int(requested)
        self.head_weight = float(head_weight)
        self.intervals = intervals
        self.epsilons = epsilons
        self.residuals = residuals
        self.levels = int(epsilons.size - 1)
        self._primitives = primitives
        rho = np.array([modulus.rho(m) for m in range(self.levels + 1)])
        self.weights = epsilons * rho / (intervals[:, 1] - intervals[:, 0])

    def __repr__(self) -> str:
        return f"NestedSchedule(levels={self.levels}, requested={self.requested})"

    @property
    def remainder(self) -> float:
        """delta_M: bound on sup |r_M'| for the omitted tail."""
        return float(self.residuals[-1])

    def total_weight(self) -> float:
        """sum_m eps_m rho_m / |I_m| including the omitted tail; equals 1."""
        return float(np.sum(self.weights) + self.remainder)

    def scale(self, m: int) -> float:
        """Contraction r_m = |I_m| / rho_m of the copy onto I_m."""
        a, b = self.intervals[m]
        return float((b - a) / self.modulus.rho(m))

    def term(self, m: int, t: np.ndarray) -> np.ndarray:
        """eps_m f_m(t), the exact level-m summand."""
        t = np.asarray(t, dtype=float)
        a, b = self.intervals[m]
        out = np.zeros_like(t)
        inside = (t >= a) & (t <= b)
        if np.any(inside):
            local = (t[inside] - a) / self.scale(m)
            out[inside] = self.epsilons[m] * self._primitives[m].evaluate(local)
        return out

    def term_derivative(self, m: int, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a, b = self.intervals[m]
        out = np.zeros_like(t)
        inside = (t >= a) & (t <= b)
        if np.any(inside):
            r = self.scale(m)
            local = (t[inside] - a) / r
            out[inside] = self.epsilons[m] / r * self._primitives[m].derivative(local)
        return out

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return sum((self.term(m, t) for m in range(self.levels + 1)), np.zeros_like(t))

    def derivative(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        terms = (self.term_derivative(m, t) for m in range(self.levels + 1))
        return sum(terms, np.zeros_like(t))

    def perturbation(self) -> float:
        """Sup distance of the surrogate pieces to the infinite-depth phase."""
        local = sum(
            float(self.epsilons[m]) * self._primitives[m].perturbation
            for m in range(self.levels + 1)
        )
        half_next = math.ldexp(self.modulus.rho(self.levels + 1), -(self.levels + 2))
        tail = self.remainder * half_next
        return local + tail


def _largest_gap(occupied: np.ndarray) -> Tuple[float, float]:
    """Largest open gap of [0, 2*pi] minus closed intervals (leftmost on ties)."""
    order = np.argsort(occupied[:, 0], kind="stable")
    spans = occupied[order]
    reach = np.maximum.accumulate(spans[:, 1])
    starts = reach[:-1]
    ends = spans[1:, 0]
    lengths = ends - starts
    best = int(np.argmax(lengths))
    return float(starts[best]), float(ends[best])


def _splice(
    pieces: Tuple[np.ndarray, np.ndarray, np.ndarray],
    window: Tuple[float, float],
    insert: Tuple[np.ndarray, np.ndarray, np.ndarray],
    eps: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Add eps * insert (supported in window) to the affine piece containing window."""
    breaks, slopes, values = pieces
    a, b = window
    idx = int(np.searchsorted(breaks, 0.5 * (a + b), side="right") - 1)
    x0, slope, value = breaks[idx], slopes[idx], values[idx]
    ib, islopes, ivalues = insert
    new_breaks = np.concatenate([breaks[: idx + 1], ib[:-1], [b], breaks[idx + 1 :]])
    new_slopes = np.concatenate(
        [slopes[: idx + 1], slope + eps * islopes, [slope], slopes[idx + 1 :]]
    )
    new_values = np.concatenate(
        [
            values[: idx + 1],
            value + slope * (ib[:-1] - x0) + eps * ivalues,
            [value + slope * (b - x0)],
            values[idx + 1 :],
        ]
    )
    return new_breaks, new_slopes, new_values


def nested_phase(
    modulus: Modulus,
    levels: int,
    depth: int,
    head_weight: float = 0.5,
    min_interval: float = 1e-9,
    seed: int = 0,
) -> Tuple[PhaseFn, NestedSchedule]:
    """
    Build the depth-J, M-level nested phase S_M.

    Args:
        modulus: Strictly doubling modulus
        levels: Number of nested levels M >= 1
        depth: Truncation depth J >= M of every Cantor primitive
        head_weight: eps_0 in [0, 1); the remaining weight 1 - eps_0 is
            spread over levels 1.. by the residual schedule
            delta_j = (1 - eps_0) * chi(rho_{j+1}) / chi(rho_1)
        min_interval: Smallest admissible |I_m|; construction stops below it
        seed: Seed of the Lip probe grid

    Returns:
        (phase, schedule); phase.pieces is the affine surrogate of S_M

    Example:
        phi, schedule = nested_phase(apnorm.modulus.power(0.5), levels=4, depth=12)
        schedule.total_weight()   # 1.0
    """
    if levels < 1:
        raise DomainError("nested_phase needs at least one level")
    if depth < levels:
        raise DomainError(f"depth {depth} must be >= levels {levels}")
    if not (0.0 <= head_weight < 1.0):
        raise DomainError(f"head_weight must lie in [0, 1), got {head_weight!r}")

    base = build_levels(modulus, depth)
    chi_1 = float(modulus.chi(modulus.rho(1)))
    residual = [
        (1.0 - head_weight) * float(modulus.chi(modulus.rho(j + 1))) / chi_1
        for j in range(levels + 1)
    ]

    head = StaircasePrimitive(base)
    primitives = [head]
    intervals = [(0.0, TWO_PI)]
    epsilons = [float(head_weight)]
    pieces = (head.breaks.copy(), head_weight * head.slopes, head_weight * head.values)
    occupied = [cover(base, min(GAP_SEARCH_LEVEL, depth))]

    for m in range(1, levels + 1):
        start, end = _largest_gap(np.vstack(occupied))
        rho_m = modulus.rho(m)
        size = min(math.ldexp(rho_m, -m), (end - start) / 3.0)
        if size < min_interval:
            message = (
                f"nested construction stopped after {m - 1} of {levels} levels: "
                "gap too small"
            )
            logger.warning(message)
            warnings.warn(message, UserWarning, stacklevel=2)
            break
        centre = 0.5 * (start + end)
        a, b = centre - 0.5 * size, centre + 0.5 * size
        r = size / rho_m
        branch: CantorLevels = base.branch(m)
        primitive = StaircasePrimitive(branch)
        eps = (residual[m - 1] - residual[m]) * size / rho_m
        pieces = _splice(pieces, (a, b), primitive.pieces_on(a, 1.0 / r), eps)
        primitives.append(primitive)
        intervals.append((a, b))
        epsilons.append(eps)
        occupied.append(a + r * cover(branch, min(GAP_SEARCH_LEVEL, branch.depth)))
        logger.debug("level %d: I=[%.6g, %.6g], eps=%.3g", m, a, b, eps)

    built = len(epsilons) - 1
    schedule = NestedSchedule(
        modulus,
        levels,
        head_weight,
        np.array(intervals, dtype=float),
        np.array(epsilons, dtype=float),
        np.array(residual[: built + 1], dtype=float),
        primitives,
    )
    surrogate = AffinePieces(*pieces)
    ratio = probe_lip_ratio(schedule.derivative, modulus, depth, seed=seed)
    logger.info(
        "nested phase: %d levels, %d pieces, depth %d", built, len(surrogate), depth
    )
    phase = PhaseFn(
        "nested",
        schedule.evaluate,
        schedule.derivative,
        pieces=surrogate,
        deriv_bounds=(-1.0, 1.0),
        monotone_pieces=surrogate.monotone_runs(),
        perturbation=schedule.perturbation(),
        lip_cert=LipCertificate(modulus, ratio),
        params={
            "levels": built,
            "requested": levels,
            "depth": depth,
            "head_weight": head_weight,
            "modulus": modulus.describe(),
        },
    )
    return phase, schedule
