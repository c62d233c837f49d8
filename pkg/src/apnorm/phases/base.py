"""
Phase function representation.

A PhaseFn couples an exact evaluator (and derivative evaluator) with an
optional piecewise-affine representation and the metadata the spectrum and
witness code rely on.
"""

import math
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..errors import DomainError
from ..modulus import TWO_PI, Modulus
from ..modulus.base import ArrayLike

Evaluator = Callable[[np.ndarray], np.ndarray]

CHORD_GRID = 4097
_RUN_TOLERANCE = 1e-14


def monotone_runs(slopes: np.ndarray) -> int:
    """
    Number of maximal monotone runs of a step derivative.

    Differences below a relative tolerance are treated as flat and join
    either neighbour.
    """
    slopes = np.asarray(slopes, dtype=float)
    if slopes.size < 2:
        return 1
    diffs = np.diff(slopes)
    scale = max(float(np.max(np.abs(slopes))), 1.0)
    signs = np.sign(diffs[np.abs(diffs) > _RUN_TOLERANCE * scale])
    if signs.size == 0:
        return 1
    return 1 + int(np.count_nonzero(signs[1:] != signs[:-1]))


class AffinePieces:
    """
    Piecewise-affine function on [0, 2*pi].

    Attributes:
        breaks: Increasing breakpoints, breaks[0] = 0 and breaks[-1] = 2*pi
        slopes: Slope of each piece
        values: Value at the left endpoint of each piece
    """

    def __init__(self, breaks: np.ndarray, slopes: np.ndarray, values: np.ndarray):
        breaks = np.asarray(breaks, dtype=float)
        slopes = np.asarray(slopes, dtype=float)
        values = np.asarray(values, dtype=float)
        shape = (breaks.size - 1,)
        if breaks.ndim != 1 or slopes.shape != shape or values.shape != shape:
            raise DomainError("pieces need n+1 breakpoints and n slopes/values")
        if slopes.size == 0 or np.any(np.diff(breaks) <= 0):
            raise DomainError("breakpoints must be strictly increasing")
        if abs(breaks[0]) > 1e-12 or abs(breaks[-1] - TWO_PI) > 1e-12:
            raise DomainError("pieces must cover [0, 2*pi] exactly")
        self.breaks = breaks
        self.slopes = slopes
        self.values = values
        for arr in (self.breaks, self.slopes, self.values):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return int(self.slopes.size)

    def __iter__(self) -> Iterator[Tuple[Tuple[float, float], float, float]]:
        for i in range(len(self)):
            yield (float(self.breaks[i]), float(self.breaks[i + 1])), float(
                self.slopes[i]
            ), float(self.values[i])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breaks)

    @property
    def right_values(self) -> np.ndarray:
        """Value of each piece at its right endpoint."""
        return self.values + self.slopes * self.widths

    def locate(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breaks, t, side="right") - 1
        return np.clip(idx, 0, len(self) - 1)

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = self.locate(t)
        return self.values[idx] + self.slopes[idx] * (t - self.breaks[idx])

    def slope_at(self, t: np.ndarray) -> np.ndarray:
        return self.slopes[self.locate(np.asarray(t, dtype=float))]

    def endpoint_mismatch(self) -> float:
        """Largest jump between adjacent pieces."""
        if len(self) < 2:
            return 0.0
        return float(np.max(np.abs(self.right_values[:-1] - self.values[1:])))

    def energy(self) -> float:
        """Mean of the squared derivative over the circle."""
        return float(np.sum(self.slopes**2 * self.widths) / TWO_PI)

    def monotone_runs(self) -> int:
        return monotone_runs(self.slopes)

    def transformed(self, scale: float, slope_shift: float) -> "AffinePieces":
        """Pieces of t -> scale * f(t) + slope_shift * t."""
        return AffinePieces(
            self.breaks,
            scale * self.slopes + slope_shift,
            scale * self.values + slope_shift * self.breaks[:-1],
        )


class LipCertificate:
    """
    Probe-grid certificate omega(phi', d) <= constant * omega(d).

    Args:
        modulus: Comparison modulus
        constant: Largest observed ratio over the probe scales
    """

    def __init__(self, modulus: Modulus, constant: float):
        self.modulus = modulus
        self.constant = float(constant)

    def __repr__(self) -> str:
        return f"LipCertificate({self.modulus!r}, {self.constant:.6g})"


class PhaseFn:
    """
    A real phase on [0, 2*pi].

    Smooth phases (``pieces is None``) are routed to the sampling engine;
    phases with pieces go to the exact engine, which transforms the pieces.
    The evaluator is the exact (finite-depth) function, the pieces are its
    affine surrogate, and ``perturbation`` bounds the sup distance between
    the pieces and the infinite-depth ideal.

    Instances are immutable.
    """

    def __init__(
        self,
        name: str,
        evaluator: Evaluator,
        derivative: Evaluator,
        *,
        deriv_bounds: Tuple[float, float],
        monotone_pieces: int,
        pieces: Optional[AffinePieces] = None,
        winding: int = 0,
        mean_sq_deriv: Optional[float] = None,
        perturbation: float = 0.0,
        lip_cert: Optional[LipCertificate] = None,
        continuous_derivative: bool = True,
        params: Optional[Dict[str, Any]] = None,
    ):
        lo, hi = float(deriv_bounds[0]), float(deriv_bounds[1])
        if lo > hi:
            raise DomainError("derivative bounds must satisfy lo <= hi")
        self.name = name
        self._evaluator = evaluator
        self._derivative = derivative
        self.deriv_bounds = (lo, hi)
        self.monotone_pieces = int(monotone_pieces)
        self.pieces = pieces
        self.winding = int(winding)
        self.mean_sq_deriv = mean_sq_deriv
        self.perturbation = float(perturbation)
        self.lip_cert = lip_cert
        self.continuous_derivative = continuous_derivative
        self.params: Dict[str, Any] = dict(params or {})

    def __repr__(self) -> str:
        kind = "smooth" if self.smooth else f"{len(self.pieces or ())} pieces"
        return f"PhaseFn({self.name!r}, {kind}, winding={self.winding})"

    @property
    def smooth(self) -> bool:
        return self.pieces is None

    @property
    def sup_deriv(self) -> float:
        """Certified bound on sup |phi'|."""
        bound = max(abs(self.deriv_bounds[0]), abs(self.deriv_bounds[1]))
        if self.pieces is not None:
            bound = max(bound, float(np.max(np.abs(self.pieces.slopes))))
        return bound

    def energy(self) -> float:
        """
        Certified upper bound for the mean of phi'**2 of the function the
        spectrum engines transform.
        """
        if self.pieces is not None:
            return self.pieces.energy()
        if self.mean_sq_deriv is not None:
            return float(self.mean_sq_deriv)
        return self.sup_deriv**2

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self._evaluator(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    __call__ = evaluate

    def derivative(self, t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self._derivative(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def endpoint_mismatch(self) -> float:
        return 0.0 if self.pieces is None else self.pieces.endpoint_mismatch()

    def increment(self) -> float:
        """phi(2*pi) - phi(0)."""
        return float(self.evaluate(TWO_PI)) - float(self.evaluate(0.0))


def chord_deviation(phase: PhaseFn, interval: Tuple[float, float]) -> float:
    """
    Largest distance between phi and its secant over an interval.

    Samples a uniform grid of CHORD_GRID points plus every breakpoint inside
    the interval, which makes the value exact for piecewise-affine phases.

    Args:
        phase: Phase to test
        interval: (a, b) with 0 <= a < b <= 2*pi

    Returns:
        sup |phi(t) - secant(t)| over the samples
    """
    a, b = float(interval[0]), float(interval[1])
    if not (0.0 <= a < b <= TWO_PI + 1e-12):
        raise DomainError(f"interval ({a}, {b}) not inside [0, 2*pi]")
    t = np.linspace(a, b, CHORD_GRID)
    if phase.pieces is not None:
        inner = phase.pieces.breaks
        t = np.union1d(t, inner[(inner > a) & (inner < b)])
    values = np.asarray(phase.evaluate(t))
    fa, fb = values[0], values[-1]
    secant = fa + (fb - fa) * (t - a) / (b - a)
    return float(np.max(np.abs(values - secant)))


def probe_lip_ratio(
    derivative: Evaluator,
    modulus: Modulus,
    depth: int,
    probes: Optional[int] = None,
    seed: int = 0,
) -> float:
    """
    Largest sampled ratio omega(phi', d) / omega(d) over d = rho_1..rho_depth.

    phi' is sampled on a uniform grid with a seeded random offset; the
    oscillation over windows of length <= d comes from sliding extrema.
    Scales shorter than two grid steps are skipped.

    Args:
        derivative: Derivative evaluator
        modulus: Comparison modulus
        depth: Deepest probe level
        probes: Grid size; default max(2**13, 8 * 2*pi / rho_depth), capped at 2**20
        seed: Seed for the grid offset

    Returns:
        The largest ratio (0.0 for affine phases)
    """
    depth = max(int(depth), 1)
    if probes is None:
        finest = modulus.rho(depth)
        probes = int(min(max(2**13, math.ceil(8.0 * TWO_PI / finest)), 2**20))
    step = TWO_PI / probes
    offset = np.random.default_rng(seed).uniform(0.0, step)
    t = np.minimum(offset + step * np.arange(probes + 1), TWO_PI)
    values = np.asarray(derivative(t), dtype=float)
    best = 0.0
    for j in range(1, depth + 1):
        delta = modulus.rho(j)
        window = int(math.floor(delta / step))
        if window < 2:
            break
        size = window + 1
        upper = ndimage.maximum_filter1d(values, size=size, mode="nearest")
        lower = ndimage.minimum_filter1d(values, size=size, mode="nearest")
        oscillation = float(np.max(upper - lower))
        best = max(best, oscillation / float(modulus.omega(delta)))
    return best
