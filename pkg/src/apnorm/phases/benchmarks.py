"""
Benchmark phases: affine maps, the cosine and piecewise-linear phases.
"""

from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..modulus import TWO_PI
from .base import AffinePieces, PhaseFn


def linear_phase(slope: int, offset: float = 0.0) -> PhaseFn:
    """
    phi(t) = slope * t + offset, a single affine piece with winding ``slope``.

    Args:
        slope: Integer slope
        offset: Additive constant
    """
    if int(slope) != slope:
        raise DomainError(f"linear phases need an integer slope, got {slope!r}")
    m = int(slope)
    t0 = float(offset)
    pieces = AffinePieces(np.array([0.0, TWO_PI]), np.array([float(m)]), np.array([t0]))
    return PhaseFn(
        "linear",
        pieces.evaluate,
        pieces.slope_at,
        pieces=pieces,
        winding=m,
        deriv_bounds=(m, m),
        monotone_pieces=1,
        mean_sq_deriv=float(m * m),
        continuous_derivative=True,
        params={"slope": m, "offset": t0},
    )


def cos_phase() -> PhaseFn:
    """
    phi(t) = cos(t), the smooth benchmark.

    Its spectrum is known in closed form: the coefficients of exp(i*lam*cos t)
    are i**k J_k(lam).
    """
    return PhaseFn(
        "cos",
        np.cos,
        lambda t: -np.sin(t),
        deriv_bounds=(-1.0, 1.0),
        monotone_pieces=2,
        mean_sq_deriv=0.5,
        params={},
    )


def pl_phase(breakpoints: Sequence[float], values: Sequence[float]) -> PhaseFn:
    """
    Continuous piecewise-linear phase through the given nodes.

    Args:
        breakpoints: Strictly increasing, from 0 to 2*pi
        values: Node values; values[-1] - values[0] must be a multiple of 2*pi

    Returns:
        PhaseFn with one piece per segment

    Example:
        tent = pl_phase([0, math.pi, 2 * math.pi], [0, 1, 0])
    """
    x = np.asarray(breakpoints, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise DomainError(
            "pl_phase needs matching breakpoint/value lists of length >= 2"
        )
    if np.any(np.diff(x) <= 0):
        raise DomainError("pl_phase breakpoints must be strictly increasing")
    if abs(x[0]) > 1e-12 or abs(x[-1] - TWO_PI) > 1e-12:
        raise DomainError("pl_phase breakpoints must span [0, 2*pi]")
    x[0], x[-1] = 0.0, TWO_PI
    turns = (y[-1] - y[0]) / TWO_PI
    winding = int(round(turns))
    if abs(turns - winding) > 1e-9:
        raise DomainError("pl_phase values must be periodic modulo 2*pi")
    slopes = np.diff(y) / np.diff(x)
    pieces = AffinePieces(x, slopes, y[:-1])
    return PhaseFn(
        "pl",
        pieces.evaluate,
        pieces.slope_at,
        pieces=pieces,
        winding=winding,
        deriv_bounds=(float(slopes.min()), float(slopes.max())),
        monotone_pieces=len(pieces),
        continuous_derivative=False,
        params={"breakpoints": x.tolist(), "values": y.tolist()},
    )
