"""
Growth exponents and envelope ratios from norm tables.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError
from .output import NormRow

logger = logging.getLogger(__name__)

MIN_FIT_ROWS = 4
# Relative log half-width below which intervals count as points.
_WIDTH_FLOOR = 1e-9

Window = Tuple[float, float]


@dataclass(frozen=True)
class GrowthFit:
    """
    Weighted log-log fit norm ~ exp(intercept) * lam**exponent.

    Attributes:
        p: Exponent of the norm
        exponent: Fitted slope
        intercept: Fitted log-constant
        stderr: Standard error of the slope
        window: (lam_lo, lam_hi) of the rows used
        count: Number of rows used
        residual_max: Largest absolute log residual
        weights: Weights handed to the least-squares fit
    """

    p: float
    exponent: float
    intercept: float
    stderr: float
    window: Window
    count: int
    residual_max: float
    weights: Tuple[float, ...]

    def __str__(self) -> str:
        return (
            f"p={self.p:g} exponent={self.exponent:.6f} +- {self.stderr:.2g} "
            f"on [{self.window[0]:g}, {self.window[1]:g}] ({self.count} points)"
        )


def rows_for(rows: Sequence[NormRow], p: float) -> List[NormRow]:
    """Rows with the given p, sorted by lambda."""
    return sorted((r for r in rows if abs(r.p - p) <= 1e-12), key=lambda r: r.lam)


def default_window(rows: Sequence[NormRow]) -> Window:
    """Upper half of the lambda grid."""
    lams = sorted({r.lam for r in rows})
    if not lams:
        raise DomainError("no rows")
    upper = lams[len(lams) // 2 :]
    return upper[0], upper[-1]


def full_window(rows: Sequence[NormRow]) -> Window:
    lams = sorted({r.lam for r in rows})
    if not lams:
        raise DomainError("no rows")
    return lams[0], lams[-1]


def fit_exponent(
    rows: Sequence[NormRow], p: float, window: Optional[Window] = None
) -> GrowthFit:
    """
    Fit log(midpoint) against log(lam) by weighted least squares.

    Weights are inverse to the log half-width of each interval,
    log(hi / lo) / 2, floored at 1e-9.

    Args:
        rows: Norm rows (any p; filtered here)
        p: Exponent to fit
        window: Lambda range, inclusive (default: upper half of the grid)

    Returns:
        GrowthFit

    Raises:
        DomainError: If fewer than 4 rows fall in the window or a midpoint
            is not positive

    Example:
        fit = fit_exponent(read_norms("cos.csv"), 1.0)
        fit.exponent   # about 0.5
    """
    selected = rows_for(rows, p)
    if not selected:
        raise DomainError(f"no rows with p = {p:g}")
    lo_lam, hi_lam = window or default_window(selected)
    chosen = [r for r in selected if lo_lam <= r.lam <= hi_lam]
    if len(chosen) < MIN_FIT_ROWS:
        raise DomainError(
            f"fit window [{lo_lam:g}, {hi_lam:g}] holds {len(chosen)} rows; "
            f"need {MIN_FIT_ROWS}"
        )
    if len({r.lam for r in chosen}) < 2:
        raise DomainError("fit window holds a single lambda")
    if any(r.midpoint <= 0.0 for r in chosen):
        raise DomainError("cannot fit non-positive norms")

    x = np.log([r.lam for r in chosen])
    y = np.log([r.midpoint for r in chosen])
    widths = np.array(
        [0.5 * math.log(r.hi / r.lo) if r.lo > 0.0 else math.inf for r in chosen]
    )
    weights = 1.0 / np.maximum(widths, _WIDTH_FLOOR)
    (slope, intercept), cov = np.polyfit(x, y, 1, w=weights, cov=True)
    stderr = float(math.sqrt(max(cov[0, 0], 0.0)))
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    fit = GrowthFit(
        p=float(p),
        exponent=float(slope),
        intercept=float(intercept),
        stderr=stderr,
        window=(float(chosen[0].lam), float(chosen[-1].lam)),
        count=len(chosen),
        residual_max=residual,
        weights=tuple(float(w) for w in weights),
    )
    logger.info("fit %s", fit)
    return fit


def fit_report(rows: Sequence[NormRow], p: float) -> Tuple[GrowthFit, GrowthFit]:
    """(default-window fit, full-window fit)."""
    selected = rows_for(rows, p)
    return fit_exponent(selected, p), fit_exponent(selected, p, full_window(selected))


@dataclass(frozen=True)
class EnvelopeComparison:
    """
    Ratios norm / envelope over a window.

    Attributes:
        lams: Lambdas compared
        ratios: norm / envelope at each lambda
        constant: Geometric mean of the ratios (the fitted constant)
        max_ratio, min_ratio: Extremes of the ratios
    """

    p: float
    lams: Tuple[float, ...]
    ratios: Tuple[float, ...]
    constant: float
    max_ratio: float
    min_ratio: float

    @property
    def spread(self) -> float:
        """max_ratio / min_ratio."""
        return self.max_ratio / self.min_ratio if self.min_ratio > 0 else math.inf


def compare_envelopes(
    rows: Sequence[NormRow],
    envelope: Callable[[float], float],
    p: float,
    window: Optional[Window] = None,
    use: str = "mid",
) -> EnvelopeComparison:
    """
    Compare measured norms with an envelope.

    Args:
        rows: Norm rows
        envelope: lam -> envelope value
        p: Exponent to compare
        window: Lambda range (default: all rows)
        use: Which end of each interval to compare: mid, lo or hi

    Returns:
        EnvelopeComparison
    """
    if use not in ("mid", "lo", "hi"):
        raise DomainError(f"use must be mid, lo or hi, got {use!r}")
    selected = rows_for(rows, p)
    if window is not None:
        selected = [r for r in selected if window[0] <= r.lam <= window[1]]
    if not selected:
        raise DomainError(f"no rows with p = {p:g} in the window")
    values = [r.midpoint if use == "mid" else getattr(r, use) for r in selected]
    ratios = np.array([v / envelope(r.lam) for v, r in zip(values, selected)])
    positive = ratios[ratios > 0]
    constant = float(np.exp(np.mean(np.log(positive)))) if positive.size else 0.0
    return EnvelopeComparison(
        p=float(p),
        lams=tuple(r.lam for r in selected),
        ratios=tuple(float(x) for x in ratios),
        constant=constant,
        max_ratio=float(ratios.max()),
        min_ratio=float(ratios.min()),
    )
