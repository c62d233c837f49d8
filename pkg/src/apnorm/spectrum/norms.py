"""
A_p norm intervals from a band of coefficients plus tail bounds.

Beyond the band the coefficients are controlled in two ways:

- the derivative energy: sum (k - c)**2 |c_k|**2 = lam**2 mean(phi'**2), so
  Hoelder against sum |k - c|**(-2p / (2 - p)) bounds the l^p tail;
- the van der Corput bound |c_k| <= C / |k - c| once |k - c| >= 2 lam sup|phi'|.

The smaller of the applicable bounds is used and its cutoffs are reported.
"""

import math
from typing import Dict, Tuple

import numpy as np
from scipy import special

from ..errors import DomainError
from .base import NormEstimate, Spectrum


def triangle_coeffs(epsilon: float, k: np.ndarray) -> np.ndarray:
    """
    Fourier coefficients of the triangle of half-width ``epsilon`` and height 1
    centred at 0:

        (2 / pi) sin(epsilon k / 2)**2 / (epsilon k**2),   epsilon / (2 pi) at k = 0.

    Args:
        epsilon: Half-width in (0, pi]
        k: Integer frequencies

    Returns:
        Non-negative coefficients, same shape as ``k``
    """
    eps = float(epsilon)
    if not (0.0 < eps <= math.pi):
        raise DomainError(f"triangle half-width must lie in (0, pi], got {epsilon!r}")
    k_arr = np.asarray(k, dtype=float)
    safe = np.where(k_arr == 0, 1.0, k_arr)
    out = (2.0 / math.pi) * np.sin(0.5 * eps * safe) ** 2 / (eps * safe * safe)
    out = np.where(k_arr == 0, eps / (2.0 * math.pi), out)
    return float(out) if out.ndim == 0 else out


def triangle_tail(epsilon: float, cutoff: int) -> float:
    """Bound on sum_{|k| > cutoff} triangle_coeffs(epsilon, k)."""
    return float(4.0 / (math.pi * epsilon) * special.zeta(2.0, cutoff + 1))


def _check_p(p: float) -> float:
    p = float(p)
    if not (1.0 <= p <= 2.0):
        raise DomainError(f"p must lie in [1, 2], got {p!r}")
    return p


def _energy_tail(root_r: float, band: int, p: float) -> float:
    """Hoelder tail (sum_{|j| > K} |c_j|**p)**(1/p) from sum j**2 |c_j|**2 <= R."""
    if root_r == 0.0:
        return 0.0
    if p == 2.0:
        return root_r / (band + 1)
    s = 2.0 * p / (2.0 - p)
    return root_r * float(2.0 * special.zeta(s, band + 1)) ** ((2.0 - p) / (2.0 * p))


def _vdc_tail(spec: Spectrum, p: float, root_r: float) -> Tuple[float, float]:
    """van der Corput tail and the cutoff K' where p = 1 hands over to energy."""
    band = spec.band
    c = spec.tail_pointwise
    if p > 1.0:
        return c * float(2.0 * special.zeta(p, band + 1)) ** (1.0 / p), float(band)
    upper = max(band, int(math.ceil(spec.lam * spec.lam)))
    # sum_{K < |j| <= K'} 1 / |j| = 2 (psi(K' + 1) - psi(K + 1))
    harmonic = 2.0 * float(special.digamma(upper + 1) - special.digamma(band + 1))
    return c * harmonic + _energy_tail(root_r, upper, 1.0), float(upper)


def tails(spec: Spectrum, p: float, error: float) -> Tuple[float, Dict[str, float]]:
    """
    Upper bound on (sum over the band's complement of |c_k|**p)**(1/p).

    Args:
        spec: Spectrum
        p: Exponent in [1, 2]
        error: Per-coefficient error used to shrink the in-band energy

    Returns:
        (tail, cutoffs)
    """
    p = _check_p(p)
    if spec.spike:
        return 0.0, {"band": float(spec.band)}
    root_r = math.sqrt(spec.tail_energy(error))
    best = _energy_tail(root_r, spec.band, p)
    cutoffs: Dict[str, float] = {"band": float(spec.band)}
    threshold = 2.0 * abs(spec.lam) * spec.sup_deriv
    if spec.band >= threshold:
        vdc, upper = _vdc_tail(spec, p, root_r)
        cutoffs["pointwise_from"] = threshold
        cutoffs["energy_from"] = upper
        best = min(best, vdc)
    return best, cutoffs


def ap_norm(spec: Spectrum, p: float) -> NormEstimate:
    """
    Interval for the A_p norm of exp(i * lam * phi).

    lo drops the tail and shrinks every coefficient by its error; hi inflates
    every coefficient and adds the tail bound (Minkowski).

    Args:
        spec: Spectrum from any engine
        p: Exponent in [1, 2]

    Returns:
        NormEstimate with lo <= ||exp(i lam phi)||_{A_p} <= hi for the
        computed function, and ideal_lo/ideal_hi for the ideal phase

    Example:
        spec = compute_spectrum(cos_phase(), 64.0)
        ap_norm(spec, 1.0).contains(bessel_sum)
    """
    p = _check_p(p)
    mags = np.abs(spec.coefficients)

    def bracket(error: float) -> Tuple[float, float, float, Dict[str, float]]:
        lower = float(np.sum(np.maximum(mags - error, 0.0) ** p)) ** (1.0 / p)
        upper = float(np.sum((mags + error) ** p)) ** (1.0 / p)
        tail, cutoffs = tails(spec, p, error)
        return lower, upper + tail, tail, cutoffs

    lo, hi, tail, cutoffs = bracket(spec.band_error)
    if spec.perturbation > 0.0:
        ideal_lo, ideal_hi, _, _ = bracket(spec.ideal_error)
    else:
        ideal_lo, ideal_hi = lo, hi
    return NormEstimate(
        p,
        lo,
        hi,
        spec.band,
        tail,
        ideal_lo=ideal_lo,
        ideal_hi=ideal_hi,
        cutoffs=cutoffs,
        engine=spec.engine,
    )
