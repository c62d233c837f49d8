"""
Fourier coefficients of exp(i * lam * phi) and A_p norm intervals.

Two engines are provided: a closed-form engine for phases with an affine
surrogate, and a sampling engine for smooth phases. ``compute_spectrum``
picks one automatically.
"""

import logging
from typing import Optional

from ..phases import PhaseFn
from .base import NormEstimate, Spectrum, SpectrumEngine, band_size
from .dft import DFTEngine
from .exact import ExactAffineEngine
from .norms import ap_norm, tails, triangle_coeffs, triangle_tail

logger = logging.getLogger(__name__)


def exact(threads: Optional[int] = None) -> ExactAffineEngine:
    """
    Create the closed-form engine for piecewise-affine phases.

    Args:
        threads: Thread budget for frequency chunks

    Returns:
        ExactAffineEngine instance

    Example:
        spec = apnorm.spectrum.exact().compute(tent(), 8.0, 64)
    """
    return ExactAffineEngine(threads=threads)


def dft(oversample: int = 4) -> DFTEngine:
    """
    Create the sampling engine.

    Args:
        oversample: Samples per band frequency (>= 4)

    Returns:
        DFTEngine instance with one N -> 2N refinement
    """
    return DFTEngine(oversample=oversample)


def default_engine(phase: PhaseFn, threads: Optional[int] = None) -> SpectrumEngine:
    """Exact engine for phases with pieces, sampling engine otherwise."""
    return exact(threads) if phase.pieces is not None else dft()


def compute_spectrum(
    phase: PhaseFn,
    lam: float,
    band: Optional[int] = None,
    engine: Optional[SpectrumEngine] = None,
    band_exponent: float = 1.5,
    band_factor: float = 1.0,
) -> Spectrum:
    """
    Coefficients of exp(i * lam * phase) on a band.

    Args:
        phase: Phase function
        lam: Frequency multiplier
        band: Band half-width K (default ceil(band_factor * |lam| ** band_exponent))
        engine: Engine to use (default chosen from the phase)
        band_exponent: Exponent of the default band policy
        band_factor: Factor of the default band policy

    Returns:
        Spectrum instance
    """
    if band is None:
        band = band_size(lam, band_exponent, band_factor)
    engine = engine or default_engine(phase)
    logger.debug("spectrum of %r at lam=%g, K=%d with %r", phase, lam, band, engine)
    return engine.compute(phase, lam, band)


def coeffs_affine_exact(
    phase: PhaseFn, lam: float, band: int, threads: Optional[int] = None
) -> Spectrum:
    """Closed-form spectrum; raises DispatchError for smooth phases."""
    return ExactAffineEngine(threads=threads).compute(phase, lam, band)


def coeffs_dft(phase: PhaseFn, lam: float, band: int, oversample: int = 4) -> Spectrum:
    """Sampled spectrum with an N -> 2N error estimate."""
    return DFTEngine(oversample=oversample).compute(phase, lam, band)


__all__ = [
    "DFTEngine",
    "ExactAffineEngine",
    "NormEstimate",
    "Spectrum",
    "SpectrumEngine",
    "ap_norm",
    "band_size",
    "coeffs_affine_exact",
    "coeffs_dft",
    "compute_spectrum",
    "default_engine",
    "dft",
    "exact",
    "tails",
    "triangle_coeffs",
    "triangle_tail",
]
