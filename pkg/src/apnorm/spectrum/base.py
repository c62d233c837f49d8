"""
Spectrum containers and the engine interface.
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import DomainError
from ..phases import PhaseFn, lift

# Largest distance of lam * w from an integer accepted as integral.
INTEGER_TOLERANCE = 1e-9


class Spectrum:
    """
    Fourier coefficients of exp(i * lam * phi) on a band around the centre.

    The band holds k = centre - K .. centre + K, where centre = lam * w for a
    phase of winding w. Coefficients are those of the computed function
    (affine surrogate or sampled phase); ``perturbation`` bounds the sup
    distance of that function's phase to the ideal one.

    Attributes:
        lam: Frequency multiplier
        band: Half-width K of the band
        centre: Integer centre lam * w
        coefficients: Complex array of length 2K + 1
        band_error: Uniform bound on each coefficient's error
        tail_pointwise: C with |c_k| <= C / |k - centre| beyond 2 * |lam| * sup_deriv
        energy: Mean of the squared derivative of the lifted phase
        sup_deriv: sup |phi_0'| of the lifted phase
        perturbation: Sup distance of the computed phase to the ideal one
        engine: Name of the engine that produced the spectrum
        spike: True when the spectrum is an exact single coefficient
        total_power: Power of the full transform (sampling engines only)
    """

    def __init__(
        self,
        lam: float,
        band: int,
        centre: int,
        coefficients: np.ndarray,
        band_error: float,
        *,
        tail_pointwise: float,
        energy: float,
        sup_deriv: float,
        perturbation: float = 0.0,
        engine: str = "",
        spike: bool = False,
        total_power: Optional[float] = None,
    ):
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (2 * band + 1,):
            raise DomainError("a spectrum needs 2K + 1 coefficients")
        coefficients.setflags(write=False)
        self.lam = float(lam)
        self.band = int(band)
        self.centre = int(centre)
        self.coefficients = coefficients
        self.band_error = float(band_error)
        self.tail_pointwise = float(tail_pointwise)
        self.energy = float(energy)
        self.sup_deriv = float(sup_deriv)
        self.perturbation = float(perturbation)
        self.engine = engine
        self.spike = spike
        self.total_power = total_power

    def __repr__(self) -> str:
        return (
            f"Spectrum(lam={self.lam:g}, K={self.band}, centre={self.centre}, "
            f"engine={self.engine!r}, band_error={self.band_error:.3g})"
        )

    @property
    def frequencies(self) -> np.ndarray:
        return self.centre + np.arange(-self.band, self.band + 1)

    @property
    def offsets(self) -> np.ndarray:
        """k - centre for every band entry."""
        return np.arange(-self.band, self.band + 1)

    @property
    def ideal_error(self) -> float:
        """Per-coefficient error against the ideal phase."""
        return self.band_error + abs(self.lam) * self.perturbation

    def coefficient(self, k: int) -> complex:
        """Coefficient at frequency k (0 outside the band)."""
        j = int(k) - self.centre
        if abs(j) > self.band:
            return 0.0j
        return complex(self.coefficients[j + self.band])

    def band_power(self) -> float:
        """Sum of |c_k|**2 over the band."""
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def tail_energy(self, error: Optional[float] = None) -> float:
        """
        Bound R on sum over the band's complement of (k - centre)**2 |c_k|**2.

        R = lam**2 * energy minus the in-band part of the same sum, with each
        in-band coefficient shrunk by ``error`` (default band_error).
        """
        if self.spike:
            return 0.0
        e = self.band_error if error is None else float(error)
        shrunk = np.maximum(np.abs(self.coefficients) - e, 0.0)
        inside = float(np.sum((self.offsets.astype(float) * shrunk) ** 2))
        total = self.lam * self.lam * self.energy * (1.0 + 1e-12)
        return max(total - inside, 0.0)

    @property
    def tail_l2(self) -> float:
        """Bound on the l2 norm of the coefficients outside the band."""
        return math.sqrt(self.tail_energy()) / (self.band + 1)


class NormEstimate:
    """
    Interval for an A_p norm.

    Attributes:
        p: Exponent in [1, 2]
        lo, hi: Bracket of the norm of the computed function (the affine
            surrogate or the sampled phase). These are the columns of the
            norms table written by the `norms` command and read by `fit`.
        ideal_lo, ideal_hi: lo and hi widened by lam * perturbation per
            coefficient, bracketing the infinite-depth phase. Never tabulated.
        band: Band half-width K
        tail: Upper bound used for the coefficients outside the band
        cutoffs: Frequencies at which the tail bound switches form
    """

    def __init__(
        self,
        p: float,
        lo: float,
        hi: float,
        band: int,
        tail: float,
        ideal_lo: Optional[float] = None,
        ideal_hi: Optional[float] = None,
        cutoffs: Optional[Dict[str, float]] = None,
        engine: str = "",
    ):
        if lo > hi:
            raise DomainError(f"empty norm interval [{lo}, {hi}]")
        self.p = float(p)
        self.lo = float(lo)
        self.hi = float(hi)
        self.band = int(band)
        self.tail = float(tail)
        self.ideal_lo = self.lo if ideal_lo is None else float(ideal_lo)
        self.ideal_hi = self.hi if ideal_hi is None else float(ideal_hi)
        self.cutoffs = dict(cutoffs or {})
        self.engine = engine

    def __repr__(self) -> str:
        bracket = f"[{self.lo:.6g}, {self.hi:.6g}]"
        return f"NormEstimate(p={self.p:g}, {bracket}, K={self.band})"

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack


class SpectrumEngine(ABC):
    """
    Base interface for coefficient engines.

    Engines are configured at construction and are safe to share between
    threads.
    """

    name: str = "abstract"

    @abstractmethod
    def supports(self, phase: PhaseFn) -> bool:
        """Whether this engine can transform ``phase``."""
        pass

    @abstractmethod
    def compute(self, phase: PhaseFn, lam: float, band: int) -> Spectrum:
        """
        Coefficients of exp(i * lam * phase) on the band of half-width ``band``.

        Args:
            phase: Phase function
            lam: Frequency multiplier
            band: Band half-width K >= 1

        Returns:
            Spectrum instance
        """
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def centred_lift(phase: PhaseFn, lam: float) -> Tuple[PhaseFn, int]:
    """
    Lift a winding phase and return the integer spectral centre lam * w.

    Raises:
        DomainError: If lam * w is not an integer
    """
    lifted, w = lift(phase)
    shift = lam * w
    centre = int(round(shift))
    if abs(shift - centre) > INTEGER_TOLERANCE * max(1.0, abs(shift)):
        raise DomainError(
            f"exp(i lam phi) is not periodic: lam * winding = {shift:.12g} "
            "is not an integer"
        )
    return lifted, centre


def check_band(band: int) -> int:
    if int(band) != band or band < 1:
        raise DomainError(f"band half-width must be a positive integer, got {band!r}")
    return int(band)


def band_size(lam: float, exponent: float = 1.5, factor: float = 1.0) -> int:
    """Default band K = ceil(factor * |lam| ** exponent), at least 1."""
    return max(int(math.ceil(factor * abs(float(lam)) ** exponent - 1e-9)), 1)
