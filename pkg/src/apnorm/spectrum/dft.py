"""
Sampling engine: discrete Fourier transform of exp(i * lam * phi).

The error estimate is empirical. The band is computed at N = s * 2K samples
and again at 2N, and the largest coefficient change is inflated by 4. This
is not a certificate; rigorous runs use the exact engine.
"""

import logging
import threading
import warnings
from typing import Dict, Optional

import numpy as np
from scipy import fft

from ..errors import DomainError
from ..modulus import TWO_PI
from ..phases import PhaseFn
from ..refine import GridRefinement, doubling
from .base import Spectrum, SpectrumEngine, centred_lift, check_band

logger = logging.getLogger(__name__)

MIN_OVERSAMPLE = 4


def sampled_energy(phase: PhaseFn) -> float:
    """Mean of phi'**2 for the evaluator itself, not for an affine surrogate."""
    if phase.mean_sq_deriv is not None:
        return float(phase.mean_sq_deriv)
    return phase.sup_deriv**2


class DFTEngine(SpectrumEngine):
    """
    Engine for any phase with an exact evaluator.

    Args:
        oversample: Samples per band frequency, s >= 4 (N = s * 2K)
        refinement: Resolution refinement strategy (default: one N -> 2N probe
            with inflation 4)
        workers: Worker threads handed to scipy.fft
    """

    name = "dft"

    def __init__(
        self,
        oversample: int = MIN_OVERSAMPLE,
        refinement: Optional[GridRefinement] = None,
        workers: Optional[int] = None,
    ):
        if int(oversample) != oversample or oversample < MIN_OVERSAMPLE:
            raise DomainError(f"oversample must be an integer >= {MIN_OVERSAMPLE}")
        self.oversample = int(oversample)
        self.refinement = refinement or doubling()
        self.workers = workers
        self._warned = False
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"DFTEngine(oversample={self.oversample})"

    def supports(self, phase: PhaseFn) -> bool:
        return True

    def compute(self, phase: PhaseFn, lam: float, band: int) -> Spectrum:
        band = check_band(band)
        lam = float(lam)
        lifted, centre = centred_lift(phase, lam)
        self._advise()
        powers: Dict[int, float] = {}

        def sample(n: int) -> np.ndarray:
            t = TWO_PI * np.arange(n) / n
            values = np.exp(1j * lam * np.asarray(lifted.evaluate(t)))
            transform = fft.fft(values, workers=self.workers) / n
            powers[n] = float(np.sum(np.abs(transform) ** 2))
            index = np.arange(-band, band + 1) % n
            return transform[index]

        start = max(self.oversample * 2 * band, 2 * band + 2)
        try:
            result = self.refinement.execute(sample, start)
        except MemoryError:
            logger.error("dft engine ran out of memory at lam=%g, K=%d", lam, band)
            raise
        logger.debug(
            "dft engine: lam=%g K=%d N=%d change=%.3g",
            lam,
            band,
            result.resolution,
            result.change,
        )
        return Spectrum(
            lam,
            band,
            centre,
            result.values,
            result.error,
            tail_pointwise=2.0 * lifted.monotone_pieces,
            energy=sampled_energy(lifted),
            sup_deriv=lifted.sup_deriv,
            perturbation=phase.perturbation,
            engine=self.name,
            total_power=powers[result.resolution],
        )

    def _advise(self) -> None:
        with self._lock:
            if self._warned:
                return
            self._warned = True
        message = "dft engine error estimates are empirical (N vs 2N), not certified"
        logger.info(message)
        warnings.warn(message, UserWarning, stacklevel=3)
