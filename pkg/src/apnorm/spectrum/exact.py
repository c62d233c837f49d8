"""
Closed-form coefficients for piecewise-affine phases.

On a piece [x, x + L] with phase lam * (a (t - x) + v) the integral of
exp(i (lam * phi(t) - k t)) is

    L * exp(i (lam v - k x)) * exp(i beta L / 2) * sinc(beta L / 2)

with beta = lam * a - k, so every coefficient is a finite sum with no
quadrature error.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..errors import DispatchError
from ..modulus import TWO_PI
from ..parallel import parallel_map
from ..phases import AffinePieces, PhaseFn
from .base import Spectrum, SpectrumEngine, centred_lift, check_band

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
# Below this |beta * L| the sinc factor is replaced by its series.
SERIES_THRESHOLD = 1e-8
DEFAULT_CHUNK = 2048
# Upper bound on frequencies x pieces per chunk.
BLOCK_ELEMENTS = 1 << 21


def _piece_integrals(
    pieces: AffinePieces, lam: float, offsets: np.ndarray
) -> np.ndarray:
    """(1 / 2 pi) sum over pieces of the closed-form integral, per offset."""
    x = pieces.breaks[:-1]
    widths = pieces.widths
    a = lam * pieces.slopes
    v = lam * pieces.values
    k = offsets.astype(float)[:, None]
    beta = a[None, :] - k
    half = 0.5 * beta * widths[None, :]
    small = np.abs(beta * widths[None, :]) < SERIES_THRESHOLD
    shape = np.where(small, 1.0 - half * half / 6.0, np.sinc(half / math.pi))
    phase = v[None, :] - k * x[None, :] + half
    terms = widths[None, :] * shape * np.exp(1j * phase)
    return terms.sum(axis=1) / TWO_PI


def coefficient_roundoff(pieces: AffinePieces, lam: float, band: int) -> float:
    """
    Roundoff bound 8 eps (1 + A + n) of the closed-form sum over n pieces,
    A the largest argument magnitude reached.
    """
    args = (
        np.abs(lam * pieces.values)
        + band * np.abs(pieces.breaks[:-1])
        + 0.5 * (np.abs(lam * pieces.slopes) + band) * pieces.widths
    )
    return 8.0 * EPS * (1.0 + float(np.max(args)) + len(pieces))


class ExactAffineEngine(SpectrumEngine):
    """
    Engine for phases with an affine surrogate.

    Args:
        threads: Thread budget for the frequency chunks (None: CPU count,
            capped by APNORM_THREADS)
        chunk: Frequencies per chunk
    """

    name = "exact"

    def __init__(self, threads: Optional[int] = None, chunk: int = DEFAULT_CHUNK):
        self.threads = threads
        self.chunk = max(int(chunk), 1)

    def __repr__(self) -> str:
        return f"ExactAffineEngine(threads={self.threads}, chunk={self.chunk})"

    def supports(self, phase: PhaseFn) -> bool:
        return phase.pieces is not None

    def compute(self, phase: PhaseFn, lam: float, band: int) -> Spectrum:
        if phase.pieces is None:
            raise DispatchError(
                f"{phase!r} has no affine pieces; use the dft engine (coeffs_dft)"
            )
        band = check_band(band)
        lam = float(lam)
        lifted, centre = centred_lift(phase, lam)
        pieces = lifted.pieces
        assert pieces is not None
        common = dict(
            tail_pointwise=2.0 * lifted.monotone_pieces,
            energy=pieces.energy(),
            sup_deriv=lifted.sup_deriv,
            perturbation=phase.perturbation,
            engine=self.name,
        )

        spike = self._spike(pieces, lam, band)
        if spike is not None:
            logger.debug("exact spike at offset %d for %r", spike[0], phase)
            coefficients = np.zeros(2 * band + 1, dtype=complex)
            coefficients[spike[0] + band] = spike[1]
            return Spectrum(lam, band, centre, coefficients, 0.0, spike=True, **common)

        offsets = np.arange(-band, band + 1)
        step = max(1, min(self.chunk, BLOCK_ELEMENTS // len(pieces)))
        chunks = [offsets[i : i + step] for i in range(0, offsets.size, step)]
        parts = parallel_map(
            lambda ks: _piece_integrals(pieces, lam, ks), chunks, self.threads
        )
        coefficients = np.concatenate(parts)
        error = coefficient_roundoff(pieces, lam, band)
        logger.debug(
            "exact engine: lam=%g K=%d pieces=%d chunks=%d error=%.3g",
            lam,
            band,
            len(pieces),
            len(chunks),
            error,
        )
        return Spectrum(lam, band, centre, coefficients, error, **common)

    @staticmethod
    def _spike(pieces: AffinePieces, lam: float, band: int) -> Optional[tuple]:
        """(offset, value) for one full affine piece with integer lam * slope."""
        if len(pieces) != 1:
            return None
        rate = lam * float(pieces.slopes[0])
        m = int(round(rate))
        if rate != m or abs(m) > band:
            return None
        # exp(i lam (a t + v)) = exp(i lam v) exp(i m t)
        return m, complex(np.exp(1j * lam * float(pieces.values[0])))
