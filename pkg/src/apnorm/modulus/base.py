"""
Base modulus of continuity interface.

A modulus is normalised at construction so that omega(2*pi) == 1. Everything
the estimates need is derived from omega alone: chi(d) = d * omega(d), its
inverse, the Cantor lengths rho_j with omega(rho_j) = 2**-j, the activation
scales a_j = 1 / chi(rho_j) and the upper envelopes theta and theta_p.
"""

import logging
import math
import threading
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy import integrate, optimize

from ..errors import ConstructionError, DomainError, NumericError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

ArrayLike = Union[float, np.ndarray]

# Bisection budget for chi_inv and rho.
MAX_BISECTIONS = 200
ABS_WIDTH = 1e-12
REL_WIDTH = 4.0 * np.finfo(float).eps
# The relative width governs; 2*pi*REL_WIDTH is already below ABS_WIDTH.
_XTOL_FLOOR = 1e-300

DOUBLING_PROBES = 61
_MONOTONE_PROBES = 241


class Modulus(ABC):
    """
    Base interface for moduli of continuity.

    Subclasses implement ``_raw`` (the un-normalised omega, vectorised over
    positive lengths). The base class handles normalisation, validation and
    all derived scales.
    """

    kind: str = "abstract"

    def __init__(self) -> None:
        self._scale = float(self._raw(np.array([TWO_PI]))[0])
        if not math.isfinite(self._scale) or self._scale <= 0:
            raise DomainError(f"{self.kind} modulus is not positive at 2*pi")
        self._lock = threading.Lock()
        self._rho_cache: Dict[int, float] = {0: TWO_PI}
        self._check_monotone()
        violation = self.doubling_violation(strict=False)
        if violation is not None:
            raise ConstructionError(
                f"{self!r} is not doubling: "
                f"omega(2d) > 2 omega(d) at d={violation:.6g}",
                scale=violation,
            )
        self.strictly_doubling = self.doubling_violation(strict=True) is None

    @abstractmethod
    def _raw(self, delta: np.ndarray) -> np.ndarray:
        """
        Un-normalised modulus on strictly positive lengths.

        Args:
            delta: Array of lengths, all > 0

        Returns:
            Array of the same shape
        """
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Parameters identifying this modulus (used in logs and reports)."""
        pass

    @property
    def normalization(self) -> float:
        """Factor applied to the raw modulus so that omega(2*pi) = 1."""
        return 1.0 / self._scale

    def describe(self) -> Dict[str, Any]:
        info = {"kind": self.kind, "normalization": self.normalization}
        info.update(self.parameters())
        return info

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.parameters().items())
        return f"{type(self).__name__}({params})"

    # ------------------------------------------------------------------
    # omega and chi
    # ------------------------------------------------------------------

    def omega(self, delta: ArrayLike) -> ArrayLike:
        """
        Normalised modulus of continuity.

        Args:
            delta: Length(s) >= 0

        Returns:
            omega(delta), with omega(0) = 0 and omega(2*pi) = 1

        Raises:
            DomainError: If any length is negative
        """
        d = np.asarray(delta, dtype=float)
        if np.any(d < 0) or np.any(np.isnan(d)):
            raise DomainError("omega is defined for lengths >= 0")
        out = np.zeros_like(d)
        positive = d > 0
        if np.any(positive):
            out[positive] = self._raw(d[positive]) / self._scale
        return float(out) if out.ndim == 0 else out

    def chi(self, delta: ArrayLike) -> ArrayLike:
        """chi(delta) = delta * omega(delta)."""
        d = np.asarray(delta, dtype=float)
        out = d * np.asarray(self.omega(d))
        return float(out) if out.ndim == 0 else out

    def chi_inv(self, u: float) -> float:
        """
        Inverse of chi on (0, chi(2*pi)].

        Args:
            u: Value in (0, 2*pi]

        Returns:
            The length delta with chi(delta) = u

        Raises:
            DomainError: If u is outside (0, chi(2*pi)]
        """
        u = float(u)
        if not (0.0 < u <= TWO_PI):
            raise DomainError(f"chi_inv argument {u!r} outside (0, 2*pi]")
        if u == TWO_PI:
            return TWO_PI
        return self._bisect(lambda d: self.chi(d) - u, f"chi_inv({u:.6g})")

    def _bisect(self, func: Any, label: str) -> float:
        try:
            root, result = optimize.bisect(
                func,
                0.0,
                TWO_PI,
                xtol=_XTOL_FLOOR,
                rtol=REL_WIDTH,
                maxiter=MAX_BISECTIONS,
                full_output=True,
                disp=True,
            )
        except RuntimeError as exc:
            raise NumericError(f"{label} did not converge: {exc}") from exc
        residual = abs(float(func(root)))
        logger.debug(
            "%s: %d bisections, residual %.3g", label, result.iterations, residual
        )
        return float(root)

    # ------------------------------------------------------------------
    # Cantor scales
    # ------------------------------------------------------------------

    def rho(self, j: int) -> float:
        """
        Level length rho_j defined by omega(rho_j) = 2**-j.

        Args:
            j: Level index >= 0

        Returns:
            rho_j; rho(0) is exactly 2*pi
        """
        j = int(j)
        if j < 0:
            raise DomainError("level index must be >= 0")
        with self._lock:
            cached = self._rho_cache.get(j)
        if cached is not None:
            return cached
        target = math.ldexp(1.0, -j)
        value = self._bisect(lambda d: self.omega(d) - target, f"rho({j})")
        with self._lock:
            self._rho_cache[j] = value
        return value

    def activation(self, j: int) -> float:
        """Activation scale a_j = 1 / chi(rho_j); a_0 = 1/(2*pi)."""
        return 1.0 / float(self.chi(self.rho(j)))

    # ------------------------------------------------------------------
    # Upper envelopes
    # ------------------------------------------------------------------

    def theta(self, y: float) -> float:
        """
        Upper envelope for the Wiener norm:
        theta(y) = y / log(y) * chi_inv(log(y)**2 / y).

        When the chi_inv argument exceeds chi(2*pi) the envelope saturates at
        y / log(y) * 2*pi.
        """
        y = float(y)
        if y <= 1.0:
            raise DomainError("theta needs y > 1")
        log_y = math.log(y)
        argument = log_y * log_y / y
        if argument > TWO_PI:
            return y / log_y * TWO_PI
        return y / log_y * self.chi_inv(argument)

    def theta_p(self, p: float, y: float) -> float:
        """
        Upper envelope for A_p norms, 1 < p < 2:
        theta_p(y) = (integral_1^y chi_inv(1/tau)**p dtau) ** (1/p).

        Args:
            p: Exponent in (1, 2)
            y: Upper limit >= 1 (theta_p(p, 1) = 0)

        Returns:
            The envelope value
        """
        p = float(p)
        if not (1.0 < p < 2.0):
            raise DomainError(f"theta_p needs 1 < p < 2, got {p!r}")
        if float(y) < 1.0:
            raise DomainError("theta_p needs y >= 1")
        return self.theta_p_integral(p, 1.0, float(y)) ** (1.0 / p)

    def theta_p_integral(self, p: float, lower: float, upper: float) -> float:
        """
        integral_lower^upper chi_inv(1/tau)**p dtau for 1 <= lower <= upper.

        Uses the substitution tau = exp(s) and adaptive quadrature with
        relative tolerance well below 1e-6.
        """
        if not (1.0 <= lower <= upper):
            raise DomainError("need 1 <= lower <= upper")
        if lower == upper:
            return 0.0

        def integrand(s: float) -> float:
            return self.chi_inv(math.exp(-s)) ** p * math.exp(s)

        value, error = integrate.quad(
            integrand,
            math.log(lower),
            math.log(upper),
            epsabs=0.0,
            epsrel=1e-9,
            limit=200,
        )
        if not math.isfinite(value) or error > 1e-7 * abs(value):
            raise NumericError("theta_p quadrature did not converge", residual=error)
        return float(value)

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def doubling_violation(self, strict: bool = True) -> Optional[float]:
        """
        First dyadic probe scale violating the doubling condition.

        Probes delta = 2*pi * 2**-i for i = 0..60.

        Args:
            strict: Check omega(2d) < 2 omega(d) instead of omega(2d) <= 2 omega(d)

        Returns:
            The offending delta, or None if every probe passes
        """
        deltas = TWO_PI * np.exp2(-np.arange(DOUBLING_PROBES, dtype=float))
        ratio = np.asarray(self.omega(2.0 * deltas)) / np.asarray(self.omega(deltas))
        bad = ratio >= 2.0 * (1.0 - 1e-12) if strict else ratio > 2.0 * (1.0 + 1e-12)
        hits = np.flatnonzero(bad)
        return float(deltas[hits[0]]) if hits.size else None

    def _check_monotone(self) -> None:
        deltas = TWO_PI * np.exp2(-np.arange(_MONOTONE_PROBES, dtype=float) / 4.0)[::-1]
        values = np.asarray(self.omega(deltas))
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise DomainError(f"{self!r} must be positive on (0, 2*pi]")
        if np.any(np.diff(values) < -1e-15 * values[1:]):
            raise DomainError(f"{self!r} is not non-decreasing")
