"""
Power moduli with a logarithmic correction.
"""

from typing import Any, Dict

import numpy as np

from ..errors import DomainError
from .base import TWO_PI, Modulus


class PowerLogModulus(Modulus):
    """
    omega(d) = d**alpha * (1 + log+(2*pi / d)) ** beta, normalised at 2*pi.

    beta > 0 makes omega larger than the pure power near zero, beta < 0
    smaller. Monotonicity needs beta <= alpha; doubling is verified on the
    dyadic probe grid at construction.
    """

    kind = "power-log"

    def __init__(self, alpha: float, beta: float):
        """
        Initialize a power-log modulus.

        Args:
            alpha: Power exponent in (0, 1]
            beta: Logarithmic exponent, at most alpha
        """
        alpha, beta = float(alpha), float(beta)
        if not (0.0 < alpha <= 1.0):
            raise DomainError(f"power-log modulus needs 0 < alpha <= 1, got {alpha!r}")
        if beta > alpha:
            raise DomainError(
                f"power-log modulus needs beta <= alpha, got beta={beta!r}"
            )
        self.alpha = alpha
        self.beta = beta
        super().__init__()

    def _raw(self, delta: np.ndarray) -> np.ndarray:
        log_factor = 1.0 + np.maximum(np.log(TWO_PI / delta), 0.0)
        return np.power(delta, self.alpha) * np.power(log_factor, self.beta)

    def parameters(self) -> Dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta}
