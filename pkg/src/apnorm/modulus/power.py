"""
Power moduli omega(d) = (d / 2*pi) ** alpha.
"""

from typing import Any, Dict

import numpy as np

from ..errors import DomainError
from .base import Modulus


class PowerModulus(Modulus):
    """
    Hoelder-type modulus omega(d) = d ** alpha, normalised at 2*pi.

    alpha = 1 is the Lipschitz scale: it is accepted, but doubling only holds
    with equality so it cannot drive the Cantor construction.
    """

    kind = "power"

    def __init__(self, alpha: float):
        """
        Initialize a power modulus.

        Args:
            alpha: Exponent in (0, 1]
        """
        alpha = float(alpha)
        if not (0.0 < alpha <= 1.0):
            raise DomainError(f"power modulus needs 0 < alpha <= 1, got {alpha!r}")
        self.alpha = alpha
        super().__init__()

    def _raw(self, delta: np.ndarray) -> np.ndarray:
        return np.power(delta, self.alpha)

    def parameters(self) -> Dict[str, Any]:
        return {"alpha": self.alpha}
