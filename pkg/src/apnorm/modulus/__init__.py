"""
Moduli of continuity for apnorm.

Each modulus is normalised so that omega(2*pi) = 1 and exposes the derived
scales chi, chi_inv, rho_j, activation, theta and theta_p as methods.
"""

import math
from typing import Sequence

from .base import TWO_PI, Modulus
from .power import PowerModulus
from .power_log import PowerLogModulus
from .tabulated import TabulatedModulus


def power(alpha: float) -> PowerModulus:
    """
    Create a power modulus omega(d) = (d / 2*pi) ** alpha.

    Args:
        alpha: Exponent in (0, 1]

    Returns:
        PowerModulus instance

    Example:
        m = apnorm.modulus.power(0.5)
        m.rho(1)   # pi / 2
    """
    return PowerModulus(alpha)


def power_log(alpha: float, beta: float) -> PowerLogModulus:
    """
    Create a power modulus with a logarithmic factor.

    Args:
        alpha: Power exponent in (0, 1]
        beta: Exponent of (1 + log+(2*pi / d)), at most alpha

    Returns:
        PowerLogModulus instance
    """
    return PowerLogModulus(alpha, beta)


def tabulated(nodes: Sequence[float], values: Sequence[float]) -> TabulatedModulus:
    """
    Create a modulus from a table, interpolated in log-log coordinates.

    Args:
        nodes: Strictly increasing positive lengths
        values: Non-decreasing positive values (rescaled so omega(2*pi) = 1)

    Returns:
        TabulatedModulus instance
    """
    return TabulatedModulus(nodes, values)


def middle_thirds() -> PowerModulus:
    """Power modulus whose Cantor set is the classical middle-thirds set."""
    return PowerModulus(math.log(2.0) / math.log(3.0))


__all__ = [
    "TWO_PI",
    "Modulus",
    "PowerModulus",
    "PowerLogModulus",
    "TabulatedModulus",
    "power",
    "power_log",
    "tabulated",
    "middle_thirds",
]
