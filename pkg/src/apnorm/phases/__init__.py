"""
Phase functions for apnorm.

Every phase is a PhaseFn: an exact evaluator plus, for the depth-truncated
constructions, an affine surrogate that the exact spectrum engine transforms
in closed form.
"""

from ..modulus import TWO_PI
from .base import (
    AffinePieces,
    LipCertificate,
    PhaseFn,
    chord_deviation,
    monotone_runs,
    probe_lip_ratio,
)
from .benchmarks import cos_phase, linear_phase, pl_phase
from .cantor import StaircasePrimitive, cantor_primitive, sin_turn
from .circle import diffeo, lift
from .nested import NestedSchedule, nested_phase


def constant(value: float = 0.0) -> PhaseFn:
    """
    Create the constant phase phi(t) = value.

    Example:
        phi = apnorm.phases.constant(1.5)
        apnorm.spectrum.compute_spectrum(phi, 8.0).coefficients   # one spike at k = 0
    """
    return linear_phase(0, value)


def tent(peak: float = 1.0) -> PhaseFn:
    """
    Create the tent phase through (0, 0), (pi, peak), (2*pi, 0).

    Args:
        peak: Height at the midpoint

    Returns:
        Piecewise-linear PhaseFn with slopes +-peak/pi
    """
    return pl_phase([0.0, TWO_PI / 2.0, TWO_PI], [0.0, peak, 0.0])


__all__ = [
    "AffinePieces",
    "LipCertificate",
    "NestedSchedule",
    "PhaseFn",
    "StaircasePrimitive",
    "cantor_primitive",
    "chord_deviation",
    "constant",
    "cos_phase",
    "diffeo",
    "lift",
    "linear_phase",
    "monotone_runs",
    "nested_phase",
    "pl_phase",
    "probe_lip_ratio",
    "sin_turn",
    "tent",
]
