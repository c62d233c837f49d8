"""
Circle maps: perturbations of the identity and lifts.
"""

from typing import Tuple

import numpy as np

from ..errors import DomainError, PreconditionError
from ..modulus import TWO_PI
from .base import PhaseFn

WINDING_TOLERANCE = 1e-9


def diffeo(phase: PhaseFn, epsilon: float) -> PhaseFn:
    """
    The circle diffeomorphism h(t) = t + epsilon * phi(t).

    Args:
        phase: Periodic phase (winding 0)
        epsilon: Perturbation size with |epsilon| * sup|phi'| < 1

    Returns:
        PhaseFn with winding 1 and strictly positive slopes

    Raises:
        PreconditionError: If h would not be increasing
        DomainError: If phase winds
    """
    if phase.winding != 0:
        raise DomainError("diffeo needs a periodic phase (winding 0)")
    eps = float(epsilon)
    if abs(eps) * phase.sup_deriv >= 1.0:
        raise PreconditionError(
            f"epsilon * sup|phi'| = {abs(eps) * phase.sup_deriv:.6g} must be < 1"
        )
    lo, hi = phase.deriv_bounds
    bounds = sorted((1.0 + eps * lo, 1.0 + eps * hi))
    pieces = None if phase.pieces is None else phase.pieces.transformed(eps, 1.0)
    mean_sq = None
    if phase.mean_sq_deriv is not None:
        # The cross term integrates to zero since phi is periodic.
        mean_sq = 1.0 + eps * eps * phase.mean_sq_deriv
    return PhaseFn(
        "diffeo",
        lambda t: t + eps * np.asarray(phase.evaluate(t)),
        lambda t: 1.0 + eps * np.asarray(phase.derivative(t)),
        pieces=pieces,
        winding=1,
        deriv_bounds=(bounds[0], bounds[1]),
        monotone_pieces=phase.monotone_pieces,
        mean_sq_deriv=mean_sq,
        perturbation=abs(eps) * phase.perturbation,
        continuous_derivative=phase.continuous_derivative,
        params={"base": phase.name, "epsilon": eps, **phase.params},
    )


def lift(circle_map: PhaseFn) -> Tuple[PhaseFn, int]:
    """
    Split off the winding: phi = phi_0 + w * t with phi_0 periodic.

    Args:
        circle_map: Phase with phi(2*pi) - phi(0) a multiple of 2*pi

    Returns:
        (phi_0, w)

    Example:
        lift(linear_phase(3))   # (zero phase, 3)
    """
    turns = circle_map.increment() / TWO_PI
    w = int(round(turns))
    if abs(turns - w) > WINDING_TOLERANCE:
        raise DomainError(f"phase winds {turns:.12g} times, not an integer")
    if w == 0:
        return circle_map, 0
    lo, hi = circle_map.deriv_bounds
    pieces = None
    if circle_map.pieces is not None:
        pieces = circle_map.pieces.transformed(1.0, -w)
    mean_sq = None
    if circle_map.mean_sq_deriv is not None:
        mean_sq = max(circle_map.mean_sq_deriv - float(w * w), 0.0)
    lifted = PhaseFn(
        f"{circle_map.name}-lift",
        lambda t: np.asarray(circle_map.evaluate(t)) - w * t,
        lambda t: np.asarray(circle_map.derivative(t)) - w,
        pieces=pieces,
        winding=0,
        deriv_bounds=(lo - w, hi - w),
        monotone_pieces=circle_map.monotone_pieces,
        mean_sq_deriv=mean_sq,
        perturbation=circle_map.perturbation,
        lip_cert=circle_map.lip_cert,
        continuous_derivative=circle_map.continuous_derivative,
        params={"lifted_from": circle_map.name, "winding": w, **circle_map.params},
    )
    return lifted, w
