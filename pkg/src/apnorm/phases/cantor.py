"""
Primitive of the modified Cantor staircase.

psi = sin(2*pi*sigma) is constant on every gap, vanishes at both ends, is odd
about the midpoint and has three monotone stretches (sigma in [0, 1/4],
[1/4, 3/4], [3/4, 1]). Its primitive phi is even about the midpoint.

The affine surrogate replaces psi on each deepest-level interval by its exact
mean, so it agrees with the depth-J primitive at every breakpoint.
"""

import math
from typing import Tuple

import numpy as np

from ..cantor import CantorLevels, build_levels
from ..errors import DomainError
from ..modulus import TWO_PI, Modulus
from .base import AffinePieces, LipCertificate, PhaseFn, probe_lip_ratio

# Sup distance of the surrogate to the ideal primitive, in units of chi(rho_J).
PERTURBATION_FACTOR = math.pi**2 + 2.0 * math.pi


def sin_turn(s: np.ndarray) -> np.ndarray:
    """sin(2*pi*s) for s in [0, 1/2], exact at s = 1/4 and s = 1/2."""
    s = np.asarray(s, dtype=float)
    return np.where(s <= 0.25, np.sin(TWO_PI * s), np.sin(TWO_PI * (0.5 - s)))


class StaircasePrimitive:
    """
    Depth-J primitive of psi on [0, L] for a (possibly branched) level set.

    Attributes:
        levels: The level set
        breaks, slopes, values: Surrogate pieces on [0, L]
        perturbation: Sup distance of the surrogate to the ideal primitive
    """

    def __init__(self, levels: CantorLevels):
        self.levels = levels
        self.length = levels.length
        depth = levels.depth
        self.gain = math.ldexp(1.0, -depth)
        self.finest = float(levels.lengths[-1])
        self.perturbation = PERTURBATION_FACTOR * self.finest * self.gain
        if depth == 0:
            self.breaks = np.array([0.0, self.length])
            self.slopes = np.zeros(1)
            self.values = np.zeros(1)
            self._half = (self.breaks, self.slopes, self.values, np.ones(1, bool))
            return
        left = levels.left_endpoints(depth)[: 1 << (depth - 1)]
        count = left.size
        nu = np.arange(count, dtype=float)
        # Left half: interval, gap, interval, gap, ..., interval; then the central gap.
        inner_slopes = sin_turn((nu + 0.5) * self.gain) * np.sinc(self.gain)
        gap_slopes = sin_turn((nu[:-1] + 1.0) * self.gain)
        half_breaks = np.empty(2 * count)
        half_breaks[0::2] = left
        half_breaks[1::2] = left + self.finest
        half_slopes = np.empty(2 * count - 1)
        half_slopes[0::2] = inner_slopes
        half_slopes[1::2] = gap_slopes
        is_interval = np.zeros(2 * count - 1, dtype=bool)
        is_interval[0::2] = True
        widths = np.diff(half_breaks)
        half_values = np.concatenate([[0.0], np.cumsum(half_slopes * widths)])
        centre_value = half_values[-1]
        self._half = (half_breaks, half_slopes, half_values[:-1], is_interval)
        # Mirror: phi(L - t) = phi(t), psi(L - t) = -psi(t).
        self.breaks = np.concatenate([half_breaks, self.length - half_breaks[::-1]])
        self.slopes = np.concatenate([half_slopes, [0.0], -half_slopes[::-1]])
        self.values = np.concatenate(
            [half_values[:-1], [centre_value], half_values[1:][::-1]]
        )

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Exact depth-J primitive on [0, L]."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.length)
        mirrored = np.minimum(t, self.length - t)
        if self.levels.depth == 0:
            return self.length / math.pi * np.sin(math.pi * mirrored / self.length) ** 2
        breaks, slopes, values, is_interval = self._half
        idx = np.searchsorted(breaks, mirrored, side="right") - 1
        idx = np.clip(idx, 0, slopes.size - 1)
        offset = mirrored - breaks[idx]
        out = values[idx] + slopes[idx] * offset
        inside = is_interval[idx] & (offset <= self.finest)
        if np.any(inside):
            # sigma runs linearly over [s0, s0 + gain] on a deepest interval.
            s0 = (idx[inside] // 2) * self.gain
            x = offset[inside] / self.finest * self.gain
            bump = np.sin(TWO_PI * s0 + math.pi * x) * np.sin(math.pi * x)
            height = self.finest / (math.pi * self.gain)
            out[inside] = values[idx[inside]] + height * bump
        # Past the last left-half interval lies the central gap, which is flat.
        centre = mirrored > breaks[-1]
        out[centre] = values[-1] + slopes[-1] * (breaks[-1] - breaks[-2])
        return out

    def derivative(self, t: np.ndarray) -> np.ndarray:
        """psi = sin(2*pi*sigma) on [0, L]."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.length)
        upper = t > self.length / 2.0
        mirrored = np.where(upper, self.length - t, t)
        sigma = np.asarray(self.levels.staircase(mirrored), dtype=float)
        psi = sin_turn(np.minimum(sigma, 0.5))
        return np.where(upper, -psi, psi)

    def pieces_on(
        self, left: float, scale: float
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Pieces of t -> phi((t - left) * scale), an affine copy on
        [left, left + L / scale].
        """
        breaks = left + self.breaks / scale
        breaks[0] = left
        return breaks, self.slopes * scale, self.values.copy()


def cantor_primitive(modulus: Modulus, depth: int, seed: int = 0) -> PhaseFn:
    """
    Primitive of psi = sin(2*pi*sigma) for the perfect set of ``modulus``.

    Args:
        modulus: Strictly doubling modulus
        depth: Truncation depth J >= 1
        seed: Seed of the Lip probe grid

    Returns:
        PhaseFn with phi(0) = phi(2*pi) = 0, |phi'| <= 1 and three monotone
        pieces of phi'
    """
    if depth < 1:
        raise DomainError("cantor_primitive needs depth >= 1")
    levels = build_levels(modulus, depth)
    primitive = StaircasePrimitive(levels)
    pieces = AffinePieces(primitive.breaks, primitive.slopes, primitive.values)
    ratio = probe_lip_ratio(primitive.derivative, modulus, depth, seed=seed)
    return PhaseFn(
        "cantor",
        primitive.evaluate,
        primitive.derivative,
        pieces=pieces,
        deriv_bounds=(-1.0, 1.0),
        monotone_pieces=pieces.monotone_runs(),
        perturbation=primitive.perturbation,
        lip_cert=LipCertificate(modulus, ratio),
        params={"depth": depth, "modulus": modulus.describe()},
    )
