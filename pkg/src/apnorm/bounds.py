"""
Lower-bound witnesses, envelopes and explicit majorants.

The witness machinery localises exp(i lam phi) with a triangle of half-width
delta_lam around a point where phi' = k / lam. There the phase is close to
its tangent line, so the k-th coefficient of the localised function is at
least delta_lam / (4 pi).
"""

import logging
import math
import warnings
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize, special

from .cantor import MAX_DEPTH
from .errors import (
    DomainError,
    LambdaTooSmallError,
    NumericError,
    PreconditionError,
)
from .modulus import TWO_PI, Modulus
from .phases import PhaseFn, probe_lip_ratio
from .spectrum import NormEstimate

logger = logging.getLogger(__name__)

LIP_SAFETY = 1.25
DEFAULT_PROBE_DEPTH = 12
ROOT_GRID = 2**14
QUAD_SLACK = 1e-3
QUAD_TOLERANCE = 1e-4


# ----------------------------------------------------------------------
# Lipschitz constant and window size
# ----------------------------------------------------------------------


def lip_estimate(
    phase: PhaseFn,
    modulus: Modulus,
    depth: Optional[int] = None,
    probes: Optional[int] = None,
    seed: int = 0,
) -> float:
    """
    Estimated c with omega(phi', d) <= c * omega(d).

    Probes d = rho_1 .. rho_depth on a seeded grid and inflates the largest
    ratio by 1.25. A return value of 0 means phi' is constant and the
    witness machinery does not apply.

    Args:
        phase: Phase with a derivative evaluator
        modulus: Comparison modulus
        depth: Deepest probe level (default: the phase's depth, else 12)
        probes: Probe grid size (default from the deepest scale)
        seed: Grid offset seed

    Returns:
        The inflated constant
    """
    if depth is None:
        depth = int(phase.params.get("depth", DEFAULT_PROBE_DEPTH))
    ratio = probe_lip_ratio(phase.derivative, modulus, depth, probes=probes, seed=seed)
    constant = LIP_SAFETY * ratio
    logger.debug("lip estimate for %r against %r: %.6g", phase, modulus, constant)
    return constant


def delta_lambda(modulus: Modulus, c: float, lam: float) -> float:
    """
    Half-width delta_lam of the witness window, chi(2 delta_lam) = 1 / (2 c lam).

    Also checks delta_lam >= chi_inv(1 / lam) / (4 (c + 1)).

    Raises:
        PreconditionError: If c <= 0
        LambdaTooSmallError: If 1 / (2 c lam) exceeds chi(2*pi)
    """
    if c <= 0.0:
        raise PreconditionError("the Lip constant must be positive (phi' is constant)")
    if lam < 1.0:
        raise DomainError(f"delta_lambda needs lam >= 1, got {lam!r}")
    target = 1.0 / (2.0 * c * lam)
    if target > TWO_PI:
        raise LambdaTooSmallError(
            f"1/(2 c lam) = {target:.6g} exceeds chi(2*pi)", binding="chi_range"
        )
    delta = 0.5 * modulus.chi_inv(target)
    floor = modulus.chi_inv(1.0 / lam) / (4.0 * (c + 1.0))
    if delta < floor * (1.0 - 1e-12):
        raise NumericError(
            f"delta_lambda {delta:.6g} below chi_inv(1/lam)/(4(c+1)) = {floor:.6g}",
            residual=floor - delta,
        )
    return delta


def derivative_range(phase: PhaseFn, samples: int = ROOT_GRID) -> Tuple[float, float]:
    """
    (min phi', max phi').

    Exact from the slopes for piecewise-affine phases, otherwise sampled on a
    uniform grid of ``samples`` points including both ends.
    """
    if phase.pieces is not None:
        slopes = phase.pieces.slopes
        return float(slopes.min()), float(slopes.max())
    t = np.linspace(0.0, TWO_PI, samples + 1)
    values = np.asarray(phase.derivative(t))
    return float(values.min()), float(values.max())


# ----------------------------------------------------------------------
# Witnesses
# ----------------------------------------------------------------------


class WitnessReport:
    """
    Result of one localised coefficient check.

    Attributes:
        lam, k: Frequency multiplier and coefficient index
        t: Point with phi'(t) = k / lam
        interval: Window of length 2 delta_lam containing t
        measured: |(Delta_I exp(i lam phi))^(k)|
        threshold: delta_lam / (4 pi)
        quad_error: Quadrature error estimate of ``measured``
        passed: measured >= threshold * (1 - 1e-3)
    """

    def __init__(
        self,
        lam: float,
        k: int,
        t: float,
        interval: Tuple[float, float],
        measured: float,
        threshold: float,
        quad_error: float,
    ):
        self.lam = lam
        self.k = k
        self.t = t
        self.interval = interval
        self.measured = measured
        self.threshold = threshold
        self.quad_error = quad_error
        self.passed = measured >= threshold * (1.0 - QUAD_SLACK)

    def __repr__(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return (
            f"WitnessReport(lam={self.lam:g}, k={self.k}, {state}, "
            f"margin={self.margin:.4g})"
        )

    @property
    def margin(self) -> float:
        """measured / threshold."""
        return self.measured / self.threshold

    @property
    def delta(self) -> float:
        return 0.5 * (self.interval[1] - self.interval[0])


def witness_thresholds(
    phase: PhaseFn, modulus: Modulus, c: float, lam: float
) -> Dict[str, float]:
    """
    The three largeness conditions on lam, as value/limit ratios that must be < 1.

    Keys: ``chi_range`` (1/(2 c lam) <= chi(2 pi)), ``window``
    (2 delta_lam < 2 pi) and ``spread`` (2 / (M - m) < lam).
    """
    m, big_m = derivative_range(phase)
    if big_m <= m:
        raise PreconditionError("phi' is constant: no admissible k")
    if c <= 0.0:
        raise PreconditionError("the Lip constant must be positive (phi' is constant)")
    ratios = {
        "chi_range": (1.0 / (2.0 * c * lam)) / TWO_PI,
        "spread": (2.0 / (big_m - m)) / lam,
    }
    if ratios["chi_range"] <= 1.0:
        ratios["window"] = 2.0 * delta_lambda(modulus, c, lam) / TWO_PI
    else:
        ratios["window"] = math.inf
    return ratios


def _check_thresholds(phase: PhaseFn, modulus: Modulus, c: float, lam: float) -> None:
    ratios = witness_thresholds(phase, modulus, c, lam)
    failing = {name: value for name, value in ratios.items() if value >= 1.0}
    if failing:
        binding = max(failing, key=lambda name: failing[name])
        raise LambdaTooSmallError(
            f"lam = {lam:g} too small: {binding} condition fails "
            f"(ratio {failing[binding]:.4g})",
            binding=binding,
        )


def stationary_point(phase: PhaseFn, slope: float, samples: int = ROOT_GRID) -> float:
    """
    A point where phi' crosses ``slope``.

    Brackets the crossing on a uniform grid merged with the piece breakpoints,
    then refines with Brent's method when phi' is continuous. For step
    derivatives the breakpoint where the jump happens is returned.

    Raises:
        NumericError: If no crossing is found
    """
    t = np.linspace(0.0, TWO_PI, samples + 1)
    if phase.pieces is not None:
        t = np.union1d(t, phase.pieces.breaks)
    g = np.asarray(phase.derivative(t)) - slope
    exact = np.flatnonzero(g == 0.0)
    if exact.size:
        return float(t[exact[0]])
    crossings = np.flatnonzero(np.sign(g[:-1]) != np.sign(g[1:]))
    if crossings.size == 0:
        residual = float(np.min(np.abs(g)))
        raise NumericError(f"phi' never crosses {slope:.6g}", residual=residual)
    i = int(crossings[0])
    left, right = float(t[i]), float(t[i + 1])
    if not phase.continuous_derivative:
        return right

    def func(s: float) -> float:
        return float(phase.derivative(s)) - slope

    try:
        root, result = optimize.brentq(func, left, right, xtol=1e-15, full_output=True)
    except (RuntimeError, ValueError) as exc:
        message = f"root refinement failed on [{left}, {right}]: {exc}"
        raise NumericError(message) from exc
    logger.debug("stationary point %.12g after %d iterations", root, result.iterations)
    return float(root)


def witness(
    phase: PhaseFn,
    lam: float,
    k: int,
    modulus: Modulus,
    c: Optional[float] = None,
) -> WitnessReport:
    """
    Check |(Delta_I exp(i lam phi))^(k)| >= delta_lam / (4 pi) for one k.

    Args:
        phase: Non-affine phase
        lam: Frequency multiplier
        k: Integer with m lam < k < M lam, (m, M) the derivative range
        modulus: Modulus of the Lip class of phi'
        c: Lip constant (default: lip_estimate(phase, modulus))

    Returns:
        WitnessReport

    Raises:
        LambdaTooSmallError: If lam violates a largeness condition; the
            exception names the binding one
        PreconditionError: If k is not admissible
        NumericError: If the quadrature misses its accuracy target

    Example:
        report = witness(cos_phase(), 256.0, 10, apnorm.modulus.power(1.0))
        report.passed   # True
    """
    if c is None:
        c = lip_estimate(phase, modulus)
    m, big_m = derivative_range(phase)
    if not (m * lam < k < big_m * lam):
        raise PreconditionError(f"k = {k} outside ({m * lam:.6g}, {big_m * lam:.6g})")
    _check_thresholds(phase, modulus, c, lam)
    delta = delta_lambda(modulus, c, lam)
    threshold = delta / (4.0 * math.pi)

    t0 = stationary_point(phase, k / lam)
    a = min(max(t0 - delta, 0.0), TWO_PI - 2.0 * delta)
    b = a + 2.0 * delta
    centre = 0.5 * (a + b)

    def integrand(s: float, part: Callable[[complex], float]) -> float:
        weight = 1.0 - abs(s - centre) / delta
        return weight * part(np.exp(1j * (lam * float(phase.evaluate(s)) - k * s)))

    tolerance = QUAD_TOLERANCE * threshold * TWO_PI
    pieces = []
    errors = []
    for part in (np.real, np.imag):
        value, error = integrate.quad(
            integrand,
            a,
            b,
            args=(part,),
            points=[centre],
            epsabs=tolerance,
            epsrel=0.0,
            limit=400,
        )
        pieces.append(value)
        errors.append(error)
    measured = abs(complex(pieces[0], pieces[1])) / TWO_PI
    quad_error = (errors[0] + errors[1]) / TWO_PI
    if quad_error > QUAD_SLACK * threshold:
        raise NumericError(
            f"witness quadrature error {quad_error:.3g} "
            f"above {QUAD_SLACK:g} x threshold",
            residual=quad_error,
        )
    return WitnessReport(lam, int(k), t0, (a, b), measured, threshold, quad_error)


def admissible_ks(phase: PhaseFn, lam: float, count: int = 16) -> List[int]:
    """
    Up to ``count`` equispaced integers strictly inside (m lam, M lam).

    Returns an empty list (and warns) when phi' is constant.
    """
    m, big_m = derivative_range(phase)
    if big_m <= m:
        message = f"no admissible k for {phase!r}: phi' is constant"
        logger.warning(message)
        warnings.warn(message, UserWarning, stacklevel=2)
        return []
    lo, hi = m * lam, big_m * lam
    grid = np.linspace(lo, hi, count + 2)[1:-1]
    ks = sorted({int(round(x)) for x in grid})
    return [k for k in ks if lo < k < hi]


def witness_lower_bound(
    phase: PhaseFn, modulus: Modulus, c: float, lam: float, p: float
) -> float:
    """((M - m) lam / 2)**(1/p) * delta_lam / (4 pi), a lower bound for the A_p norm."""
    if not (1.0 <= p <= 2.0):
        raise DomainError(f"p must lie in [1, 2], got {p!r}")
    m, big_m = derivative_range(phase)
    delta = delta_lambda(modulus, c, lam)
    return (0.5 * (big_m - m) * lam) ** (1.0 / p) * delta / (4.0 * math.pi)


def final_inequality(
    phase: PhaseFn,
    modulus: Modulus,
    c: float,
    lam: float,
    estimate: NormEstimate,
) -> Tuple[float, bool]:
    """(witness_lower_bound, whether it is at most estimate.hi)."""
    lower = witness_lower_bound(phase, modulus, c, lam, estimate.p)
    return lower, lower <= estimate.hi


# ----------------------------------------------------------------------
# Envelopes
# ----------------------------------------------------------------------


def lower_env(modulus: Modulus, p: float, lam: float) -> float:
    """lam**(1/p) * chi_inv(1 / lam)."""
    if not (1.0 <= p <= 2.0):
        raise DomainError(f"p must lie in [1, 2], got {p!r}")
    lam = abs(float(lam))
    if lam < 1.0:
        raise DomainError("lower_env needs |lam| >= 1")
    return lam ** (1.0 / p) * modulus.chi_inv(1.0 / lam)


def upper_env_A(modulus: Modulus, lam: float) -> float:
    """Theta(lam) for the Wiener norm."""
    lam = abs(float(lam))
    if lam < 2.0:
        raise DomainError("upper envelopes need |lam| >= 2")
    return modulus.theta(lam)


def upper_env_Ap(modulus: Modulus, p: float, lam: float) -> float:
    """Theta_p(lam) for 1 < p < 2."""
    lam = abs(float(lam))
    if lam < 2.0:
        raise DomainError("upper envelopes need |lam| >= 2")
    return modulus.theta_p(p, lam)


def c2_env(p: float, lam: float) -> float:
    """lam**(1/p - 1/2), the growth law of smooth non-affine phases."""
    if not (1.0 <= p <= 2.0):
        raise DomainError(f"p must lie in [1, 2], got {p!r}")
    return abs(float(lam)) ** (1.0 / p - 0.5)


def log_env(lam: float) -> float:
    """log lam, the Wiener-norm growth of piecewise-linear phases."""
    lam = abs(float(lam))
    if lam <= 1.0:
        raise DomainError("log_env needs |lam| > 1")
    return math.log(lam)


ENVELOPE_KINDS = ("lower", "thetaA", "thetaAp", "c2", "log")


def envelope(
    kind: str, modulus: Optional[Modulus], p: float
) -> Callable[[float], float]:
    """
    The envelope ``kind`` as a function of lam.

    Args:
        kind: One of lower, thetaA, thetaAp, c2, log
        modulus: Required for lower, thetaA and thetaAp
        p: Exponent for lower, thetaAp and c2
    """
    if kind not in ENVELOPE_KINDS:
        expected = ", ".join(ENVELOPE_KINDS)
        raise DomainError(f"unknown envelope {kind!r}; expected one of {expected}")
    if kind == "c2":
        return lambda lam: c2_env(p, lam)
    if kind == "log":
        return log_env
    if modulus is None:
        raise DomainError(f"envelope {kind!r} needs a modulus")
    if kind == "lower":
        return lambda lam: lower_env(modulus, p, lam)
    if kind == "thetaA":
        return lambda lam: upper_env_A(modulus, lam)
    return lambda lam: upper_env_Ap(modulus, p, lam)


# ----------------------------------------------------------------------
# Explicit majorants
# ----------------------------------------------------------------------


def partial_sum_bound(a: float, y: float) -> float:
    """
    Bound for sum_{|k| <= y} of the coefficients of 1_Delta exp(i (a t + b)),
    uniform in the interval Delta and in b.
    """
    if y < 2.0:
        raise DomainError("partial_sum_bound needs y >= 2")
    if abs(a) >= 2.0 * y:
        return 3.0
    return 5.0 + 2.0 * math.log(3.0 * y)


def piece_lp_bound(a: float, length: float, p: float) -> float:
    """
    (sum_k min(1 / |k - a|, length / 2 pi)**p)**(1/p), the l^p majorant of one
    affine piece of slope a on an interval of the given length.

    Infinite for p = 1.
    """
    if not (1.0 <= p <= 2.0):
        raise DomainError(f"p must lie in [1, 2], got {p!r}")
    if not (0.0 < length <= TWO_PI):
        raise DomainError("piece length must lie in (0, 2*pi]")
    if p == 1.0:
        return math.inf
    cap = length / TWO_PI
    reach = int(math.ceil(1.0 / cap))
    low, high = math.floor(a) - reach, math.ceil(a) + reach
    k = np.arange(low, high + 1, dtype=float)
    distance = np.abs(k - a)
    with np.errstate(divide="ignore"):
        core = np.where(distance > 0, np.minimum(1.0 / distance, cap), cap)
    total = float(np.sum(core**p))
    total += float(special.zeta(p, high + 1 - a)) + float(special.zeta(p, a - low + 1))
    return total ** (1.0 / p)


def level_choice(modulus: Modulus, lam: float) -> int:
    """The level j >= 1 with 2**(j-1) <= Theta(lam) / log(lam) < 2**j."""
    if lam < 2.0:
        raise DomainError("level_choice needs lam >= 2")
    ratio = modulus.theta(lam) / math.log(lam)
    if ratio < 1.0:
        return 1
    return int(math.floor(math.log2(ratio))) + 1


def gap_majorant(modulus: Modulus, lam: float, j: Optional[int] = None) -> float:
    """
    Bound for sum_{|k| <= 2 lam} of the coefficients of any function that is
    linear on the gaps of the level-j cover.
    """
    if lam < 2.0:
        raise DomainError("gap_majorant needs lam >= 2")
    if j is None:
        j = level_choice(modulus, lam)
    count = 2**j
    gaps_part = (count - 1) * (5.0 + 2.0 * math.log(6.0 * lam))
    cover_part = math.sqrt(4.0 * lam + 1.0) * math.sqrt(count * modulus.rho(j) / TWO_PI)
    return gaps_part + cover_part


def activation_level(modulus: Modulus, lam: float) -> int:
    """The level j with a_{j-1} <= lam < a_j (0 below a_0, capped at MAX_DEPTH)."""
    lam = abs(float(lam))
    if lam < modulus.activation(0):
        return 0
    for j in range(1, MAX_DEPTH + 1):
        if lam < modulus.activation(j):
            return j
    return MAX_DEPTH


__all__ = [
    "ENVELOPE_KINDS",
    "WitnessReport",
    "activation_level",
    "admissible_ks",
    "c2_env",
    "delta_lambda",
    "derivative_range",
    "envelope",
    "final_inequality",
    "gap_majorant",
    "level_choice",
    "lip_estimate",
    "log_env",
    "lower_env",
    "partial_sum_bound",
    "piece_lp_bound",
    "stationary_point",
    "upper_env_A",
    "upper_env_Ap",
    "witness",
    "witness_lower_bound",
    "witness_thresholds",
]
