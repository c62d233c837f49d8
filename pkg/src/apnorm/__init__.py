"""
apnorm - A_p norms of exp(i lam phi) for non-smooth phases

Builds phase functions on the circle (smooth benchmarks, piecewise-linear
maps, Cantor-staircase primitives and nested constructions tuned to a
modulus of continuity), computes certified intervals for the A_p norms of
exp(i lam phi), and checks their growth in lam against explicit envelopes.

Usage:
    import apnorm

    m = apnorm.modulus.power(0.5)
    phi = apnorm.phases.cantor_primitive(m, depth=12)

    spec = apnorm.compute_spectrum(phi, 1024.0)
    estimate = apnorm.ap_norm(spec, 1.0)
    estimate.lo, estimate.hi

    # Lower-bound witness for one frequency
    report = apnorm.bounds.witness(apnorm.phases.cos_phase(), 256.0, 10,
                                   apnorm.modulus.power(1.0))

Experiments:
    experiment = apnorm.Experiment.from_file("cantor.cfg")
    rows = experiment.run_norms()
"""

__version__ = "0.1.0"

from . import bounds, cantor, errors, modulus, parallel, phases, refine, spectrum
from .errors import (
    ApNormError,
    ConfigError,
    ConstructionError,
    DispatchError,
    DomainError,
    LambdaTooSmallError,
    NumericError,
    PreconditionError,
)
from .spectrum import NormEstimate, Spectrum, ap_norm, compute_spectrum
from . import lab
from .lab import Experiment, run_norms, witness_suite

__all__ = [
    # Primary interface
    "compute_spectrum",
    "ap_norm",
    "Spectrum",
    "NormEstimate",
    "Experiment",
    "run_norms",
    "witness_suite",
    # Errors
    "ApNormError",
    "ConfigError",
    "ConstructionError",
    "DispatchError",
    "DomainError",
    "LambdaTooSmallError",
    "NumericError",
    "PreconditionError",
    # Submodules
    "bounds",
    "cantor",
    "errors",
    "lab",
    "modulus",
    "parallel",
    "phases",
    "refine",
    "spectrum",
]
