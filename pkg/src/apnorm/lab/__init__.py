"""
Experiment orchestration: config files, lambda sweeps, exponent fits,
envelope comparisons and CSV/SVG output.
"""

from .config import ExperimentConfig, load_config, parse_config
from .fitting import (
    EnvelopeComparison,
    GrowthFit,
    compare_envelopes,
    fit_exponent,
    fit_report,
)
from .output import (
    NORM_HEADER,
    WITNESS_HEADER,
    NormRow,
    emit_plot,
    parse_norms,
    read_norms,
    write_norms,
    write_witnesses,
)
from .session import Experiment, FinalCheck, WitnessSuite, run_norms, witness_suite

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "EnvelopeComparison",
    "FinalCheck",
    "GrowthFit",
    "NORM_HEADER",
    "NormRow",
    "WITNESS_HEADER",
    "WitnessSuite",
    "compare_envelopes",
    "emit_plot",
    "fit_exponent",
    "fit_report",
    "load_config",
    "parse_config",
    "parse_norms",
    "read_norms",
    "run_norms",
    "witness_suite",
    "write_norms",
    "write_witnesses",
]
