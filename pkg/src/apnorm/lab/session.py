"""
Experiment sessions: build the modulus and phase a config describes, sweep
lambda, and collect norm intervals or witness reports.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .. import bounds, modulus as moduli, phases
from ..cantor import depth_for
from ..errors import LambdaTooSmallError
from ..modulus import Modulus
from ..parallel import parallel_map
from ..phases import PhaseFn
from ..spectrum import (
    DFTEngine,
    ExactAffineEngine,
    SpectrumEngine,
    ap_norm,
    band_size,
)
from .config import ExperimentConfig, load_config, parse_config
from .output import NormRow, write_norms, write_witnesses

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 4
DEFAULT_EPSILON = 0.5
CONSTRUCTED = ("cantor", "nested")


@dataclass(frozen=True)
class FinalCheck:
    """Witness lower bound against the measured A_p upper end."""

    lam: float
    p: float
    lower: float
    hi: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.hi


@dataclass(frozen=True)
class WitnessSuite:
    """
    Outcome of a witness sweep.

    Attributes:
        lip_constant: Lip constant c used for every window
        reports: WitnessReports in grid order
        checks: Final-inequality checks per (lambda, p)
        skipped: (lambda, binding threshold) for lambdas that were too small
    """

    lip_constant: float
    reports: Tuple[bounds.WitnessReport, ...]
    checks: Tuple[FinalCheck, ...]
    skipped: Tuple[Tuple[float, str], ...]

    @property
    def passed(self) -> int:
        return sum(1 for r in self.reports if r.passed)

    @property
    def failed(self) -> int:
        return len(self.reports) - self.passed

    @property
    def min_margin(self) -> float:
        return min((r.margin for r in self.reports), default=math.inf)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and all(c.holds for c in self.checks)


class Experiment:
    """
    A configured experiment.

    Args:
        config: Validated configuration

    Example:
        experiment = Experiment.from_file("cantor.cfg")
        rows = experiment.run_norms()
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self._modulus: Optional[Modulus] = None
        self._phase: Optional[PhaseFn] = None

    def __repr__(self) -> str:
        return f"Experiment({self.config.source!r}, phase={self.config.phase_kind!r})"

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Experiment":
        return cls(load_config(path))

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> "Experiment":
        return cls(parse_config(text, source))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @property
    def modulus(self) -> Modulus:
        if self._modulus is None:
            self._modulus = self._build_modulus()
        return self._modulus

    @property
    def phase(self) -> PhaseFn:
        if self._phase is None:
            self._phase = self._build_phase(self.config.phase_kind)
        return self._phase

    def _uses_construction(self) -> bool:
        kind = self.config.phase_kind
        return kind in CONSTRUCTED or (
            kind == "diffeo" and self.config.phase.get("base") in CONSTRUCTED
        )

    def _build_modulus(self) -> Modulus:
        cfg = self.config
        params = cfg.modulus
        # Smooth benchmarks are compared against the Lipschitz modulus by default.
        alpha = params.get("alpha", 0.5 if self._uses_construction() else 1.0)
        if cfg.modulus_kind == "power":
            return moduli.power(alpha)
        if cfg.modulus_kind == "power-log":
            return moduli.power_log(alpha, params.get("beta", 0.0))
        return moduli.tabulated(params["nodes"], params["values"])

    def _depth(self, minimum: int) -> int:
        depth = self.config.phase.get("depth")
        if depth is not None:
            return int(depth)
        chosen = depth_for(self.modulus, self.config.lam_max, minimum=minimum)
        logger.info("auto depth %d for lambda_max=%g", chosen, self.config.lam_max)
        return chosen

    def _build_phase(self, kind: str) -> PhaseFn:
        params = self.config.phase
        seed = self.config.seed
        if kind == "linear":
            return phases.linear_phase(params["slope"], params.get("offset", 0.0))
        if kind == "cos":
            return phases.cos_phase()
        if kind == "pl":
            return phases.pl_phase(params["breakpoints"], params["values"])
        if kind == "cantor":
            return phases.cantor_primitive(self.modulus, self._depth(1), seed=seed)
        if kind == "nested":
            levels = int(params.get("levels", DEFAULT_LEVELS))
            phase, schedule = phases.nested_phase(
                self.modulus,
                levels,
                self._depth(levels + 1),
                head_weight=params.get("head_weight", 0.5),
                seed=seed,
            )
            logger.info(
                "nested schedule: %r, remainder %.3g", schedule, schedule.remainder
            )
            return phase
        base = self._build_phase(params.get("base", "cos"))
        return phases.diffeo(base, params.get("epsilon", DEFAULT_EPSILON))

    def engine(self, threads: Optional[int] = 1) -> SpectrumEngine:
        """Engine named by the config; inner engines run single-threaded in sweeps."""
        choice = self.config.engine
        if choice == "exact" or (choice == "auto" and self.phase.pieces is not None):
            return ExactAffineEngine(threads=threads)
        return DFTEngine(oversample=self.config.oversample, workers=threads)

    def lambda_grid(self) -> Tuple[float, ...]:
        """
        Log-spaced lambdas; rounded to distinct integers when lambda.integer is
        true, or auto and the phase winds.
        """
        cfg = self.config
        if cfg.lam_count == 1:
            grid = np.array([cfg.lam_min])
        else:
            grid = np.geomspace(cfg.lam_min, cfg.lam_max, cfg.lam_count)
        integral = cfg.lam_integer == "true" or (
            cfg.lam_integer == "auto" and self.phase.winding != 0
        )
        if integral:
            grid = np.unique(np.round(grid))
            logger.info("lambda grid rounded to %d integers", grid.size)
        return tuple(float(x) for x in grid)

    # ------------------------------------------------------------------
    # Sweeps
    # ------------------------------------------------------------------

    def norms_at(
        self, lam: float, ps: Sequence[float], engine: SpectrumEngine
    ) -> List[NormRow]:
        cfg = self.config
        band = band_size(lam, cfg.band_exponent, cfg.band_factor)
        spec = engine.compute(self.phase, lam, band)
        rows = []
        for p in ps:
            estimate = ap_norm(spec, p)
            lo, hi = estimate.lo, estimate.hi
            row = NormRow(lam, float(p), lo, hi, band, estimate.tail, engine.name)
            rows.append(row)
        return rows

    def run_norms(self, write: bool = True) -> List[NormRow]:
        """
        One row per (lambda, p) in grid order.

        Writes output.csv when configured and ``write`` is set.
        """
        cfg = self.config
        grid = self.lambda_grid()
        engine = self.engine()
        logger.info(
            "norm sweep: %r, %d lambdas in [%g, %g], p=%s",
            self.phase,
            len(grid),
            grid[0],
            grid[-1],
            ",".join(f"{p:g}" for p in cfg.ps),
        )
        chunks = parallel_map(
            lambda lam: self.norms_at(lam, cfg.ps, engine), grid, cfg.threads
        )
        rows = [row for chunk in chunks for row in chunk]
        if write and cfg.output_csv:
            write_norms(rows, cfg.output_csv)
        logger.info("norm sweep finished: %d rows", len(rows))
        return rows

    def witness_suite(self, write: bool = True) -> WitnessSuite:
        """
        Witness checks for ``witness.count`` admissible k per lambda, then the
        final inequality for every ``witness.p``.
        """
        cfg = self.config
        phase = self.phase
        lams = tuple(cfg.witness_lambdas) or self.lambda_grid()
        probe = bounds.lip_estimate(phase, self.modulus, seed=cfg.seed)
        engine = self.engine()

        def run(lam: float) -> Tuple[list, list, Optional[str]]:
            ks = bounds.admissible_ks(phase, lam, cfg.witness_count)
            if not ks:
                return [], [], None
            try:
                reports = [
                    bounds.witness(phase, lam, k, self.modulus, probe) for k in ks
                ]
            except LambdaTooSmallError as exc:
                logger.warning("skipping lambda=%g: %s", lam, exc)
                return [], [], exc.binding
            checks = []
            band = band_size(lam, cfg.band_exponent, cfg.band_factor)
            spec = engine.compute(phase, lam, band)
            for p in cfg.witness_ps:
                estimate = ap_norm(spec, p)
                lower, _ = bounds.final_inequality(
                    phase, self.modulus, probe, lam, estimate
                )
                checks.append(FinalCheck(lam, float(p), lower, estimate.hi))
            return reports, checks, None

        results = parallel_map(run, lams, cfg.threads)
        reports = tuple(r for result in results for r in result[0])
        checks = tuple(c for result in results for c in result[1])
        skipped = tuple(
            (lam, result[2]) for lam, result in zip(lams, results) if result[2]
        )
        if not reports:
            logger.warning("witness suite for %r ran no tests", phase)
        if write and cfg.output_witness:
            write_witnesses(reports, cfg.output_witness)
        suite = WitnessSuite(probe, reports, checks, skipped)
        logger.info(
            "witness suite: %d passed, %d failed, min margin %.4g",
            suite.passed,
            suite.failed,
            suite.min_margin,
        )
        return suite


def run_norms(config: Union[ExperimentConfig, str, Path]) -> List[NormRow]:
    """
    Run the norm sweep of a config (object or file path).

    Example:
        rows = apnorm.lab.run_norms("cos.cfg")
    """
    return _experiment(config).run_norms()


def witness_suite(config: Union[ExperimentConfig, str, Path]) -> WitnessSuite:
    """Run the witness suite of a config (object or file path)."""
    return _experiment(config).witness_suite()


def _experiment(config: Union[ExperimentConfig, str, Path]) -> Experiment:
    if isinstance(config, ExperimentConfig):
        return Experiment(config)
    return Experiment.from_file(config)
