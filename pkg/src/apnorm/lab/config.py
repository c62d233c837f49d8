"""
Experiment configuration files.

A config is a line-oriented ``key = value`` file with ``#`` comments and
dotted keys, for example::

    # cantor primitive at alpha = 1/2
    modulus.kind = power
    modulus.alpha = 0.5
    phase.kind = cantor
    lambda.min = 64
    lambda.max = 4096
    lambda.count = 13
    p = 1, 1.2, 1.8
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

from ..errors import ConfigError

logger = logging.getLogger(__name__)

MODULUS_KINDS = ("power", "power-log", "tabulated")
PHASE_KINDS = ("linear", "cos", "pl", "cantor", "nested", "diffeo")
DIFFEO_BASES = ("cos", "pl", "cantor", "nested")
ENGINES = ("auto", "exact", "dft")
INTEGER_MODES = ("auto", "true", "false")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Validated experiment description.

    ``modulus`` and ``phase`` hold the kind-specific parameters under their
    short names (``alpha``, ``depth``, ...); absent optional keys are absent
    from the dicts.
    """

    source: str = "<string>"
    modulus_kind: str = "power"
    modulus: Dict[str, Any] = field(default_factory=dict)
    phase_kind: str = "cos"
    phase: Dict[str, Any] = field(default_factory=dict)
    lam_min: float = 64.0
    lam_max: float = 4096.0
    lam_count: int = 13
    lam_integer: str = "auto"
    ps: Tuple[float, ...] = (1.0, 1.5, 2.0)
    band_exponent: float = 1.5
    band_factor: float = 1.0
    engine: str = "auto"
    oversample: int = 4
    output_csv: Optional[str] = None
    output_plot: Optional[str] = None
    output_witness: Optional[str] = None
    threads: int = 0
    seed: int = 0
    witness_count: int = 16
    witness_lambdas: Tuple[float, ...] = ()
    witness_ps: Tuple[float, ...] = (1.0, 1.2)


# ----------------------------------------------------------------------
# Value converters
# ----------------------------------------------------------------------


def _float(text: str) -> float:
    return float(text)


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _floats(text: str) -> Tuple[float, ...]:
    items = [item.strip() for item in text.split(",")]
    if not items or any(not item for item in items):
        raise ValueError(f"{text!r} is not a comma separated list")
    return tuple(float(item) for item in items)


def _choice(options: Tuple[str, ...]) -> Callable[[str], str]:
    def convert(text: str) -> str:
        value = text.strip().lower()
        if value not in options:
            raise ValueError(f"{text!r} not one of {', '.join(options)}")
        return value

    return convert


def _path(text: str) -> str:
    if not text:
        raise ValueError("empty path")
    return text


# key -> (converter, destination); destination is a field name or
# "modulus:<param>" / "phase:<param>".
_KEYS: Dict[str, Tuple[Callable[[str], Any], str]] = {
    "modulus.kind": (_choice(MODULUS_KINDS), "modulus_kind"),
    "modulus.alpha": (_float, "modulus:alpha"),
    "modulus.beta": (_float, "modulus:beta"),
    "modulus.nodes": (_floats, "modulus:nodes"),
    "modulus.values": (_floats, "modulus:values"),
    "phase.kind": (_choice(PHASE_KINDS), "phase_kind"),
    "phase.alpha": (_float, "phase:alpha"),
    "phase.slope": (_int, "phase:slope"),
    "phase.offset": (_float, "phase:offset"),
    "phase.breakpoints": (_floats, "phase:breakpoints"),
    "phase.values": (_floats, "phase:values"),
    "phase.depth": (_int, "phase:depth"),
    "phase.levels": (_int, "phase:levels"),
    "phase.epsilon": (_float, "phase:epsilon"),
    "phase.base": (_choice(DIFFEO_BASES), "phase:base"),
    "phase.head_weight": (_float, "phase:head_weight"),
    "lambda.min": (_float, "lam_min"),
    "lambda.max": (_float, "lam_max"),
    "lambda.count": (_int, "lam_count"),
    "lambda.integer": (_choice(INTEGER_MODES), "lam_integer"),
    "p": (_floats, "ps"),
    "band.exponent": (_float, "band_exponent"),
    "band.factor": (_float, "band_factor"),
    "engine": (_choice(ENGINES), "engine"),
    "dft.oversample": (_int, "oversample"),
    "output.csv": (_path, "output_csv"),
    "output.plot": (_path, "output_plot"),
    "output.witness": (_path, "output_witness"),
    "threads": (_int, "threads"),
    "seed": (_int, "seed"),
    "witness.count": (_int, "witness_count"),
    "witness.lambdas": (_floats, "witness_lambdas"),
    "witness.p": (_floats, "witness_ps"),
}


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------


def parse_config(text: str, source: str = "<string>") -> ExperimentConfig:
    """
    Parse and validate a config.

    Args:
        text: Config file contents
        source: Name used in error messages

    Returns:
        ExperimentConfig

    Raises:
        ConfigError: With the source name and 1-based line number
    """
    values: Dict[str, Any] = {}
    modulus: Dict[str, Any] = {}
    phase: Dict[str, Any] = {}
    lines: Dict[str, int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            message = f"expected 'key = value', got {raw.strip()!r}"
            raise ConfigError(message, source, number)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", source, number)
        if key in lines:
            first = lines[key]
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {first})", source, number
            )
        if not value:
            raise ConfigError(f"missing value for {key!r}", source, number)
        lines[key] = number
        convert, destination = _KEYS[key]
        try:
            converted = convert(value)
        except ValueError as exc:
            message = f"invalid value for {key!r}: {exc}"
            raise ConfigError(message, source, number) from exc
        if destination.startswith("modulus:"):
            modulus[destination.split(":", 1)[1]] = converted
        elif destination.startswith("phase:"):
            phase[destination.split(":", 1)[1]] = converted
        else:
            values[destination] = converted

    alias = phase.pop("alpha", None)
    if alias is not None and "alpha" not in modulus:
        modulus["alpha"] = alias
        lines.setdefault("modulus.alpha", lines["phase.alpha"])

    config = ExperimentConfig(source=source, modulus=modulus, phase=phase, **values)
    _validate(config, lines)
    logger.debug(
        "parsed config %s: %s phase, %d lambdas",
        source,
        config.phase_kind,
        config.lam_count,
    )
    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and parse a config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from exc
    return parse_config(text, source=str(path))


def _validate(config: ExperimentConfig, lines: Dict[str, int]) -> None:
    def fail(message: str, *keys: str) -> None:
        line = next((lines[key] for key in keys if key in lines), None)
        raise ConfigError(message, config.source, line)

    if config.lam_min < 2.0:
        fail("lambda.min must be >= 2", "lambda.min")
    if config.lam_count < 1:
        fail("lambda.count must be >= 1", "lambda.count")
    if config.lam_count > 1 and config.lam_max <= config.lam_min:
        fail("lambda.max must exceed lambda.min", "lambda.max", "lambda.min")
    for key, ps in (("p", config.ps), ("witness.p", config.witness_ps)):
        if any(not (1.0 <= p <= 2.0) for p in ps):
            fail(f"{key} values must lie in [1, 2]", key)
    if config.band_exponent <= 0 or config.band_factor <= 0:
        fail(
            "band.exponent and band.factor must be positive",
            "band.exponent",
            "band.factor",
        )
    if config.oversample < 4:
        fail("dft.oversample must be >= 4", "dft.oversample")
    if config.threads < 0:
        fail("threads must be >= 0", "threads")
    if config.witness_count < 1:
        fail("witness.count must be >= 1", "witness.count")
    if any(lam < 2.0 for lam in config.witness_lambdas):
        fail("witness.lambdas must be >= 2", "witness.lambdas")

    if config.modulus_kind == "power-log" and "beta" not in config.modulus:
        fail("modulus.beta is required for power-log", "modulus.kind")
    if config.modulus_kind == "tabulated" and (
        "nodes" not in config.modulus or "values" not in config.modulus
    ):
        fail("tabulated moduli need modulus.nodes and modulus.values", "modulus.kind")
    if config.phase_kind == "pl":
        if "breakpoints" not in config.phase or "values" not in config.phase:
            fail("pl phases need phase.breakpoints and phase.values", "phase.kind")
    if config.phase_kind == "diffeo" and config.phase.get("base") == "pl":
        if "breakpoints" not in config.phase or "values" not in config.phase:
            fail("pl phases need phase.breakpoints and phase.values", "phase.base")
    if config.output_plot and not config.output_csv:
        fail("output.plot needs output.csv", "output.plot")
    if config.phase_kind == "linear" and "slope" not in config.phase:
        fail("linear phases need phase.slope", "phase.kind")
    head = config.phase.get("head_weight")
    if head is not None and not (0.0 <= head < 1.0):
        fail("phase.head_weight must lie in [0, 1)", "phase.head_weight")
    levels = config.phase.get("levels")
    if levels is not None and levels < 1:
        fail("phase.levels must be >= 1", "phase.levels")
    depth = config.phase.get("depth")
    if depth is not None and depth < 1:
        fail("phase.depth must be >= 1", "phase.depth")
