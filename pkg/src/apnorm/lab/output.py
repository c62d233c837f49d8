"""
CSV tables and SVG plots.

CSV files are UTF-8 with ``\\n`` line endings and 17 significant digits, so a
rerun with the same config reproduces them byte for byte.
"""

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..errors import ConfigError, DomainError  # noqa: E402

logger = logging.getLogger(__name__)

NORM_HEADER = ("lambda", "p", "norm_lo", "norm_hi", "band_K", "tail", "engine")
WITNESS_HEADER = ("lambda", "k", "t", "measured", "threshold", "pass")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class NormRow:
    """One row of a norms table."""

    lam: float
    p: float
    lo: float
    hi: float
    band: int
    tail: float
    engine: str

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def fmt(value: float) -> str:
    return "{:.17g}".format(value)


def _write(
    path: Optional[PathLike], header: Sequence[str], rows: Iterable[Sequence[str]]
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
        logger.info("wrote %s", path)
    return text


def write_norms(rows: Sequence[NormRow], path: Optional[PathLike] = None) -> str:
    """Serialise norm rows; writes ``path`` when given and returns the text."""
    return _write(
        path,
        NORM_HEADER,
        (
            (
                fmt(r.lam),
                fmt(r.p),
                fmt(r.lo),
                fmt(r.hi),
                str(r.band),
                fmt(r.tail),
                r.engine,
            )
            for r in rows
        ),
    )


def write_witnesses(reports: Sequence, path: Optional[PathLike] = None) -> str:
    """Serialise WitnessReports as ``lambda,k,t,measured,threshold,pass``."""
    return _write(
        path,
        WITNESS_HEADER,
        (
            (
                fmt(r.lam),
                str(r.k),
                fmt(r.t),
                fmt(r.measured),
                fmt(r.threshold),
                "true" if r.passed else "false",
            )
            for r in reports
        ),
    )


def parse_norms(text: str, source: str = "<string>") -> List[NormRow]:
    """
    Parse a norms table.

    Raises:
        ConfigError: On a wrong header or a malformed row (with its line number)
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != NORM_HEADER:
        raise ConfigError(f"unexpected header {','.join(header)!r}", source, 1)
    rows = []
    for number, record in enumerate(reader, start=2):
        if not record:
            continue
        try:
            lam, p, lo, hi, band, tail, engine = record
            numbers = (float(lam), float(p), float(lo), float(hi))
            rows.append(NormRow(*numbers, int(band), float(tail), engine))
        except ValueError as exc:
            raise ConfigError(f"malformed row: {exc}", source, number) from exc
    return rows


def read_norms(path: PathLike) -> List[NormRow]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read table: {exc}", str(path)) from exc
    return parse_norms(text, source=str(path))


def emit_plot(
    csv_path: PathLike,
    out_path: PathLike,
    envelopes: Optional[Dict[str, Callable[[float, float], float]]] = None,
    ps: Optional[Sequence[float]] = None,
) -> Path:
    """
    Log-log plot of norm intervals against lambda, one curve per p.

    Each envelope ``name -> f(p, lam)`` is scaled to pass through the first
    midpoint of every curve. The CSV data is embedded in the SVG as a
    comment.

    Args:
        csv_path: Norms table
        out_path: SVG file to write
        envelopes: Overlays keyed by label
        ps: Restrict to these p values

    Returns:
        The written path

    Raises:
        DomainError: If the table (after filtering) is empty; nothing is written
    """
    text = Path(csv_path).read_text(encoding="utf-8")
    rows = parse_norms(text, source=str(csv_path))
    if ps is not None:
        wanted = {float(p) for p in ps}
        rows = [r for r in rows if r.p in wanted]
    if not rows:
        raise DomainError(f"no rows to plot in {csv_path}")

    curves: Dict[float, List[NormRow]] = {}
    for row in rows:
        curves.setdefault(row.p, []).append(row)

    figure, axes = plt.subplots(figsize=(7.0, 5.0))
    try:
        for p, group in sorted(curves.items()):
            group.sort(key=lambda r: r.lam)
            lams = [r.lam for r in group]
            mids = [r.midpoint for r in group]
            spread: Tuple[List[float], List[float]] = (
                [r.midpoint - r.lo for r in group],
                [r.hi - r.midpoint for r in group],
            )
            label = f"p = {p:g}"
            axes.errorbar(
                lams, mids, yerr=spread, marker="o", ms=3, capsize=2, label=label
            )
            for name, func in (envelopes or {}).items():
                values = [func(p, lam) for lam in lams]
                scale = mids[0] / values[0] if values[0] else 1.0
                scaled = [scale * v for v in values]
                axes.plot(lams, scaled, "--", lw=1, label=f"{name} ({label})")
        axes.set_xscale("log")
        axes.set_yscale("log")
        axes.set_xlabel("lambda")
        axes.set_ylabel("A_p norm")
        axes.legend(fontsize="small")
        buffer = io.StringIO()
        figure.savefig(buffer, format="svg")
    finally:
        plt.close(figure)

    svg = buffer.getvalue()
    comment = "<!-- apnorm data\n" + text.replace("--", "- -") + "-->\n"
    marker = svg.find("?>")
    if marker >= 0:
        svg = svg[: marker + 2] + "\n" + comment + svg[marker + 2 :].lstrip("\n")
    else:
        svg = comment + svg
    out = Path(out_path)
    out.write_text(svg, encoding="utf-8")
    logger.info("wrote plot %s (%d rows)", out, len(rows))
    return out
