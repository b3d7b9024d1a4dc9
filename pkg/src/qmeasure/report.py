"""Run records and their emission as text tables or machine-readable JSON.

Machine form: one JSON object with keys in the fixed order born,
collapsed_diag, restricted, empirical, max_deviation, cross_terms. Every
float is printed with 12 significant digits, and values are pre-rounded
through that decimal form, so emitting, parsing and re-emitting a report is
byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import SpectralProbabilityMeasure
from .errors import UnknownFormat, ValidationError
from .observables import OutcomeDistribution

_SUM_TOL = 1e-10


def sig12(x: float) -> float:
    """Round through the 12-significant-digit decimal used for output."""
    return float(format(float(x), ".12g"))


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


@dataclass(frozen=True, eq=False)
class EmpiricalCounts:
    """Sampled outcome counts and their relative frequencies."""

    counts: tuple[int, ...]
    frequencies: tuple[float, ...]
    trials: int

    def __post_init__(self) -> None:
        if self.trials <= 0:
            raise ValidationError("empirical record needs a positive trial count")
        if len(self.counts) != len(self.frequencies) or not self.counts:
            raise ValidationError("counts and frequencies must match in length")
        if sum(self.counts) != self.trials:
            raise ValidationError("counts do not add up to the trial count")
        for c, f in zip(self.counts, self.frequencies):
            if abs(f - c / self.trials) > 1e-12:
                raise ValidationError("frequencies do not match counts")


@dataclass(frozen=True, eq=False)
class Report:
    """One run's analytic distributions, optional sampling record, and the
    worst disagreement between the analytic routes."""

    born: OutcomeDistribution
    collapsed_diag: tuple[float, ...]
    restricted: SpectralProbabilityMeasure
    restricted_characters: tuple[tuple[float, ...], ...]
    empirical: EmpiricalCounts | None
    max_deviation: float
    cross_terms: tuple[float, ...]

    def __post_init__(self) -> None:
        if abs(sum(self.collapsed_diag) - 1.0) > _SUM_TOL:
            raise ValidationError("collapse diagonal is not normalized")
        if len(self.restricted_characters) != self.restricted.n_points:
            raise ValidationError("need one character tuple per restricted weight")
        if self.empirical is not None and len(self.empirical.counts) != self.born.outcomes.size:
            raise ValidationError("empirical record does not match the outcome list")


def report_payload(r: Report) -> dict:
    """Plain-data form of a report, floats rounded to the printed precision."""
    empirical = None
    if r.empirical is not None:
        empirical = {
            "counts": list(r.empirical.counts),
            "frequencies": [sig12(f) for f in r.empirical.frequencies],
            "trials": r.empirical.trials,
        }
    return {
        "born": {
            "outcomes": [sig12(x) for x in r.born.outcomes],
            "probabilities": [sig12(x) for x in r.born.probabilities],
        },
        "collapsed_diag": [sig12(x) for x in r.collapsed_diag],
        "restricted": {
            "characters": [[sig12(x) for x in ch] for ch in r.restricted_characters],
            "weights": [sig12(x) for x in r.restricted.weights],
        },
        "empirical": empirical,
        "max_deviation": sig12(r.max_deviation),
        "cross_terms": [sig12(x) for x in r.cross_terms],
    }


def _table(r: Report) -> list[str]:
    lines = ["born vs collapse (outcomes ascending):"]
    lines.append(f"  {'outcome':<20} {'born':<20} collapse")
    for o, p, c in zip(r.born.outcomes, r.born.probabilities, r.collapsed_diag):
        lines.append(f"  {_fmt(o):<20} {_fmt(p):<20} {_fmt(c)}")
    lines.append("restricted measure:")
    lines.append(f"  {'character':<28} weight")
    for ch, w in zip(r.restricted_characters, r.restricted.weights):
        label = "(" + ", ".join(_fmt(x) for x in ch) + ")"
        lines.append(f"  {label:<28} {_fmt(w)}")
    if r.empirical is not None:
        lines.append(f"empirical (trials={r.empirical.trials}):")
        lines.append(f"  {'outcome':<20} {'count':<12} frequency")
        for o, c, f in zip(r.born.outcomes, r.empirical.counts, r.empirical.frequencies):
            lines.append(f"  {_fmt(o):<20} {c:<12} {_fmt(f)}")
    lines.append(f"max deviation: {_fmt(r.max_deviation)}")
    lines.append("cross terms:")
    for i, x in enumerate(r.cross_terms):
        lines.append(f"  generator {i}: {_fmt(x)}")
    return lines


def emit_report(r: Report, format_selector: str = "table") -> str:
    """Render a report. format_selector is "table" or "json"."""
    if format_selector == "json":
        return json.dumps(report_payload(r), indent=2) + "\n"
    if format_selector == "table":
        return "\n".join(_table(r)) + "\n"
    raise UnknownFormat(f"unknown format {format_selector!r}")


@dataclass(frozen=True)
class ComparisonSummary:
    """Worst and mean disagreement between the collapse diagonal and the
    restriction weights over randomized runs. worst_case_key is the full
    substream key of the offending case, so it can be replayed alone."""

    dim: int
    n_random: int
    seed: int
    worst: float
    mean: float
    worst_index: int
    worst_case_key: tuple[int, ...]


def emit_summary(s: ComparisonSummary, format_selector: str = "table") -> str:
    if format_selector == "json":
        payload = {
            "dim": s.dim,
            "n_random": s.n_random,
            "seed": s.seed,
            "worst": sig12(s.worst),
            "mean": sig12(s.mean),
            "worst_index": s.worst_index,
            "worst_case_key": list(s.worst_case_key),
        }
        return json.dumps(payload, indent=2) + "\n"
    if format_selector == "table":
        lines = [
            f"collapse vs restriction over {s.n_random} random cases at dim {s.dim} (seed {s.seed}):",
            f"  worst deviation: {_fmt(s.worst)} (case {s.worst_index}, stream key {list(s.worst_case_key)})",
            f"  mean deviation:  {_fmt(s.mean)}",
        ]
        return "\n".join(lines) + "\n"
    raise UnknownFormat(f"unknown format {format_selector!r}")
