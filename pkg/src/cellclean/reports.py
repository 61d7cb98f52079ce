"""Human-readable tables and flat key=value records for runs.

Every report exists in two shapes: an aligned text table for people and a
flat ``key=value`` record list that downstream tooling can parse without
screen scraping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .filtering import TALLY_ROWS
from .model import Trajectory

Record = tuple[str, str]


@dataclass(frozen=True)
class TrajectoryStats:
    """The headline statistics reported for a trajectory."""

    location_updates: int
    unique_cells: int
    highest_cell_frequency: int


def trajectory_stats(trajectory: Trajectory) -> TrajectoryStats:
    counts: dict[str, int] = {}
    for event in trajectory:
        counts[event.cell_id] = counts.get(event.cell_id, 0) + 1
    return TrajectoryStats(
        location_updates=len(trajectory),
        unique_cells=len(counts),
        highest_cell_frequency=max(counts.values()) if counts else 0,
    )


def render_filter_text(
    original: TrajectoryStats,
    filtered: TrajectoryStats,
    tallies: Mapping[str, tuple[int, int]],
) -> str:
    lines = [
        "Trajectory statistics",
        f"  {'metric':<24}{'original':>10}{'filtered':>10}",
        f"  {'location updates':<24}{original.location_updates:>10}{filtered.location_updates:>10}",
        f"  {'unique cells':<24}{original.unique_cells:>10}{filtered.unique_cells:>10}",
        f"  {'highest cell frequency':<24}{original.highest_cell_frequency:>10}"
        f"{filtered.highest_cell_frequency:>10}",
        "",
        "Anchor decisions",
        f"  {'anchor':<8}{'accepted':>10}{'discarded':>10}",
    ]
    total_accepted = 0
    total_discarded = 0
    for row in TALLY_ROWS:
        accepted, discarded = tallies[row]
        total_accepted += accepted
        total_discarded += discarded
        lines.append(f"  {row:<8}{accepted:>10}{discarded:>10}")
    lines.append(f"  {'total':<8}{total_accepted:>10}{total_discarded:>10}")
    return "\n".join(lines) + "\n"


def filter_records(
    original: TrajectoryStats,
    filtered: TrajectoryStats,
    tallies: Mapping[str, tuple[int, int]],
) -> list[Record]:
    records: list[Record] = []
    for name, stats in (("original", original), ("filtered", filtered)):
        records.append((f"stats.{name}.location_updates", str(stats.location_updates)))
        records.append((f"stats.{name}.unique_cells", str(stats.unique_cells)))
        records.append(
            (f"stats.{name}.highest_cell_frequency", str(stats.highest_cell_frequency))
        )
    for row in TALLY_ROWS:
        accepted, discarded = tallies[row]
        records.append((f"anchor.{row}.accepted", str(accepted)))
        records.append((f"anchor.{row}.discarded", str(discarded)))
    return records


@dataclass(frozen=True)
class EvalSummary:
    """Inputs to the evaluation report, already reduced to counts and sets."""

    radius_factor: float
    max_association_gap_s: float
    truth_event_count: int
    filtered_event_count: int
    truth_cells: int
    filter_cells: int
    matching_cells: int
    not_in_truth_cells: int
    not_in_filter_cells: int
    precision: float
    recall: float
    precision_defined: bool
    recall_defined: bool


def render_eval_text(summary: EvalSummary) -> str:
    lines = [
        f"Ground-truth evaluation (radius factor {summary.radius_factor:g}, "
        f"association gap {summary.max_association_gap_s:g} s)",
        f"  {'events in ground truth':<28}{summary.truth_event_count:>8}",
        f"  {'filtered events':<28}{summary.filtered_event_count:>8}",
        f"  {'ground-truth cells':<28}{summary.truth_cells:>8}",
        f"  {'filtered cells':<28}{summary.filter_cells:>8}",
        f"  {'matching cells':<28}{summary.matching_cells:>8}",
        f"  {'cells only in filter':<28}{summary.not_in_truth_cells:>8}",
        f"  {'cells only in ground truth':<28}{summary.not_in_filter_cells:>8}",
        f"  {'precision':<28}{summary.precision:>8.3f}"
        + ("" if summary.precision_defined else "  (undefined: empty filter set)"),
        f"  {'recall':<28}{summary.recall:>8.3f}"
        + ("" if summary.recall_defined else "  (undefined: empty truth set)"),
    ]
    return "\n".join(lines) + "\n"


def eval_records(summary: EvalSummary) -> list[Record]:
    return [
        ("eval.radius_factor", repr(summary.radius_factor)),
        ("eval.max_association_gap_s", repr(summary.max_association_gap_s)),
        ("eval.truth_events", str(summary.truth_event_count)),
        ("eval.filtered_events", str(summary.filtered_event_count)),
        ("eval.truth_cells", str(summary.truth_cells)),
        ("eval.filter_cells", str(summary.filter_cells)),
        ("eval.matching_cells", str(summary.matching_cells)),
        ("eval.not_in_truth_cells", str(summary.not_in_truth_cells)),
        ("eval.not_in_filter_cells", str(summary.not_in_filter_cells)),
        ("eval.precision", repr(summary.precision)),
        ("eval.recall", repr(summary.recall)),
        ("eval.precision_defined", "true" if summary.precision_defined else "false"),
        ("eval.recall_defined", "true" if summary.recall_defined else "false"),
    ]


def records_to_text(records: Sequence[Record]) -> str:
    return "\n".join(f"{key}={value}" for key, value in records) + "\n"


def parse_records(text: str) -> dict[str, str]:
    """Inverse of records_to_text, for tooling and tests."""
    out: dict[str, str] = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            out[key] = value
    return out
