"""Ground-truth construction from GPS fixes and cell-level precision/recall.

Each event is paired with the GPS fix nearest in time (earlier fix wins a
tie; no fix if the nearest one is farther than the association gap). An event
is *in truth* when its cell is in the plan, it has an associated fix, and the
fix lies within ``radius_factor * radius`` of the cell centroid. Precision
and recall are computed over unique cell identifiers, truth set versus
filtered set.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, replace
from typing import Sequence

from .geo import great_circle_distance
from .model import CoveragePlan, GpsFix, LocationEvent, Trajectory


@dataclass(frozen=True)
class GroundTruthConfig:
    """Radius slack factor and the maximum event-to-fix pairing gap."""

    radius_factor: float = 1.0
    max_association_gap_s: float = 300.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius_factor) and self.radius_factor >= 1.0):
            raise ValueError(f"radius_factor must be >= 1, got {self.radius_factor}")
        if not (math.isfinite(self.max_association_gap_s) and self.max_association_gap_s > 0.0):
            raise ValueError(f"max_association_gap_s must be positive, got {self.max_association_gap_s}")


@dataclass(frozen=True)
class Association:
    """An event paired with its nearest-in-time fix, if one is close enough."""

    event: LocationEvent
    fix: GpsFix | None
    centroid_distance: float | None = None
    in_truth: bool = False


@dataclass(frozen=True)
class GroundTruth:
    """Truth cell set plus the per-event membership it was derived from."""

    truth_cells: frozenset[str]
    associations: tuple[Association, ...]

    @property
    def in_truth_count(self) -> int:
        return sum(1 for a in self.associations if a.in_truth)


def associate(
    trajectory: Trajectory,
    fixes: Sequence[GpsFix],
    cfg: GroundTruthConfig = GroundTruthConfig(),
) -> tuple[Association, ...]:
    """Pair every event with the GPS fix nearest in time.

    Ties go to the earlier fix. Events whose nearest fix is farther than
    ``max_association_gap_s`` stay fixless; with no fixes at all, every
    association is fixless.
    """
    times = [f.timestamp for f in fixes]
    out: list[Association] = []
    for event in trajectory:
        fix: GpsFix | None = None
        if fixes:
            i = bisect_left(times, event.timestamp)
            best: GpsFix | None = None
            best_gap = math.inf
            if i > 0:
                best = fixes[i - 1]
                best_gap = (event.timestamp - times[i - 1]).total_seconds()
            if i < len(fixes):
                right_gap = (times[i] - event.timestamp).total_seconds()
                if right_gap < best_gap:
                    best = fixes[i]
                    best_gap = right_gap
            if best is not None and best_gap <= cfg.max_association_gap_s:
                fix = best
        out.append(Association(event=event, fix=fix))
    return tuple(out)


def build_ground_truth(
    associations: Sequence[Association],
    plan: CoveragePlan,
    cfg: GroundTruthConfig = GroundTruthConfig(),
) -> GroundTruth:
    """Mark each association's truth membership and collect the truth cells."""
    resolved: list[Association] = []
    truth_cells: set[str] = set()
    for assoc in associations:
        event = assoc.event
        if assoc.fix is None or event.cell_id not in plan:
            resolved.append(replace(assoc, centroid_distance=None, in_truth=False))
            continue
        coverage = plan.get(event.cell_id).coverage
        distance = great_circle_distance(coverage.center, assoc.fix.position)
        in_truth = distance <= cfg.radius_factor * coverage.radius
        if in_truth:
            truth_cells.add(event.cell_id)
        resolved.append(replace(assoc, centroid_distance=distance, in_truth=in_truth))
    return GroundTruth(truth_cells=frozenset(truth_cells), associations=tuple(resolved))


@dataclass(frozen=True)
class EvaluationReport:
    """Set arithmetic between truth cells and filtered cells.

    ``precision_defined``/``recall_defined`` flag the empty-denominator
    cases, where the ratio is reported as 0.
    """

    truth_cells: frozenset[str]
    filter_cells: frozenset[str]
    matching_cells: frozenset[str]
    not_in_truth_cells: frozenset[str]
    not_in_filter_cells: frozenset[str]
    precision: float
    recall: float
    precision_defined: bool
    recall_defined: bool


def evaluate(truth_cells: frozenset[str], filter_cells: frozenset[str]) -> EvaluationReport:
    """Compare unique truth cells against unique filtered cells."""
    matching = truth_cells & filter_cells
    return EvaluationReport(
        truth_cells=frozenset(truth_cells),
        filter_cells=frozenset(filter_cells),
        matching_cells=frozenset(matching),
        not_in_truth_cells=frozenset(filter_cells - truth_cells),
        not_in_filter_cells=frozenset(truth_cells - filter_cells),
        precision=len(matching) / len(filter_cells) if filter_cells else 0.0,
        recall=len(matching) / len(truth_cells) if truth_cells else 0.0,
        precision_defined=bool(filter_cells),
        recall_defined=bool(truth_cells),
    )


@dataclass(frozen=True)
class ProfilePoint:
    """Centroid-to-fix distance and cell radius for one associated event.

    Both values are None when the event's cell has no coverage info, since
    there is then no centroid to measure from.
    """

    event: LocationEvent
    centroid_distance: float | None
    radius: float | None


def distance_profile(
    associations: Sequence[Association], plan: CoveragePlan
) -> tuple[ProfilePoint, ...]:
    """One point per event with an associated fix, in event order."""
    points: list[ProfilePoint] = []
    for assoc in associations:
        if assoc.fix is None:
            continue
        if assoc.event.cell_id in plan:
            coverage = plan.get(assoc.event.cell_id).coverage
            distance = great_circle_distance(coverage.center, assoc.fix.position)
            points.append(ProfilePoint(assoc.event, distance, coverage.radius))
        else:
            points.append(ProfilePoint(assoc.event, None, None))
    return tuple(points)
