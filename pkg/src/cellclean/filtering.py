"""Eight-rule accept/discard pipeline over a cell-event trajectory.

Events are judged in time order against a moving *source*, the most recent
accepted event. The first event is accepted by default unless its cell is
unknown to the coverage plan, in which case the following event becomes the
candidate first event. A discard never advances the source, so a rejected
event cannot contaminate later comparisons. The ordered rules (anchors):

1. destination cell equals the source cell            -> accept
2. destination cell missing from the coverage plan    -> discard
3. time gap since the source reaches the threshold    -> accept
4. edge-to-edge gap between the two coverage circles
   is a large fraction of their centroid distance     -> discard (hop)
5. implied centroid-to-centroid speed is implausible  -> discard
6. the two coverage areas are near-duplicates (IoU)   -> discard
7. either coverage area is mostly inside the other    -> discard
8. immediate bounce-back to the source cell (A,B,A)   -> discard the middle
   event; otherwise accept

All threshold comparisons are strict: an event passes on to the next rule
only while strictly below the rule's threshold (rule 7: discards only when
strictly above).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geo import coverage_fraction, great_circle_distance, iou
from .model import CoveragePlan, LocationEvent, Trajectory

ACCEPTED = "accepted"
DISCARDED = "discarded"

REASON_FIRST_EVENT = "first-event"
REASON_SAME_CELL = "same-cell"
REASON_NOT_IN_PLAN = "not-in-plan"
REASON_TIME_GAP_ACCEPT = "time-gap-accept"
REASON_HOP_DISTANCE = "hop-distance"
REASON_SPEED_EXCEEDED = "speed-exceeded"
REASON_COVERAGE_SIMILARITY = "coverage-similarity"
REASON_COVERAGE_CONTAINMENT = "coverage-containment"
REASON_ABA_PING_PONG = "aba-ping-pong"
REASON_ABA_PASS = "aba-pass"

ACCEPT_REASONS = frozenset(
    {REASON_FIRST_EVENT, REASON_SAME_CELL, REASON_TIME_GAP_ACCEPT, REASON_ABA_PASS}
)
DISCARD_REASONS = frozenset(
    {
        REASON_NOT_IN_PLAN,
        REASON_HOP_DISTANCE,
        REASON_SPEED_EXCEEDED,
        REASON_COVERAGE_SIMILARITY,
        REASON_COVERAGE_CONTAINMENT,
        REASON_ABA_PING_PONG,
    }
)

# Tally rows: the first-event rule plus the eight anchors.
TALLY_ROWS = ("first", "1", "2", "3", "4", "5", "6", "7", "8")


@dataclass(frozen=True)
class FilterConfig:
    """Thresholds for the pipeline.

    Defaults are the operating point the pipeline was calibrated at:
    10 minutes, 20%, 90 km/h (25 m/s), 50%, and 80%.
    """

    time_threshold_s: float = 600.0
    distance_threshold: float = 0.20
    speed_threshold_ms: float = 25.0
    similarity_threshold: float = 0.50
    covered_threshold: float = 0.80

    def __post_init__(self) -> None:
        for name in ("time_threshold_s", "speed_threshold_ms"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive, got {value}")
        for name in ("distance_threshold", "similarity_threshold", "covered_threshold"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 < value <= 1.0):
                raise ValueError(f"{name} must be in (0, 1], got {value}")


@dataclass(frozen=True)
class Decision:
    """Verdict for one event: which rule decided it and why.

    ``anchor`` is 1..8, or None for the first-event rule.
    """

    event: LocationEvent
    verdict: str
    anchor: int | None
    reason: str

    def __post_init__(self) -> None:
        expected = ACCEPT_REASONS if self.verdict == ACCEPTED else DISCARD_REASONS
        if self.verdict not in (ACCEPTED, DISCARDED) or self.reason not in expected:
            raise ValueError(f"inconsistent decision {self.verdict}/{self.reason}")


@dataclass(frozen=True)
class FilterReport:
    """All decisions plus the surviving trajectory and per-rule tallies.

    ``tallies`` maps a row label ("first", "1".."8") to an (accepted,
    discarded) pair; the counts sum to the input event count.
    """

    decisions: tuple[Decision, ...]
    filtered: Trajectory
    tallies: dict[str, tuple[int, int]] = field(default_factory=dict)


def _tally(decisions: list[Decision]) -> dict[str, tuple[int, int]]:
    counts = {row: [0, 0] for row in TALLY_ROWS}
    for decision in decisions:
        row = "first" if decision.anchor is None else str(decision.anchor)
        counts[row][0 if decision.verdict == ACCEPTED else 1] += 1
    return {row: (acc, dis) for row, (acc, dis) in counts.items()}


def _judge(
    events: tuple[LocationEvent, ...],
    index: int,
    source: LocationEvent,
    plan: CoveragePlan,
    cfg: FilterConfig,
) -> Decision:
    event = events[index]

    if event.cell_id == source.cell_id:
        return Decision(event, ACCEPTED, 1, REASON_SAME_CELL)

    if event.cell_id not in plan:
        return Decision(event, DISCARDED, 2, REASON_NOT_IN_PLAN)

    dt = (event.timestamp - source.timestamp).total_seconds()
    if not dt < cfg.time_threshold_s:
        return Decision(event, ACCEPTED, 3, REASON_TIME_GAP_ACCEPT)

    src = plan.get(source.cell_id).coverage
    dst = plan.get(event.cell_id).coverage
    centroid_distance = great_circle_distance(src.center, dst.center)

    # Coinciding centroids have no edge gap; treat the ratio as 0.
    edge_gap = max(0.0, centroid_distance - src.radius - dst.radius)
    gap_ratio = edge_gap / centroid_distance if centroid_distance > 0.0 else 0.0
    if not gap_ratio < cfg.distance_threshold:
        return Decision(event, DISCARDED, 4, REASON_HOP_DISTANCE)

    # A zero time gap with distinct centroids implies infinite speed.
    if centroid_distance > 0.0:
        speed = centroid_distance / dt if dt > 0.0 else math.inf
    else:
        speed = 0.0
    if not speed < cfg.speed_threshold_ms:
        return Decision(event, DISCARDED, 5, REASON_SPEED_EXCEEDED)

    if not iou(src, dst) < cfg.similarity_threshold:
        return Decision(event, DISCARDED, 6, REASON_COVERAGE_SIMILARITY)

    if (
        coverage_fraction(src, dst) > cfg.covered_threshold
        or coverage_fraction(dst, src) > cfg.covered_threshold
    ):
        return Decision(event, DISCARDED, 7, REASON_COVERAGE_CONTAINMENT)

    follower = events[index + 1] if index + 1 < len(events) else None
    if (
        follower is not None
        and follower.cell_id == source.cell_id
        and (follower.timestamp - event.timestamp).total_seconds() < cfg.time_threshold_s
    ):
        return Decision(event, DISCARDED, 8, REASON_ABA_PING_PONG)
    return Decision(event, ACCEPTED, 8, REASON_ABA_PASS)


def filter_trajectory(
    trajectory: Trajectory,
    plan: CoveragePlan,
    cfg: FilterConfig = FilterConfig(),
) -> FilterReport:
    """Run the pipeline over a trajectory and report every decision.

    The filtered trajectory is exactly the accepted events in input order;
    every input event receives exactly one decision.
    """
    decisions: list[Decision] = []
    kept: list[LocationEvent] = []
    source: LocationEvent | None = None

    events = trajectory.events
    for index, event in enumerate(events):
        if source is None:
            if event.cell_id in plan:
                decision = Decision(event, ACCEPTED, None, REASON_FIRST_EVENT)
            else:
                decision = Decision(event, DISCARDED, None, REASON_NOT_IN_PLAN)
        else:
            decision = _judge(events, index, source, plan, cfg)
        decisions.append(decision)
        if decision.verdict == ACCEPTED:
            source = event
            kept.append(event)

    return FilterReport(
        decisions=tuple(decisions),
        filtered=Trajectory(tuple(kept)),
        tallies=_tally(decisions),
    )
