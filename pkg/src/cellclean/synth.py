"""Synthetic scenario generator with known-truth labels.

An agent walks a waypoint polyline at constant speed. A staggered double row
of cells is laid along the path so that every position is covered by at
least two cells; GPS fixes and clean location events are sampled on fixed
intervals, the events bound to the nearest covering cell. Two noise types
are injected on seeded draws:

* ping-pong: a clean event A is expanded to an A,B,A triple, B being an
  overlapping neighbor whose coverage both differs enough from A's (low IoU,
  no near-containment) and is not the previous event's cell, so the bounce
  is attributable to the A,B,A rule alone;
* hop: the event's cell is replaced by a plan cell at least
  ``hop_min_distance_m`` from the agent. A hop is never injected directly
  after another hop (two hops back to back would push the following
  comparison past the time-gap rule and defeat recovery accounting), and
  the first event is always left clean.

Everything is driven by one seeded generator, so equal configs produce
byte-identical scenarios.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .filtering import FilterConfig
from .geo import EARTH_RADIUS_M, Circle, GeoPoint, coverage_fraction, great_circle_distance, iou
from .model import Cell, CoveragePlan, GpsFix, LocationEvent, Trajectory, format_timestamp

LABEL_CLEAN = "clean"
LABEL_PINGPONG = "pingpong"
LABEL_HOP = "hop"
LABELS = (LABEL_CLEAN, LABEL_PINGPONG, LABEL_HOP)

LABELS_HEADER = ("timestamp_iso8601", "cell_id", "label")

SCENARIO_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)

# Offsets of the two injected triple events, as fractions of the event
# interval. Chosen so that both the detour and the following clean event
# keep implied speeds plausible for cells up to one spacing apart.
PINGPONG_DETOUR_FRACTION = 0.4
PINGPONG_RETURN_FRACTION = 0.5


class GenerationError(ValueError):
    """Raised when a scenario cannot satisfy its own invariants."""


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    waypoints: tuple[GeoPoint, ...]
    speed_ms: float = 10.0
    gps_interval_s: float = 60.0
    event_interval_s: float = 300.0
    cell_spacing_m: float = 3000.0
    cell_radius_range: tuple[float, float] = (2000.0, 2400.0)
    pingpong_rate: float = 0.0
    hop_rate: float = 0.0
    hop_min_distance_m: float = 20_000.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) < 2:
            raise ValueError("need at least two waypoints")
        for name in ("speed_ms", "gps_interval_s", "event_interval_s", "cell_spacing_m", "hop_min_distance_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive, got {value}")
        lo, hi = self.cell_radius_range
        if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo <= hi):
            raise ValueError(f"invalid cell_radius_range {self.cell_radius_range}")
        if self.pingpong_rate < 0.0 or self.hop_rate < 0.0:
            raise ValueError("noise rates must be non-negative")
        if self.pingpong_rate + self.hop_rate >= 1.0:
            raise ValueError("noise rates must sum below 1")


@dataclass(frozen=True)
class Scenario:
    """A generated world: plan, GPS trace, events, and a label per event.

    ``positions`` holds the agent position at each event's timestamp, so the
    label invariants can be checked by direct scan.
    """

    config: ScenarioConfig
    plan: CoveragePlan
    events: Trajectory
    gps: tuple[GpsFix, ...]
    labels: tuple[str, ...]
    positions: tuple[GeoPoint, ...]


class _Frame:
    """Local equirectangular meter frame anchored at a reference point."""

    def __init__(self, origin: GeoPoint) -> None:
        self.origin = origin
        self._cos_lat = math.cos(math.radians(origin.lat))

    def to_xy(self, p: GeoPoint) -> tuple[float, float]:
        x = EARTH_RADIUS_M * math.radians(p.lon - self.origin.lon) * self._cos_lat
        y = EARTH_RADIUS_M * math.radians(p.lat - self.origin.lat)
        return x, y

    def to_point(self, x: float, y: float) -> GeoPoint:
        lat = self.origin.lat + math.degrees(y / EARTH_RADIUS_M)
        lon = self.origin.lon + math.degrees(x / (EARTH_RADIUS_M * self._cos_lat))
        return GeoPoint(lat, lon)


class _Path:
    """Arc-length parameterized polyline in the local frame."""

    def __init__(self, frame: _Frame, waypoints: tuple[GeoPoint, ...]) -> None:
        self.vertices = [frame.to_xy(w) for w in waypoints]
        self.cumulative = [0.0]
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            step = math.hypot(x1 - x0, y1 - y0)
            if step == 0.0:
                raise ValueError("consecutive waypoints must be distinct")
            self.cumulative.append(self.cumulative[-1] + step)
        self.length = self.cumulative[-1]

    def at(self, s: float) -> tuple[float, float]:
        s = min(max(s, 0.0), self.length)
        seg = min(bisect_right(self.cumulative, s), len(self.vertices) - 1)
        x0, y0 = self.vertices[seg - 1]
        x1, y1 = self.vertices[seg]
        span = self.cumulative[seg] - self.cumulative[seg - 1]
        t = (s - self.cumulative[seg - 1]) / span
        return x0 + t * (x1 - x0), y0 + t * (y1 - y0)

    def tangent(self, s: float) -> tuple[float, float]:
        s = min(max(s, 0.0), self.length)
        seg = min(bisect_right(self.cumulative, s), len(self.vertices) - 1)
        x0, y0 = self.vertices[seg - 1]
        x1, y1 = self.vertices[seg]
        span = self.cumulative[seg] - self.cumulative[seg - 1]
        return (x1 - x0) / span, (y1 - y0) / span


def straight_east_path(start: GeoPoint, length_m: float) -> tuple[GeoPoint, GeoPoint]:
    """Two waypoints spanning ``length_m`` due east of ``start``."""
    frame = _Frame(start)
    return start, frame.to_point(length_m, 0.0)


def _build_plan(cfg: ScenarioConfig, frame: _Frame, path: _Path, rng: random.Random) -> tuple[CoveragePlan, list[tuple[float, float, float]]]:
    """Staggered double row of cells along the path.

    Returns the plan plus each cell's frame coordinates and radius, index
    aligned with the plan's cell order, for cheap geometric scans.
    """
    half_spacing = cfg.cell_spacing_m / 2.0
    side_offset = cfg.cell_spacing_m / 4.0
    lo, hi = cfg.cell_radius_range

    cells: list[Cell] = []
    frame_cells: list[tuple[float, float, float]] = []
    count = int(math.floor((path.length + half_spacing) / half_spacing)) + 1
    for j in range(count):
        s = j * half_spacing
        px, py = path.at(s)
        tx, ty = path.tangent(s)
        side = 1.0 if j % 2 == 0 else -1.0
        x = px - ty * side_offset * side
        y = py + tx * side_offset * side
        radius = rng.uniform(lo, hi)
        cells.append(Cell(f"C{j:05d}", Circle(frame.to_point(x, y), radius)))
        frame_cells.append((x, y, radius))
    return CoveragePlan(cells), frame_cells


def _nearest_covering(
    frame_cells: list[tuple[float, float, float]], x: float, y: float
) -> int | None:
    best: int | None = None
    best_dist = math.inf
    for idx, (cx, cy, radius) in enumerate(frame_cells):
        dist = math.hypot(x - cx, y - cy)
        if dist <= radius and dist < best_dist:
            best = idx
            best_dist = dist
    return best


def _pingpong_neighbors(
    plan: CoveragePlan,
    frame_cells: list[tuple[float, float, float]],
    anchor_index: int,
    excluded: set[str],
    thresholds: FilterConfig,
) -> list[int]:
    """Cells overlapping the anchor cell loosely enough to bounce through.

    The neighbor must overlap (IoU above zero) but stay below the similarity
    threshold, and neither circle may nearly contain the other, so an
    injected bounce survives the geometric rules and reaches the A,B,A one.
    """
    cells = plan.cells
    anchor = cells[anchor_index]
    ax, ay, ar = frame_cells[anchor_index]
    candidates: list[int] = []
    for idx, (cx, cy, radius) in enumerate(frame_cells):
        if idx == anchor_index or cells[idx].id in excluded:
            continue
        if math.hypot(cx - ax, cy - ay) >= ar + radius:
            continue
        overlap = iou(anchor.coverage, cells[idx].coverage)
        if not 0.0 < overlap < thresholds.similarity_threshold:
            continue
        if (
            coverage_fraction(anchor.coverage, cells[idx].coverage) > thresholds.covered_threshold
            or coverage_fraction(cells[idx].coverage, anchor.coverage) > thresholds.covered_threshold
        ):
            continue
        candidates.append(idx)
    return candidates


def generate(cfg: ScenarioConfig) -> Scenario:
    """Generate a deterministic scenario for the given config."""
    rng = random.Random(cfg.seed)
    frame = _Frame(cfg.waypoints[0])
    path = _Path(frame, cfg.waypoints)
    plan, frame_cells = _build_plan(cfg, frame, path, rng)
    cells = plan.cells
    thresholds = FilterConfig()

    duration = path.length / cfg.speed_ms

    fixes: list[GpsFix] = []
    t = 0.0
    while t <= duration:
        x, y = path.at(cfg.speed_ms * t)
        fixes.append(GpsFix(SCENARIO_EPOCH + timedelta(seconds=t), frame.to_point(x, y)))
        t += cfg.gps_interval_s

    base_count = int(duration // cfg.event_interval_s) + 1
    base_cells: list[int] = []
    base_xy: list[tuple[float, float]] = []
    for k in range(base_count):
        tk = k * cfg.event_interval_s
        x, y = path.at(cfg.speed_ms * tk)
        covering = _nearest_covering(frame_cells, x, y)
        if covering is None:
            point = frame.to_point(x, y)
            raise GenerationError(
                f"no cell covers the path at t={tk:.0f} s "
                f"({point.lat:.5f}, {point.lon:.5f}); raise the plan density"
            )
        base_cells.append(covering)
        base_xy.append((x, y))

    events: list[LocationEvent] = []
    labels: list[str] = []
    positions: list[GeoPoint] = []

    def emit(t_s: float, cell_index: int, label: str) -> None:
        x, y = path.at(cfg.speed_ms * t_s)
        events.append(
            LocationEvent(SCENARIO_EPOCH + timedelta(seconds=t_s), cells[cell_index].id)
        )
        labels.append(label)
        positions.append(frame.to_point(x, y))

    previous_kind = LABEL_CLEAN
    for k in range(base_count):
        tk = k * cfg.event_interval_s
        draw = rng.random()
        kind = LABEL_CLEAN
        if k > 0:
            if draw < cfg.pingpong_rate:
                kind = LABEL_PINGPONG
            elif draw < cfg.pingpong_rate + cfg.hop_rate and previous_kind != LABEL_HOP:
                kind = LABEL_HOP
        previous_kind = kind

        if kind == LABEL_HOP:
            x, y = base_xy[k]
            here = frame.to_point(x, y)
            far = [
                idx
                for idx, cell in enumerate(cells)
                if great_circle_distance(cell.coverage.center, here) >= cfg.hop_min_distance_m
            ]
            if not far:
                raise GenerationError(
                    f"no plan cell at least {cfg.hop_min_distance_m:.0f} m from the path "
                    f"at t={tk:.0f} s; lengthen the path or lower hop_min_distance_m"
                )
            emit(tk, rng.choice(far), LABEL_HOP)
            continue

        if kind == LABEL_PINGPONG:
            anchor_index = base_cells[k]
            # The bounce must not equal any cell the filter could hold as its
            # source when the triple arrives: the previous emitted event's
            # cell, and the last two base cells (a discarded predecessor
            # leaves the source one more step back).
            excluded = {cells[base_cells[k - 1]].id}
            if events:
                excluded.add(events[-1].cell_id)
            if k >= 2:
                excluded.add(cells[base_cells[k - 2]].id)
            neighbors = _pingpong_neighbors(plan, frame_cells, anchor_index, excluded, thresholds)
            if neighbors:
                bounce = rng.choice(neighbors)
                emit(tk, anchor_index, LABEL_CLEAN)
                emit(tk + PINGPONG_DETOUR_FRACTION * cfg.event_interval_s, bounce, LABEL_PINGPONG)
                emit(tk + PINGPONG_RETURN_FRACTION * cfg.event_interval_s, anchor_index, LABEL_CLEAN)
                continue
            # No eligible neighbor here (path tail); fall through to clean.

        emit(tk, base_cells[k], LABEL_CLEAN)

    return Scenario(
        config=cfg,
        plan=plan,
        events=Trajectory(tuple(events)),
        gps=tuple(fixes),
        labels=tuple(labels),
        positions=tuple(positions),
    )


def dump_labels(scenario: Scenario) -> str:
    """Render the per-event labels CSV (``timestamp_iso8601,cell_id,label``)."""
    lines = [",".join(LABELS_HEADER)]
    for event, label in zip(scenario.events, scenario.labels):
        lines.append(f"{format_timestamp(event.timestamp)},{event.cell_id},{label}")
    return "\n".join(lines) + "\n"
