"""Pydantic request/response models for the HTTP API.

These models define the wire contract; the CLI builds the same objects and
either calls the handlers in process or posts them to a running service.
Conversion helpers bridge to the core domain types, whose constructors do
the cross-field validation (duplicate ids, ordering, rate sums).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import AwareDatetime, BaseModel, Field

from .. import evaluation, filtering, model, synth
from ..geo import Circle, GeoPoint

CELL_ID_REGEX = r"^[A-Za-z0-9_-]+$"


class PointModel(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class CellModel(BaseModel):
    id: str = Field(pattern=CELL_ID_REGEX)
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)
    radius_m: float = Field(gt=0)


class EventModel(BaseModel):
    timestamp: AwareDatetime
    cell_id: str = Field(pattern=CELL_ID_REGEX)


class FixModel(BaseModel):
    timestamp: AwareDatetime
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class FilterConfigModel(BaseModel):
    time_threshold_s: float = Field(default=600.0, gt=0)
    distance_threshold: float = Field(default=0.20, gt=0, le=1)
    speed_threshold_ms: float = Field(default=25.0, gt=0)
    similarity_threshold: float = Field(default=0.50, gt=0, le=1)
    covered_threshold: float = Field(default=0.80, gt=0, le=1)


class FilterRequest(BaseModel):
    plan: list[CellModel]
    events: list[EventModel]
    config: FilterConfigModel = FilterConfigModel()


class DecisionModel(BaseModel):
    timestamp: AwareDatetime
    cell_id: str
    verdict: Literal["accepted", "discarded"]
    anchor: Optional[int] = Field(default=None, ge=1, le=8)
    reason: str


class TallyRowModel(BaseModel):
    anchor: str
    accepted: int
    discarded: int


class StatsModel(BaseModel):
    location_updates: int
    unique_cells: int
    highest_cell_frequency: int


class FilterResponse(BaseModel):
    decisions: list[DecisionModel]
    tallies: list[TallyRowModel]
    filtered_events: list[EventModel]
    original_stats: StatsModel
    filtered_stats: StatsModel


class GroundTruthConfigModel(BaseModel):
    radius_factor: float = Field(default=1.0, ge=1)
    max_association_gap_s: float = Field(default=300.0, gt=0)


class EvaluateRequest(BaseModel):
    plan: list[CellModel]
    events: list[EventModel]
    filtered_events: list[EventModel]
    gps: list[FixModel]
    config: GroundTruthConfigModel = GroundTruthConfigModel()


class ProfilePointModel(BaseModel):
    timestamp: AwareDatetime
    cell_id: str
    centroid_distance_m: Optional[float] = None
    radius_m: Optional[float] = None


class EvaluateResponse(BaseModel):
    radius_factor: float
    max_association_gap_s: float
    truth_event_count: int
    filtered_event_count: int
    truth_cells: list[str]
    filter_cells: list[str]
    matching_cells: list[str]
    not_in_truth_cells: list[str]
    not_in_filter_cells: list[str]
    precision: float
    recall: float
    precision_defined: bool
    recall_defined: bool
    profile: list[ProfilePointModel]


class SynthRequest(BaseModel):
    seed: int
    waypoints: list[PointModel] = Field(min_length=2)
    speed_ms: float = Field(default=10.0, gt=0)
    gps_interval_s: float = Field(default=60.0, gt=0)
    event_interval_s: float = Field(default=300.0, gt=0)
    cell_spacing_m: float = Field(default=3000.0, gt=0)
    cell_radius_min_m: float = Field(default=2000.0, gt=0)
    cell_radius_max_m: float = Field(default=2400.0, gt=0)
    pingpong_rate: float = Field(default=0.0, ge=0, lt=1)
    hop_rate: float = Field(default=0.0, ge=0, lt=1)
    hop_min_distance_m: float = Field(default=20_000.0, gt=0)


class LabeledEventModel(BaseModel):
    timestamp: AwareDatetime
    cell_id: str
    label: Literal["clean", "pingpong", "hop"]


class SynthResponse(BaseModel):
    plan: list[CellModel]
    events: list[EventModel]
    gps: list[FixModel]
    labels: list[LabeledEventModel]


class ExportGeojsonRequest(BaseModel):
    plan: list[CellModel]
    events: list[EventModel]
    gps: list[FixModel]
    filtered_events: list[EventModel]


class HealthResponse(BaseModel):
    status: str
    version: str


def to_plan(cells: list[CellModel]) -> model.CoveragePlan:
    return model.CoveragePlan(
        model.Cell(c.id, Circle(GeoPoint(c.lat, c.lon), c.radius_m)) for c in cells
    )


def to_trajectory(events: list[EventModel]) -> model.Trajectory:
    parsed = [model.LocationEvent(e.timestamp, e.cell_id) for e in events]
    parsed.sort(key=lambda e: e.timestamp)
    return model.Trajectory(tuple(parsed))


def to_fixes(fixes: list[FixModel]) -> tuple[model.GpsFix, ...]:
    parsed = [model.GpsFix(f.timestamp, GeoPoint(f.lat, f.lon)) for f in fixes]
    parsed.sort(key=lambda f: f.timestamp)
    return tuple(parsed)


def from_plan(plan: model.CoveragePlan) -> list[CellModel]:
    return [
        CellModel(
            id=cell.id,
            lat=cell.coverage.center.lat,
            lon=cell.coverage.center.lon,
            radius_m=cell.coverage.radius,
        )
        for cell in plan
    ]


def from_trajectory(trajectory: model.Trajectory) -> list[EventModel]:
    return [EventModel(timestamp=e.timestamp, cell_id=e.cell_id) for e in trajectory]


def from_fixes(fixes: tuple[model.GpsFix, ...]) -> list[FixModel]:
    return [
        FixModel(timestamp=f.timestamp, lat=f.position.lat, lon=f.position.lon) for f in fixes
    ]


def to_filter_config(config: FilterConfigModel) -> filtering.FilterConfig:
    return filtering.FilterConfig(
        time_threshold_s=config.time_threshold_s,
        distance_threshold=config.distance_threshold,
        speed_threshold_ms=config.speed_threshold_ms,
        similarity_threshold=config.similarity_threshold,
        covered_threshold=config.covered_threshold,
    )


def to_ground_truth_config(config: GroundTruthConfigModel) -> evaluation.GroundTruthConfig:
    return evaluation.GroundTruthConfig(
        radius_factor=config.radius_factor,
        max_association_gap_s=config.max_association_gap_s,
    )


def to_scenario_config(req: SynthRequest) -> synth.ScenarioConfig:
    return synth.ScenarioConfig(
        seed=req.seed,
        waypoints=tuple(GeoPoint(w.lat, w.lon) for w in req.waypoints),
        speed_ms=req.speed_ms,
        gps_interval_s=req.gps_interval_s,
        event_interval_s=req.event_interval_s,
        cell_spacing_m=req.cell_spacing_m,
        cell_radius_range=(req.cell_radius_min_m, req.cell_radius_max_m),
        pingpong_rate=req.pingpong_rate,
        hop_rate=req.hop_rate,
        hop_min_distance_m=req.hop_min_distance_m,
    )
