"""cellclean: remove ping-pong handover and hop artifacts from cell-event trajectories."""

__version__ = "0.1.0"

from .evaluation import (
    Association,
    EvaluationReport,
    GroundTruth,
    GroundTruthConfig,
    associate,
    build_ground_truth,
    distance_profile,
    evaluate,
)
from .filtering import Decision, FilterConfig, FilterReport, filter_trajectory
from .geo import (
    Circle,
    GeoPoint,
    circle_intersection_area,
    coverage_fraction,
    great_circle_distance,
    iou,
    union_area,
)
from .model import (
    Cell,
    CoveragePlan,
    CsvError,
    GpsFix,
    LocationEvent,
    Trajectory,
    load_coverage_plan,
    load_events,
    load_gps,
)
from .synth import GenerationError, Scenario, ScenarioConfig, generate

__all__ = [
    "__version__",
    "Association",
    "Cell",
    "Circle",
    "CoveragePlan",
    "CsvError",
    "Decision",
    "EvaluationReport",
    "FilterConfig",
    "FilterReport",
    "GenerationError",
    "GeoPoint",
    "GpsFix",
    "GroundTruth",
    "GroundTruthConfig",
    "LocationEvent",
    "Scenario",
    "ScenarioConfig",
    "Trajectory",
    "associate",
    "build_ground_truth",
    "circle_intersection_area",
    "coverage_fraction",
    "distance_profile",
    "evaluate",
    "filter_trajectory",
    "generate",
    "great_circle_distance",
    "iou",
    "load_coverage_plan",
    "load_events",
    "load_gps",
    "union_area",
]
