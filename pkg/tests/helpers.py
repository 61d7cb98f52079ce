"""Shared construction helpers for the test suite."""

from __future__ import annotations

import math
from datetime import datetime, timedelta, timezone

from cellclean.geo import EARTH_RADIUS_M, Circle, GeoPoint
from cellclean.model import Cell, CoveragePlan, LocationEvent, Trajectory

BASE = datetime(2024, 1, 1, tzinfo=timezone.utc)


def at(seconds: float) -> datetime:
    return BASE + timedelta(seconds=seconds)


def ev(seconds: float, cell_id: str) -> LocationEvent:
    return LocationEvent(at(seconds), cell_id)


def traj(*events: LocationEvent) -> Trajectory:
    return Trajectory(tuple(events))


def equator_point(x_m: float, y_m: float = 0.0) -> GeoPoint:
    """Point at planar meter offsets from (0, 0); exact in x along the equator."""
    return GeoPoint(math.degrees(y_m / EARTH_RADIUS_M), math.degrees(x_m / EARTH_RADIUS_M))


def cell(cell_id: str, x_m: float, radius: float, y_m: float = 0.0) -> Cell:
    return Cell(cell_id, Circle(equator_point(x_m, y_m), radius))


def plan_of(*cells: Cell) -> CoveragePlan:
    return CoveragePlan(cells)
