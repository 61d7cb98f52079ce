"""GeoJSON export: GPS fixes as points, event cells as circle polygons.

One feature collection per run. Every unique cell referenced by the original
events and present in the coverage plan becomes a 64-segment polygonized
circle carrying ``cell_id`` and ``status``: ``kept`` if the cell survives in
the filtered trajectory, ``removed`` otherwise. Coordinates follow RFC 7946
(lon, lat order, closed counterclockwise rings).
"""

from __future__ import annotations

import math
from typing import Iterable

from .geo import EARTH_RADIUS_M, Circle
from .model import CoveragePlan, GpsFix, Trajectory, format_timestamp

CIRCLE_SEGMENTS = 64


def circle_polygon(circle: Circle) -> list[list[float]]:
    """Closed counterclockwise ring of CIRCLE_SEGMENTS + 1 lon/lat positions."""
    lat0 = circle.center.lat
    lon0 = circle.center.lon
    cos_lat = math.cos(math.radians(lat0))
    ring: list[list[float]] = []
    for k in range(CIRCLE_SEGMENTS):
        angle = 2.0 * math.pi * k / CIRCLE_SEGMENTS
        east = circle.radius * math.cos(angle)
        north = circle.radius * math.sin(angle)
        lat = lat0 + math.degrees(north / EARTH_RADIUS_M)
        lon = lon0 + math.degrees(east / (EARTH_RADIUS_M * cos_lat))
        ring.append([lon, lat])
    ring.append(list(ring[0]))
    return ring


def feature_collection(
    plan: CoveragePlan,
    events: Trajectory,
    fixes: Iterable[GpsFix],
    filtered: Trajectory,
) -> dict:
    """Assemble the run's feature collection."""
    features: list[dict] = []
    for fix in fixes:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [fix.position.lon, fix.position.lat],
                },
                "properties": {"timestamp": format_timestamp(fix.timestamp)},
            }
        )

    kept_cells = filtered.cell_ids()
    for cell_id in sorted(events.cell_ids()):
        if cell_id not in plan:
            continue
        cell = plan.get(cell_id)
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [circle_polygon(cell.coverage)],
                },
                "properties": {
                    "cell_id": cell_id,
                    "status": "kept" if cell_id in kept_cells else "removed",
                },
            }
        )

    return {"type": "FeatureCollection", "features": features}
