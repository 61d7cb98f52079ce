"""Great-circle distance and circular coverage-area geometry.

Cells are modeled as circles on a sphere of radius 6 371 000 m. Point to
point distance is haversine. Area computations project both centers onto a
local equirectangular plane about their midpoint, which is accurate at the
national scales this library targets; they refuse center pairs more than
5 degrees of latitude apart, where the flat-plane approximation degrades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0

MAX_PROJECTION_LAT_SPAN_DEG = 5.0


@dataclass(frozen=True)
class GeoPoint:
    """Coordinate in decimal degrees, latitude first."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"coordinates must be finite, got ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class Circle:
    """Circular coverage area: center plus radius in meters."""

    center: GeoPoint
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


def great_circle_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine distance between two points, in meters.

    Symmetric in its arguments and exactly zero for equal points. Longitudes
    -180 and 180 alias the same meridian, so two such points also map to zero.
    """
    phi_a = math.radians(a.lat)
    phi_b = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi_a) * math.cos(phi_b) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def _planar_center_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Center distance on the local equirectangular plane about the midpoint."""
    mid_lat = math.radians((a.lat + b.lat) / 2.0)
    dlon = (b.lon - a.lon + 180.0) % 360.0 - 180.0
    dx = EARTH_RADIUS_M * math.radians(dlon) * math.cos(mid_lat)
    dy = EARTH_RADIUS_M * math.radians(b.lat - a.lat)
    return math.hypot(dx, dy)


def _check_projection(a: Circle, b: Circle) -> None:
    span = abs(a.center.lat - b.center.lat)
    if span > MAX_PROJECTION_LAT_SPAN_DEG:
        raise ValueError(
            f"circle centers are {span:.3f} degrees apart in latitude; area "
            f"operations support at most {MAX_PROJECTION_LAT_SPAN_DEG:.0f}"
        )


def _lens_area(d: float, r_small: float, r_big: float) -> float:
    """Overlap area of two planar circles with center distance d, radii sorted."""
    if d >= r_small + r_big:
        return 0.0
    cap = math.pi * r_small * r_small
    if d <= r_big - r_small:
        return cap
    cos_small = (d * d + r_small * r_small - r_big * r_big) / (2.0 * d * r_small)
    cos_big = (d * d + r_big * r_big - r_small * r_small) / (2.0 * d * r_big)
    seg_small = r_small * r_small * math.acos(max(-1.0, min(1.0, cos_small)))
    seg_big = r_big * r_big * math.acos(max(-1.0, min(1.0, cos_big)))
    kite = 0.5 * math.sqrt(
        max(
            0.0,
            (r_small + r_big - d)
            * (d + r_small - r_big)
            * (d - r_small + r_big)
            * (d + r_small + r_big),
        )
    )
    return min(max(seg_small + seg_big - kite, 0.0), cap)


def circle_intersection_area(a: Circle, b: Circle) -> float:
    """Area of overlap between two coverage circles, in square meters.

    Zero when the circles are disjoint, the full smaller-circle area when one
    contains the other, and the two-segment lens area in between. Exactly
    symmetric in its arguments.
    """
    _check_projection(a, b)
    d = _planar_center_distance(a.center, b.center)
    r_small, r_big = sorted((a.radius, b.radius))
    return _lens_area(d, r_small, r_big)


def union_area(a: Circle, b: Circle) -> float:
    """Area covered by at least one of the two circles, in square meters."""
    return a.area + b.area - circle_intersection_area(a, b)


def iou(a: Circle, b: Circle) -> float:
    """Intersection area over union area, in [0, 1].

    1.0 exactly for identical circles, 0.0 for disjoint ones.
    """
    inter = circle_intersection_area(a, b)
    return inter / (a.area + b.area - inter)


def coverage_fraction(covered: Circle, by: Circle) -> float:
    """Fraction of `covered`'s own area that `by` overlaps, in [0, 1]."""
    return circle_intersection_area(covered, by) / covered.area
