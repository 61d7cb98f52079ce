"""Domain types and CSV ingestion for coverage plans, event streams, and GPS traces.

All three formats are comma separated, UTF-8, with one fixed header line and
no quoting (identifiers are restricted to ``[A-Za-z0-9_-]+``):

* coverage plan:  ``cell_id,lat,lon,radius_m``
* location events: ``timestamp_iso8601,cell_id``
* GPS fixes:       ``timestamp_iso8601,lat,lon``

Timestamps must be ISO-8601 with an explicit offset or ``Z``; naive
timestamps are rejected because mixed-timezone logs silently corrupt the
time-based filtering rules. Every ingestion failure names its 1-based line.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from .geo import Circle, GeoPoint

CELL_ID_PATTERN = re.compile(r"[A-Za-z0-9_-]+\Z")

PLAN_HEADER = ("cell_id", "lat", "lon", "radius_m")
EVENTS_HEADER = ("timestamp_iso8601", "cell_id")
GPS_HEADER = ("timestamp_iso8601", "lat", "lon")

Source = Union[str, Path, IO[str], IO[bytes]]


class CsvError(ValueError):
    """Ingestion failure pinned to a 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Cell:
    """One coverage-plan entry: an identifier plus its coverage circle."""

    id: str
    coverage: Circle

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("cell id must be non-empty")


class CoveragePlan:
    """Collection of cells indexed by identifier; identifiers are unique."""

    def __init__(self, cells: Iterable[Cell]) -> None:
        self._cells: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in self._cells:
                raise ValueError(f"duplicate cell id '{cell.id}'")
            self._cells[cell.id] = cell

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self._cells.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoveragePlan):
            return NotImplemented
        return self._cells == other._cells

    def __repr__(self) -> str:
        return f"CoveragePlan({len(self._cells)} cells)"

    def get(self, cell_id: str) -> Cell:
        try:
            return self._cells[cell_id]
        except KeyError:
            raise KeyError(f"cell '{cell_id}' not in coverage plan") from None

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(self._cells.values())


@dataclass(frozen=True)
class LocationEvent:
    """A (timestamp, serving cell) observation; the unit the filter judges."""

    timestamp: datetime
    cell_id: str

    def __post_init__(self) -> None:
        if self.timestamp.tzinfo is None:
            raise ValueError("event timestamp must be timezone-aware")
        if not self.cell_id:
            raise ValueError("event cell id must be non-empty")


@dataclass(frozen=True)
class GpsFix:
    """A timestamped GPS position, used as ground truth by the evaluator."""

    timestamp: datetime
    position: GeoPoint

    def __post_init__(self) -> None:
        if self.timestamp.tzinfo is None:
            raise ValueError("fix timestamp must be timezone-aware")


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered sequence of location events (ties keep input order)."""

    events: tuple[LocationEvent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.timestamp < prev.timestamp:
                raise ValueError("trajectory timestamps must be non-decreasing")

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[LocationEvent]:
        return iter(self.events)

    def __getitem__(self, index: int) -> LocationEvent:
        return self.events[index]

    def cell_ids(self) -> frozenset[str]:
        return frozenset(e.cell_id for e in self.events)


def parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp with mandatory offset, normalized to UTC."""
    text = raw[:-1] + "+00:00" if raw.endswith("Z") else raw
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError:
        raise ValueError(f"unparsable timestamp '{raw}'") from None
    if stamp.tzinfo is None:
        raise ValueError(f"timestamp '{raw}' lacks a UTC offset (naive timestamps are rejected)")
    return stamp.astimezone(timezone.utc)


def format_timestamp(stamp: datetime) -> str:
    """Canonical form: UTC, ``Z`` suffix, fractional seconds only when present."""
    return stamp.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _rows(source: Source, header: tuple[str, ...]) -> list[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(_read_text(source)))
    rows = [(line, row) for line, row in enumerate(reader, start=1)]
    if not rows or tuple(rows[0][1]) != header:
        raise CsvError(1, f"expected header '{','.join(header)}'")
    return rows[1:]


def _parse_float(line: int, name: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise CsvError(line, f"unparsable {name} '{raw}'") from None
    if not math.isfinite(value):
        raise CsvError(line, f"{name} must be finite, got '{raw}'")
    return value


def _parse_cell_id(line: int, raw: str) -> str:
    if not CELL_ID_PATTERN.fullmatch(raw):
        raise CsvError(line, f"cell id '{raw}' must match [A-Za-z0-9_-]+")
    return raw


def _parse_row_timestamp(line: int, raw: str) -> datetime:
    try:
        return parse_timestamp(raw)
    except ValueError as exc:
        raise CsvError(line, str(exc)) from None


def load_coverage_plan(source: Source) -> CoveragePlan:
    """Read ``cell_id,lat,lon,radius_m`` records into a validated plan."""
    cells: dict[str, Cell] = {}
    for line, row in _rows(source, PLAN_HEADER):
        if len(row) != 4:
            raise CsvError(line, f"expected 4 fields, got {len(row)}")
        cell_id = _parse_cell_id(line, row[0])
        if cell_id in cells:
            raise CsvError(line, f"duplicate cell id '{cell_id}'")
        lat = _parse_float(line, "latitude", row[1])
        lon = _parse_float(line, "longitude", row[2])
        radius = _parse_float(line, "radius", row[3])
        try:
            coverage = Circle(GeoPoint(lat, lon), radius)
        except ValueError as exc:
            raise CsvError(line, str(exc)) from None
        cells[cell_id] = Cell(cell_id, coverage)
    return CoveragePlan(cells.values())


def load_events(source: Source) -> Trajectory:
    """Read ``timestamp_iso8601,cell_id`` records, sorted stably by time."""
    events: list[LocationEvent] = []
    for line, row in _rows(source, EVENTS_HEADER):
        if len(row) != 2:
            raise CsvError(line, f"expected 2 fields, got {len(row)}")
        stamp = _parse_row_timestamp(line, row[0])
        events.append(LocationEvent(stamp, _parse_cell_id(line, row[1])))
    events.sort(key=lambda e: e.timestamp)
    return Trajectory(tuple(events))


def load_gps(source: Source) -> tuple[GpsFix, ...]:
    """Read ``timestamp_iso8601,lat,lon`` records, sorted stably by time."""
    fixes: list[GpsFix] = []
    for line, row in _rows(source, GPS_HEADER):
        if len(row) != 3:
            raise CsvError(line, f"expected 3 fields, got {len(row)}")
        stamp = _parse_row_timestamp(line, row[0])
        lat = _parse_float(line, "latitude", row[1])
        lon = _parse_float(line, "longitude", row[2])
        try:
            position = GeoPoint(lat, lon)
        except ValueError as exc:
            raise CsvError(line, str(exc)) from None
        fixes.append(GpsFix(stamp, position))
    fixes.sort(key=lambda f: f.timestamp)
    return tuple(fixes)


def dump_coverage_plan(plan: CoveragePlan) -> str:
    lines = [",".join(PLAN_HEADER)]
    for cell in plan:
        center = cell.coverage.center
        lines.append(f"{cell.id},{center.lat!r},{center.lon!r},{cell.coverage.radius!r}")
    return "\n".join(lines) + "\n"


def dump_events(trajectory: Trajectory) -> str:
    lines = [",".join(EVENTS_HEADER)]
    for event in trajectory:
        lines.append(f"{format_timestamp(event.timestamp)},{event.cell_id}")
    return "\n".join(lines) + "\n"


def dump_gps(fixes: Iterable[GpsFix]) -> str:
    lines = [",".join(GPS_HEADER)]
    for fix in fixes:
        lines.append(f"{format_timestamp(fix.timestamp)},{fix.position.lat!r},{fix.position.lon!r}")
    return "\n".join(lines) + "\n"
