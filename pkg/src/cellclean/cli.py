"""Command-line front end.

Each subcommand reads CSV inputs, builds the same request models the HTTP
API accepts, obtains a response (in process by default, or from a running
service via ``--server``), and writes the output files plus a run manifest.

Exit codes: 0 all outputs written, 1 input or transport error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Callable, TypeVar

import click
import httpx
from pydantic import BaseModel

from . import __version__, model, synth
from .geo import GeoPoint
from .reports import (
    EvalSummary,
    TrajectoryStats,
    eval_records,
    filter_records,
    records_to_text,
    render_eval_text,
    render_filter_text,
)
from .service import handlers, schemas

R = TypeVar("R", bound=BaseModel)

PROFILE_HEADER = ("timestamp_iso8601", "cell_id", "centroid_distance_m", "radius_m")


class InputError(Exception):
    """Anything that should terminate the command with exit code 1."""


def _fail(message: str) -> "InputError":
    return InputError(message)


def _post(server: str, path: str, request: BaseModel) -> dict:
    url = server.rstrip("/") + path
    try:
        response = httpx.post(url, json=request.model_dump(mode="json"), timeout=120.0)
    except httpx.HTTPError as exc:
        raise _fail(f"request to {url} failed: {exc}") from exc
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise _fail(f"{url} returned {response.status_code}: {detail}")
    return response.json()


def _dispatch(
    server: str | None,
    path: str,
    request: BaseModel,
    local: Callable[..., R],
    response_type: type[R],
) -> R:
    if server is None:
        try:
            return local(request)
        except ValueError as exc:
            raise _fail(str(exc)) from exc
    return response_type.model_validate(_post(server, path, request))


def _load_plan_models(path: str) -> list[schemas.CellModel]:
    return schemas.from_plan(model.load_coverage_plan(path))


def _load_event_models(path: str) -> list[schemas.EventModel]:
    return schemas.from_trajectory(model.load_events(path))


def _load_fix_models(path: str) -> list[schemas.FixModel]:
    return schemas.from_fixes(model.load_gps(path))


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def _write_manifest(
    out_dir: Path,
    command: str,
    inputs: dict[str, str],
    config: dict,
    outputs: list[Path],
) -> Path:
    manifest = {
        "command": command,
        "tool_version": __version__,
        "inputs": inputs,
        "config": config,
        "outputs": [p.name for p in outputs],
    }
    path = out_dir / "run_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _tallies_mapping(rows: list[schemas.TallyRowModel]) -> dict[str, tuple[int, int]]:
    return {row.anchor: (row.accepted, row.discarded) for row in rows}


def _stats(stats_model: schemas.StatsModel) -> TrajectoryStats:
    return TrajectoryStats(**stats_model.model_dump())


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
def cli() -> None:
    """Clean ping-pong and hop artifacts out of cell-event trajectories."""


def _guard(body: Callable[[], None]) -> None:
    try:
        body()
    except (InputError, model.CsvError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@cli.command("filter")
@click.option("--plan", "plan_path", required=True, type=click.Path(), help="Coverage plan CSV.")
@click.option("--events", "events_path", required=True, type=click.Path(), help="Location events CSV.")
@click.option("--out-dir", default=".", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--time-threshold-s", default=600.0, show_default=True)
@click.option("--distance-threshold", default=0.20, show_default=True)
@click.option("--speed-threshold-kmh", default=90.0, show_default=True)
@click.option("--similarity-threshold", default=0.50, show_default=True)
@click.option("--covered-threshold", default=0.80, show_default=True)
@click.option("--server", default=None, help="Base URL of a running service; default runs in process.")
def cmd_filter(
    plan_path: str,
    events_path: str,
    out_dir: str,
    time_threshold_s: float,
    distance_threshold: float,
    speed_threshold_kmh: float,
    similarity_threshold: float,
    covered_threshold: float,
    server: str | None,
) -> None:
    """Filter a trajectory and write the surviving events plus reports."""

    def body() -> None:
        request = schemas.FilterRequest(
            plan=_load_plan_models(plan_path),
            events=_load_event_models(events_path),
            config=schemas.FilterConfigModel(
                time_threshold_s=time_threshold_s,
                distance_threshold=distance_threshold,
                speed_threshold_ms=speed_threshold_kmh / 3.6,
                similarity_threshold=similarity_threshold,
                covered_threshold=covered_threshold,
            ),
        )
        response = _dispatch(server, "/filter", request, handlers.handle_filter, schemas.FilterResponse)

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tallies = _tallies_mapping(response.tallies)
        original, filtered = _stats(response.original_stats), _stats(response.filtered_stats)
        outputs = [
            _write(out / "filtered_events.csv", model.dump_events(schemas.to_trajectory(response.filtered_events))),
            _write(out / "filter_report.txt", render_filter_text(original, filtered, tallies)),
            _write(out / "filter_report.records", records_to_text(filter_records(original, filtered, tallies))),
        ]
        _write_manifest(
            out,
            "filter",
            {"plan": plan_path, "events": events_path},
            request.config.model_dump(),
            outputs,
        )
        click.echo(f"filtered {original.location_updates} events down to {filtered.location_updates}")

    _guard(body)


@cli.command("evaluate")
@click.option("--plan", "plan_path", required=True, type=click.Path())
@click.option("--events", "events_path", required=True, type=click.Path(), help="Original (unfiltered) events CSV.")
@click.option("--filtered", "filtered_path", required=True, type=click.Path(), help="Filtered events CSV.")
@click.option("--gps", "gps_path", required=True, type=click.Path(), help="GPS ground-truth CSV.")
@click.option("--radius-factor", default=1.0, show_default=True, help="Radius slack factor for truth membership.")
@click.option("--max-association-gap-s", default=300.0, show_default=True)
@click.option("--out-dir", default=".", type=click.Path(file_okay=False))
@click.option("--server", default=None)
def cmd_evaluate(
    plan_path: str,
    events_path: str,
    filtered_path: str,
    gps_path: str,
    radius_factor: float,
    max_association_gap_s: float,
    out_dir: str,
    server: str | None,
) -> None:
    """Score a filtered trajectory against GPS ground truth."""

    def body() -> None:
        request = schemas.EvaluateRequest(
            plan=_load_plan_models(plan_path),
            events=_load_event_models(events_path),
            filtered_events=_load_event_models(filtered_path),
            gps=_load_fix_models(gps_path),
            config=schemas.GroundTruthConfigModel(
                radius_factor=radius_factor,
                max_association_gap_s=max_association_gap_s,
            ),
        )
        response = _dispatch(server, "/evaluate", request, handlers.handle_evaluate, schemas.EvaluateResponse)

        summary = EvalSummary(
            radius_factor=response.radius_factor,
            max_association_gap_s=response.max_association_gap_s,
            truth_event_count=response.truth_event_count,
            filtered_event_count=response.filtered_event_count,
            truth_cells=len(response.truth_cells),
            filter_cells=len(response.filter_cells),
            matching_cells=len(response.matching_cells),
            not_in_truth_cells=len(response.not_in_truth_cells),
            not_in_filter_cells=len(response.not_in_filter_cells),
            precision=response.precision,
            recall=response.recall,
            precision_defined=response.precision_defined,
            recall_defined=response.recall_defined,
        )
        profile_lines = [",".join(PROFILE_HEADER)]
        for point in response.profile:
            distance = "" if point.centroid_distance_m is None else repr(point.centroid_distance_m)
            radius = "" if point.radius_m is None else repr(point.radius_m)
            profile_lines.append(
                f"{model.format_timestamp(point.timestamp)},{point.cell_id},{distance},{radius}"
            )

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        outputs = [
            _write(out / "evaluation_report.txt", render_eval_text(summary)),
            _write(out / "evaluation_report.records", records_to_text(eval_records(summary))),
            _write(out / "distance_profile.csv", "\n".join(profile_lines) + "\n"),
        ]
        _write_manifest(
            out,
            "evaluate",
            {"plan": plan_path, "events": events_path, "filtered": filtered_path, "gps": gps_path},
            request.config.model_dump(),
            outputs,
        )
        click.echo(f"precision {response.precision:.3f}, recall {response.recall:.3f}")

    _guard(body)


@cli.command("synth")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out-dir", default=".", type=click.Path(file_okay=False))
@click.option("--waypoint", "waypoints", multiple=True, help="Waypoint as 'lat,lon'; repeat for a polyline.")
@click.option("--start-lat", default=57.0, show_default=True, help="Start of the default straight east path.")
@click.option("--start-lon", default=10.0, show_default=True)
@click.option("--path-length-km", default=30.0, show_default=True, help="Length of the default path.")
@click.option("--speed-ms", default=10.0, show_default=True)
@click.option("--gps-interval-s", default=60.0, show_default=True)
@click.option("--event-interval-s", default=300.0, show_default=True)
@click.option("--cell-spacing-m", default=3000.0, show_default=True)
@click.option("--cell-radius-min-m", default=2000.0, show_default=True)
@click.option("--cell-radius-max-m", default=2400.0, show_default=True)
@click.option("--pingpong-rate", default=0.0, show_default=True)
@click.option("--hop-rate", default=0.0, show_default=True)
@click.option("--hop-min-distance-m", default=20000.0, show_default=True)
@click.option("--server", default=None)
def cmd_synth(
    seed: int,
    out_dir: str,
    waypoints: tuple[str, ...],
    start_lat: float,
    start_lon: float,
    path_length_km: float,
    speed_ms: float,
    gps_interval_s: float,
    event_interval_s: float,
    cell_spacing_m: float,
    cell_radius_min_m: float,
    cell_radius_max_m: float,
    pingpong_rate: float,
    hop_rate: float,
    hop_min_distance_m: float,
    server: str | None,
) -> None:
    """Generate a labeled synthetic scenario (plan, events, GPS, labels)."""

    def body() -> None:
        if waypoints:
            points = []
            for raw in waypoints:
                try:
                    lat_text, lon_text = raw.split(",")
                    points.append(GeoPoint(float(lat_text), float(lon_text)))
                except ValueError as exc:
                    raise _fail(f"bad --waypoint '{raw}': {exc}") from exc
        else:
            start = GeoPoint(start_lat, start_lon)
            points = list(synth.straight_east_path(start, path_length_km * 1000.0))

        request = schemas.SynthRequest(
            seed=seed,
            waypoints=[schemas.PointModel(lat=p.lat, lon=p.lon) for p in points],
            speed_ms=speed_ms,
            gps_interval_s=gps_interval_s,
            event_interval_s=event_interval_s,
            cell_spacing_m=cell_spacing_m,
            cell_radius_min_m=cell_radius_min_m,
            cell_radius_max_m=cell_radius_max_m,
            pingpong_rate=pingpong_rate,
            hop_rate=hop_rate,
            hop_min_distance_m=hop_min_distance_m,
        )
        response = _dispatch(server, "/synth", request, handlers.handle_synth, schemas.SynthResponse)

        label_lines = [",".join(synth.LABELS_HEADER)]
        for row in response.labels:
            label_lines.append(f"{model.format_timestamp(row.timestamp)},{row.cell_id},{row.label}")

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        outputs = [
            _write(out / "plan.csv", model.dump_coverage_plan(schemas.to_plan(response.plan))),
            _write(out / "events.csv", model.dump_events(schemas.to_trajectory(response.events))),
            _write(out / "gps.csv", model.dump_gps(schemas.to_fixes(response.gps))),
            _write(out / "labels.csv", "\n".join(label_lines) + "\n"),
        ]
        _write_manifest(out, "synth", {}, request.model_dump(), outputs)
        click.echo(
            f"generated {len(response.events)} events over {len(response.plan)} cells "
            f"({len(response.gps)} fixes)"
        )

    _guard(body)


@cli.command("export-geojson")
@click.option("--plan", "plan_path", required=True, type=click.Path())
@click.option("--events", "events_path", required=True, type=click.Path())
@click.option("--gps", "gps_path", required=True, type=click.Path())
@click.option("--filtered", "filtered_path", required=True, type=click.Path())
@click.option("--out", "out_name", default="run.geojson", show_default=True)
@click.option("--out-dir", default=".", type=click.Path(file_okay=False))
@click.option("--server", default=None)
def cmd_export_geojson(
    plan_path: str,
    events_path: str,
    gps_path: str,
    filtered_path: str,
    out_name: str,
    out_dir: str,
    server: str | None,
) -> None:
    """Export GPS points and kept/removed cell circles for external viewers."""

    def body() -> None:
        request = schemas.ExportGeojsonRequest(
            plan=_load_plan_models(plan_path),
            events=_load_event_models(events_path),
            gps=_load_fix_models(gps_path),
            filtered_events=_load_event_models(filtered_path),
        )
        if server is None:
            try:
                collection = handlers.handle_export_geojson(request)
            except ValueError as exc:
                raise _fail(str(exc)) from exc
        else:
            collection = _post(server, "/export-geojson", request)

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        outputs = [
            _write(out / out_name, json.dumps(collection, indent=2) + "\n"),
        ]
        _write_manifest(
            out,
            "export-geojson",
            {"plan": plan_path, "events": events_path, "gps": gps_path, "filtered": filtered_path},
            {},
            outputs,
        )
        click.echo(f"wrote {len(collection['features'])} features to {outputs[0]}")

    _guard(body)


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def cmd_serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


main = cli

if __name__ == "__main__":
    main()
