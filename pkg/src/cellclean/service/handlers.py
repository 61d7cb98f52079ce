"""Request handlers shared by the HTTP endpoints and the CLI.

Each handler is a pure function from a request model to a response model;
transport concerns (HTTP status mapping, file I/O) stay with the callers.
"""

from __future__ import annotations

from .. import evaluation, filtering, geojson, reports, synth
from . import schemas


def handle_filter(req: schemas.FilterRequest) -> schemas.FilterResponse:
    plan = schemas.to_plan(req.plan)
    trajectory = schemas.to_trajectory(req.events)
    report = filtering.filter_trajectory(trajectory, plan, schemas.to_filter_config(req.config))
    return schemas.FilterResponse(
        decisions=[
            schemas.DecisionModel(
                timestamp=d.event.timestamp,
                cell_id=d.event.cell_id,
                verdict=d.verdict,
                anchor=d.anchor,
                reason=d.reason,
            )
            for d in report.decisions
        ],
        tallies=[
            schemas.TallyRowModel(anchor=row, accepted=acc, discarded=dis)
            for row, (acc, dis) in report.tallies.items()
        ],
        filtered_events=schemas.from_trajectory(report.filtered),
        original_stats=schemas.StatsModel(**vars(reports.trajectory_stats(trajectory))),
        filtered_stats=schemas.StatsModel(**vars(reports.trajectory_stats(report.filtered))),
    )


def handle_evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    plan = schemas.to_plan(req.plan)
    trajectory = schemas.to_trajectory(req.events)
    filtered = schemas.to_trajectory(req.filtered_events)
    fixes = schemas.to_fixes(req.gps)
    cfg = schemas.to_ground_truth_config(req.config)

    associations = evaluation.associate(trajectory, fixes, cfg)
    truth = evaluation.build_ground_truth(associations, plan, cfg)
    report = evaluation.evaluate(truth.truth_cells, filtered.cell_ids())
    profile = evaluation.distance_profile(truth.associations, plan)

    return schemas.EvaluateResponse(
        radius_factor=cfg.radius_factor,
        max_association_gap_s=cfg.max_association_gap_s,
        truth_event_count=truth.in_truth_count,
        filtered_event_count=len(filtered),
        truth_cells=sorted(report.truth_cells),
        filter_cells=sorted(report.filter_cells),
        matching_cells=sorted(report.matching_cells),
        not_in_truth_cells=sorted(report.not_in_truth_cells),
        not_in_filter_cells=sorted(report.not_in_filter_cells),
        precision=report.precision,
        recall=report.recall,
        precision_defined=report.precision_defined,
        recall_defined=report.recall_defined,
        profile=[
            schemas.ProfilePointModel(
                timestamp=p.event.timestamp,
                cell_id=p.event.cell_id,
                centroid_distance_m=p.centroid_distance,
                radius_m=p.radius,
            )
            for p in profile
        ],
    )


def handle_synth(req: schemas.SynthRequest) -> schemas.SynthResponse:
    scenario = synth.generate(schemas.to_scenario_config(req))
    return schemas.SynthResponse(
        plan=schemas.from_plan(scenario.plan),
        events=schemas.from_trajectory(scenario.events),
        gps=schemas.from_fixes(scenario.gps),
        labels=[
            schemas.LabeledEventModel(
                timestamp=event.timestamp, cell_id=event.cell_id, label=label
            )
            for event, label in zip(scenario.events, scenario.labels)
        ],
    )


def handle_export_geojson(req: schemas.ExportGeojsonRequest) -> dict:
    plan = schemas.to_plan(req.plan)
    trajectory = schemas.to_trajectory(req.events)
    filtered = schemas.to_trajectory(req.filtered_events)
    fixes = schemas.to_fixes(req.gps)
    return geojson.feature_collection(plan, trajectory, fixes, filtered)
