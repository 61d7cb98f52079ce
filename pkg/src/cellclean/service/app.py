"""FastAPI application exposing the filter, evaluator, generator, and export."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import handlers, schemas

app = FastAPI(
    title="cellclean",
    version=__version__,
    description=(
        "Removes ping-pong handover and hop artifacts from cell-event "
        "trajectories, evaluates results against GPS ground truth, and "
        "generates labeled synthetic scenarios."
    ),
)


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/filter", response_model=schemas.FilterResponse)
def filter_events(req: schemas.FilterRequest) -> schemas.FilterResponse:
    try:
        return handlers.handle_filter(req)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/evaluate", response_model=schemas.EvaluateResponse)
def evaluate_run(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    try:
        return handlers.handle_evaluate(req)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/synth", response_model=schemas.SynthResponse)
def synthesize(req: schemas.SynthRequest) -> schemas.SynthResponse:
    try:
        return handlers.handle_synth(req)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/export-geojson")
def export_geojson(req: schemas.ExportGeojsonRequest) -> dict:
    try:
        return handlers.handle_export_geojson(req)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
