"""HTTP API consumed by the explorer UI and by scripts.

Endpoints (JSON bodies, SI units):

* ``GET /system`` -- the loaded system plus its baseline constraints
* ``GET /runs`` -- run history
* ``POST /runs`` -- ``{"constraints": {...}?, "enabled_configs": [...]?}``
* ``GET /runs/{id}`` / ``DELETE /runs/{id}``

Bodies are parsed by the same loaders the CLI uses; malformed input gets a
400 with the offending field path.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..model import (
    Configuration,
    ConstraintSet,
    SchemaError,
    SystemSpec,
    constraints_to_doc,
    parse_constraints,
    system_to_doc,
)
from .runs import RunStore, run_once
from .sweep import _enabled


def _spec_with_placements(spec: SystemSpec, doc) -> SystemSpec:
    """Apply per-run placement locks from a request body."""
    import dataclasses

    if not isinstance(doc, dict):
        raise SchemaError("placements", "expected an object of module -> configuration")
    locks = {}
    for mid, name in doc.items():
        if mid not in spec.module_map:
            raise SchemaError("placements", f"unknown module {mid!r}")
        try:
            locks[mid] = Configuration[str(name)]
        except KeyError:
            raise SchemaError(
                f"placements.{mid}", f"unknown configuration {name!r}"
            ) from None
    modules = tuple(
        dataclasses.replace(m, placement=locks[m.id]) if m.id in locks else m
        for m in spec.modules
    )
    return dataclasses.replace(spec, modules=modules)


def create_app(
    spec: SystemSpec,
    base_constraints: ConstraintSet,
    store: Optional[RunStore] = None,
    ui_dir: Optional[str] = None,
    backend: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="split-chip partitioning service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if store is None:
        store = RunStore()
    app.state.store = store

    @app.get("/system")
    def get_system():
        doc = system_to_doc(spec)
        doc["constraints"] = constraints_to_doc(base_constraints, spec)
        return doc

    @app.get("/runs")
    def get_runs():
        return [r.to_doc(spec) for r in store.list()]

    @app.post("/runs")
    async def post_run(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"detail": "body is not valid JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"detail": "body must be a JSON object"}, status_code=400)
        try:
            if body.get("constraints") is None:
                constraints = base_constraints
            else:
                constraints = parse_constraints(body["constraints"], spec)
            enabled = _enabled(body.get("enabled_configs"), "enabled_configs")
            run_spec = spec
            if body.get("placements"):
                run_spec = _spec_with_placements(spec, body["placements"])
            record = run_once(
                run_spec,
                constraints,
                enabled_configs=enabled,
                run_id=store.allocate_id(),
                backend=backend,
            )
        except SchemaError as e:
            return JSONResponse(
                {"detail": str(e), "field": e.path}, status_code=400
            )
        except ValueError as e:
            return JSONResponse({"detail": str(e)}, status_code=400)
        store.add(record)
        return record.to_doc(spec)

    @app.get("/runs/{run_id}")
    def get_run(run_id: int):
        record = store.get(run_id)
        if record is None:
            return JSONResponse({"detail": f"no run {run_id}"}, status_code=404)
        return record.to_doc(spec)

    @app.delete("/runs/{run_id}")
    def delete_run(run_id: int):
        if not store.delete(run_id):
            return JSONResponse({"detail": f"no run {run_id}"}, status_code=404)
        return {"deleted": run_id}

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(
    spec: SystemSpec,
    base_constraints: ConstraintSet,
    port: int = 8000,
    host: str = "127.0.0.1",
    ui_dir: Optional[str] = None,
    state_path: Optional[str] = None,
) -> None:
    """Run the service until interrupted; optionally persist run history."""
    import uvicorn

    store = RunStore()
    app = create_app(spec, base_constraints, store=store, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    finally:
        if state_path:
            store.save(state_path, spec)
