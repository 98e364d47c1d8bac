"""HTTP service exposing every mechanism over JSON.

The request body of every run endpoint is a full scenario document (the
same schema the CLI reads from disk); responses are the typed result
payloads from :mod:`auctionlab.scenarios`.  Mechanism-specific endpoints
reject documents of the wrong kind so clients can't accidentally post a
survey experiment at the combinatorial auction.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import __version__
from .ascending import ScriptError
from .combinatorial import InstanceTooLarge
from .scenarios import (
    RunReport,
    Scenario,
    ScenarioError,
    load_packaged_scenario,
    packaged_scenario_names,
    parse_scenario,
    run_scenario,
)

KIND_ROUTES = {
    "single": "/auctions/single",
    "vcg": "/auctions/vcg",
    "saa": "/auctions/saa",
    "curse": "/experiments/winners-curse",
    "revenue_equiv": "/experiments/revenue-equivalence",
}


class ReplicationReport(BaseModel):
    reports: list[RunReport]
    checks_total: int
    checks_failed: int
    passed: bool


def _execute(
    doc: dict,
    seed: int | None,
    replications: int | None,
    required_kind: str | None = None,
    name: str = "<request>",
) -> RunReport:
    try:
        scenario = parse_scenario(doc, source=name)
    except ScenarioError as exc:
        raise HTTPException(status_code=422, detail=exc.problems) from None
    if required_kind is not None and scenario.mechanism.kind != required_kind:
        raise HTTPException(
            status_code=400,
            detail=[
                f"mechanism.kind: this endpoint runs {required_kind!r} scenarios, "
                f"got {scenario.mechanism.kind!r}"
            ],
        )
    try:
        return run_scenario(scenario, name=name, seed=seed, replications=replications)
    except (ScenarioError,) as exc:
        raise HTTPException(status_code=400, detail=exc.problems) from None
    except (ScriptError, InstanceTooLarge, ValueError) as exc:
        raise HTTPException(status_code=400, detail=[str(exc)]) from None


def create_app() -> FastAPI:
    app = FastAPI(
        title="auctionlab",
        version=__version__,
        description="Deterministic auction mechanisms and seeded market experiments.",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/scenarios")
    def list_scenarios() -> dict:
        return {"scenarios": packaged_scenario_names()}

    @app.get("/scenarios/{name}")
    def get_scenario(name: str) -> dict:
        try:
            scenario = load_packaged_scenario(name)
        except ScenarioError as exc:
            raise HTTPException(status_code=404, detail=exc.problems) from None
        return json.loads(scenario.model_dump_json(exclude_none=True))

    @app.post("/run")
    def run(
        doc: dict,
        seed: int | None = Query(default=None, ge=0),
        replications: int | None = Query(default=None, ge=1),
    ) -> RunReport:
        return _execute(doc, seed, replications)

    def make_kind_endpoint(kind: str):
        def endpoint(
            doc: dict,
            seed: int | None = Query(default=None, ge=0),
            replications: int | None = Query(default=None, ge=1),
        ) -> RunReport:
            return _execute(doc, seed, replications, required_kind=kind)

        endpoint.__name__ = f"run_{kind}"
        return endpoint

    for kind, route in KIND_ROUTES.items():
        app.post(route, response_model=RunReport)(make_kind_endpoint(kind))

    @app.post("/replicate")
    def replicate() -> ReplicationReport:
        reports = []
        for name in packaged_scenario_names():
            scenario = load_packaged_scenario(name)
            reports.append(run_scenario(scenario, name=name))
        checks = [c for r in reports for c in r.checks]
        failed = sum(1 for c in checks if not c.passed)
        return ReplicationReport(
            reports=reports,
            checks_total=len(checks),
            checks_failed=failed,
            passed=failed == 0,
        )

    return app


app = create_app()
