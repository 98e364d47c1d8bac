"""Thin command-line client for the auction service.

Every subcommand speaks HTTP to the service: against a remote instance
when ``--server`` is given, otherwise against an in-process copy of the
app so no daemon is needed.  The client's only jobs are loading scenario
files, rendering summaries, and writing CSV files.

Exit codes: 0 success, 1 scenario or replication failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import __version__, reporting
from .scenarios import RunReport
from .service import KIND_ROUTES

SUBCOMMAND_KINDS = {
    "single": "single",
    "vcg": "vcg",
    "saa": "saa",
    "curse": "curse",
    "revenue-equiv": "revenue_equiv",
}


class _InProcessTransport(httpx.BaseTransport):
    """Drive the ASGI app synchronously: same wire format, no port to bind."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        async def call():
            response = await self._asgi.handle_async_request(request)
            body = await response.aread()
            await response.aclose()
            return response, body

        response, body = asyncio.run(call())
        return httpx.Response(
            status_code=response.status_code,
            headers=response.headers,
            content=body,
            request=request,
        )


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    from .service import create_app

    return httpx.Client(
        transport=_InProcessTransport(create_app()), base_url="http://auctionlab.internal"
    )


def _fail(lines: list[str]) -> int:
    for line in lines:
        print(f"error: {line}", file=sys.stderr)
    return 1


def _detail_lines(response: httpx.Response) -> list[str]:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return [response.text.strip() or f"HTTP {response.status_code}"]
    if isinstance(detail, list):
        lines = []
        for entry in detail:
            if isinstance(entry, dict):  # FastAPI validation error objects
                loc = ".".join(str(p) for p in entry.get("loc", []))
                lines.append(f"{loc}: {entry.get('msg', entry)}")
            else:
                lines.append(str(entry))
        return lines
    return [str(detail)]


def _write(out_dir: Path, name: str, content: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(content, encoding="utf-8", newline="")
    return path


def _emit_files(report: RunReport, out_dir: Path, stem: str) -> list[Path]:
    result = report.result
    written = []
    if result.kind in ("single", "vcg"):
        written.append(
            _write(out_dir, f"{stem}_outcome.csv", reporting.outcome_csv(result.outcome))
        )
    elif result.kind == "saa":
        written.append(
            _write(out_dir, f"{stem}_outcome.csv", reporting.outcome_csv(result.outcome))
        )
        written.append(_write(out_dir, f"{stem}_rounds.csv", reporting.rounds_csv(result)))
    elif result.kind == "curse":
        written.append(
            _write(
                out_dir,
                f"{stem}_replications.csv",
                reporting.curse_replications_csv(result),
            )
        )
        written.append(
            _write(out_dir, f"{stem}_aggregates.csv", reporting.curse_aggregates_csv(result))
        )
        written.append(_write(out_dir, f"{stem}_deposits.csv", reporting.deposits_csv(result)))
        written.append(
            _write(out_dir, f"{stem}_buyer_cells.csv", reporting.buyer_cells_csv(result))
        )
    elif result.kind == "revenue_equiv":
        written.append(_write(out_dir, f"{stem}_revenue.csv", reporting.revenue_csv(result)))
    return written


def _run_subcommand(args: argparse.Namespace) -> int:
    path = Path(args.scenario)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        return _fail([f"{path}: {exc.strerror or exc}"])
    except json.JSONDecodeError as exc:
        return _fail([f"{path}: invalid JSON: {exc}"])
    params = {}
    if args.seed is not None:
        params["seed"] = args.seed
    if args.reps is not None:
        params["replications"] = args.reps
    kind = SUBCOMMAND_KINDS[args.command]
    with _client(args.server) as client:
        response = client.post(KIND_ROUTES[kind], json=doc, params=params)
        if response.status_code != 200:
            return _fail(_detail_lines(response))
        report = RunReport.model_validate(response.json())
    unit_label = doc.get("unit_label", "") if isinstance(doc, dict) else ""
    print(reporting.render_report(report, unit_label))
    for written in _emit_files(report, Path(args.out), path.stem):
        print(f"wrote {written}")
    return 0


def _run_replicate(args: argparse.Namespace) -> int:
    with _client(args.server) as client:
        response = client.post("/replicate")
        if response.status_code != 200:
            return _fail(_detail_lines(response))
        payload = response.json()
    reports = [RunReport.model_validate(r) for r in payload["reports"]]
    print(reporting.render_replication_table(reports))
    _write(Path(args.out), "replication_report.csv", reporting.checks_csv(reports))
    print(f"wrote {Path(args.out) / 'replication_report.csv'}")
    return 0 if payload["passed"] else 1


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("auctionlab.service:app", host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser, with_scenario: bool = True) -> None:
    if with_scenario:
        parser.add_argument("scenario", help="path to a scenario JSON file")
        parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        parser.add_argument(
            "--reps", type=int, default=None, help="override the replication count"
        )
    parser.add_argument("--out", default="out", help="directory for CSV output")
    parser.add_argument(
        "--format", choices=["csv"], default="csv", help="machine-readable output format"
    )
    parser.add_argument(
        "--server", default=None, help="base URL of a running service (default: in-process)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auctionlab",
        description="Run auction mechanisms and market experiments from scenario files.",
    )
    parser.add_argument("--version", action="version", version=f"auctionlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "single": "single-item auction (sealed or clock format)",
        "vcg": "combinatorial auction with externality pricing",
        "saa": "simultaneous ascending auction",
        "curse": "common-value survey experiment",
        "revenue-equiv": "Monte Carlo revenue comparison across formats",
    }
    for command, text in descriptions.items():
        p = sub.add_parser(command, help=text)
        _add_common(p)
        p.set_defaults(func=_run_subcommand)
    p = sub.add_parser("replicate-paper", help="run every bundled scenario and check expectations")
    _add_common(p, with_scenario=False)
    p.set_defaults(func=_run_replicate)
    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_run_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
