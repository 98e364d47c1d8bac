"""CSV emission and human-readable summaries for run results.

All CSV files are UTF-8, comma-separated, LF line endings, one header
row.  Money columns carry fixed-point decimals at the scenario's scale;
the outcome CSV round-trips losslessly back into an outcome payload.
"""

from __future__ import annotations

import csv
import io

from .scenarios import (
    CheckRow,
    CurseResult,
    OutcomePayload,
    RevenueEquivResult,
    RunReport,
    SaaResult,
    SingleResult,
    VcgResult,
)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _format_bundles(bundles: list[list[int]]) -> str:
    return ";".join("+".join(str(i) for i in bundle) for bundle in bundles)


def _parse_bundles(text: str) -> list[list[int]]:
    if not text:
        return []
    return [[int(i) for i in part.split("+")] for part in text.split(";")]


def outcome_csv(payload: OutcomePayload) -> str:
    """One row per participating bidder: bundles won, payment, surplus."""
    names = sorted(
        set(payload.payments) | set(payload.allocation) | set(payload.surplus)
    )
    rows = []
    for name in names:
        rows.append(
            [
                name,
                _format_bundles(payload.allocation.get(name, [])),
                payload.payments.get(name, "0"),
                payload.surplus.get(name, ""),
            ]
        )
    return _csv(rows, ["bidder", "bundles", "payment", "surplus"])


def parse_outcome_csv(text: str, unit_scale: int) -> OutcomePayload:
    """Inverse of :func:`outcome_csv`; revenue is the sum of payments."""
    from .money import format_ticks, ticks_from_decimal

    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["bidder", "bundles", "payment", "surplus"]:
        raise ValueError(f"unexpected outcome CSV header: {header}")
    allocation = {}
    payments = {}
    surplus = {}
    total = 0
    for name, bundles, payment, extra in reader:
        parsed = _parse_bundles(bundles)
        if parsed:
            allocation[name] = parsed
        payments[name] = payment
        total += ticks_from_decimal(payment, unit_scale)
        if extra:
            surplus[name] = extra
    return OutcomePayload(
        allocation=allocation,
        payments=payments,
        revenue=format_ticks(total, unit_scale),
        surplus=surplus,
    )


def rounds_csv(result: SaaResult) -> str:
    rows = [
        [r.round, r.bidder, r.item, r.price_ticks, r.action] for r in result.rounds
    ]
    return _csv(rows, ["round", "bidder", "item", "price_ticks", "action"])


def curse_replications_csv(result: CurseResult) -> str:
    rows = [
        [r.replication, r.median, r.mean, r.overpayment_ticks]
        for r in result.replications
    ]
    return _csv(rows, ["replication", "median_estimate", "mean_estimate", "overpayment_ticks"])


def curse_aggregates_csv(result: CurseResult) -> str:
    rows = [
        ["replications", len(result.replications)],
        ["seed", result.seed],
        ["distinct_cells", str(result.distinct_cells).lower()],
        ["mean_of_medians", result.mean_of_medians],
        ["mean_of_means", result.mean_of_means],
        ["fraction_overpaid", result.fraction_overpaid],
    ]
    return _csv(rows, ["metric", "value"])


def deposits_csv(result: CurseResult) -> str:
    return _csv([[x, y] for x, y in result.deposits], ["x", "y"])


def buyer_cells_csv(result: CurseResult) -> str:
    return _csv([[cx, cy] for cx, cy in result.buyer_cells], ["cx", "cy"])


def revenue_csv(result: RevenueEquivResult) -> str:
    rows = [
        [r.format, r.n_bidders, r.replications, f"{r.mean_revenue:.6f}", f"{r.std_error:.6f}"]
        for r in result.rows
    ]
    return _csv(rows, ["format", "n_bidders", "replications", "mean_revenue", "std_error"])


def checks_csv(reports: list[RunReport]) -> str:
    rows = []
    for report in reports:
        for check in report.checks:
            rows.append(
                [
                    report.scenario,
                    check.check,
                    check.expected,
                    check.actual,
                    "pass" if check.passed else "FAIL",
                ]
            )
    return _csv(rows, ["scenario", "check", "expected", "actual", "status"])


# -- human summaries -----------------------------------------------------------


def render_report(report: RunReport, unit_label: str = "") -> str:
    lines = [f"scenario: {report.scenario} ({report.kind})"]
    result = report.result
    unit = f" {unit_label}" if unit_label else ""
    if isinstance(result, SingleResult):
        lines.append(f"  format: {result.format}")
        lines.append(f"  winner: {result.winner} pays {result.payment}{unit}")
        for name, text in result.outcome.surplus.items():
            lines.append(f"  surplus {name}: {text}{unit}")
    elif isinstance(result, VcgResult):
        for name, bundles in result.outcome.allocation.items():
            won = ", ".join("{" + "+".join(str(i) for i in b) + "}" for b in bundles)
            lines.append(
                f"  {name} wins {won} and pays {result.outcome.payments[name]}{unit}"
            )
        lines.append(f"  welfare: {result.welfare}{unit}")
        lines.append(f"  revenue: {result.outcome.revenue}{unit}")
    elif isinstance(result, SaaResult):
        for idx in sorted(result.prices, key=int):
            lines.append(
                f"  item {idx}: {result.winners[idx]} at {result.prices[idx]}{unit}"
            )
        if result.unsold:
            lines.append(f"  unsold items: {result.unsold}")
        lines.append(f"  rounds logged: {len(result.rounds)}")
        lines.append(f"  revenue: {result.outcome.revenue}{unit}")
    elif isinstance(result, CurseResult):
        lines.append(
            f"  {len(result.replications)} replications, seed {result.seed}, "
            f"{'distinct' if result.distinct_cells else 'free'} cell choice"
        )
        first = result.replications[0]
        lines.append(
            f"  replication 0: median {first.median}, mean {first.mean}, "
            f"overpayment {first.overpayment_ticks}"
        )
        lines.append(f"  mean of medians: {result.mean_of_medians:.4f}")
        lines.append(f"  mean of means:   {result.mean_of_means:.4f}")
        lines.append(f"  fraction overpaid: {result.fraction_overpaid:.4f}")
    elif isinstance(result, RevenueEquivResult):
        for r in result.rows:
            lines.append(
                f"  {r.format:12s} n={r.n_bidders}: mean {r.mean_revenue:.6f} "
                f"(se {r.std_error:.6f}, {r.replications} reps)"
            )
    if report.checks:
        lines.append("  checks:")
        for check in report.checks:
            status = "pass" if check.passed else "FAIL"
            lines.append(
                f"    [{status}] {check.check}: expected {check.expected}, "
                f"got {check.actual}"
            )
    return "\n".join(lines)


def render_replication_table(reports: list[RunReport]) -> str:
    lines = []
    total = 0
    failed = 0
    for report in reports:
        for check in report.checks:
            total += 1
            status = "pass" if check.passed else "FAIL"
            if not check.passed:
                failed += 1
            lines.append(
                f"[{status}] {report.scenario}: {check.check}: "
                f"expected {check.expected}, got {check.actual}"
            )
    lines.append(f"{total - failed}/{total} checks passed")
    return "\n".join(lines)
