"""Scenario documents: validated JSON descriptions of one mechanism run.

A scenario file names the items and bidders, declares the money scale,
and configures exactly one mechanism.  Decimals are stored as strings
and converted to ticks on load so nothing is ever parsed through
floating point.  Unknown keys are rejected outright; a typo should fail
loudly, not silently change an auction.

The same pydantic models double as the HTTP request schema, and the
result payloads defined here are the HTTP response schema.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import ascending, combinatorial, single_item, winners_curse
from .money import PrecisionError, format_ticks, ticks_from_decimal
from .types import (
    Allocation,
    BidProfile,
    BidderId,
    BundleBid,
    ItemId,
    Outcome,
    validate_profile,
)

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """A scenario file is unreadable or invalid; one problem per line."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ItemSpec(StrictModel):
    index: int = Field(ge=0)
    label: str = ""


class BidderSpec(StrictModel):
    index: int = Field(ge=0)
    name: str


class BundleBidSpec(StrictModel):
    bidder: str
    items: list[int] = Field(min_length=1)
    amount: str


class SingleMechanism(StrictModel):
    kind: Literal["single"]
    format: Literal["first_price", "vickrey", "english", "japanese", "dutch"]
    bids: dict[str, str] | None = None
    values: dict[str, str] | None = None
    stop_prices: dict[str, str] | None = None
    true_values: dict[str, str] | None = None
    step: str | None = None
    payment_rule: Literal["second_price", "second_price_plus_step"] = "second_price"
    start_price: str | None = None

    @model_validator(mode="after")
    def _check_inputs(self):
        sealed = self.format in ("first_price", "vickrey")
        ascending_clock = self.format in ("english", "japanese")
        if sealed and not self.bids:
            raise ValueError(f"format {self.format} needs 'bids'")
        if ascending_clock and not self.values:
            raise ValueError(f"format {self.format} needs 'values'")
        if ascending_clock and self.step is None:
            raise ValueError(f"format {self.format} needs 'step'")
        if self.format == "dutch":
            if not self.stop_prices:
                raise ValueError("format dutch needs 'stop_prices'")
            if self.step is None or self.start_price is None:
                raise ValueError("format dutch needs 'step' and 'start_price'")
        return self


class VcgMechanism(StrictModel):
    kind: Literal["vcg"]
    bids: list[BundleBidSpec] = Field(min_length=1)
    true_values: list[BundleBidSpec] | None = None
    max_items: int = combinatorial.DEFAULT_MAX_ITEMS


class TruthfulStrategySpec(StrictModel):
    kind: Literal["truthful_singleton"]
    values: dict[str, str]


class PackageStrategySpec(StrictModel):
    kind: Literal["package_budget"]
    items: list[int] = Field(min_length=1)
    joint_value: str


class ScriptedEntrySpec(StrictModel):
    round: int = Field(ge=1)
    item: int = Field(ge=0)
    price: str


class ScriptedStrategySpec(StrictModel):
    kind: Literal["scripted"]
    bids: list[ScriptedEntrySpec]
    truthful: dict[str, str] = Field(default_factory=dict)


StrategySpecUnion = Annotated[
    Union[TruthfulStrategySpec, PackageStrategySpec, ScriptedStrategySpec],
    Field(discriminator="kind"),
]


class SaaMechanism(StrictModel):
    kind: Literal["saa"]
    step: str
    strategies: dict[str, StrategySpecUnion] = Field(min_length=1)


class CurseMechanism(StrictModel):
    kind: Literal["curse"]
    n_deposits: int = Field(default=100, ge=0)
    n_buyers: int = Field(default=40, ge=1)
    unit_profit: str = "100000"
    step: str = "10000"
    distinct_cells: bool = False


class RevenueEquivMechanism(StrictModel):
    kind: Literal["revenue_equiv"]
    formats: list[Literal["first_price", "vickrey", "english", "dutch"]] = Field(
        min_length=1
    )
    n_bidders: list[int] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_counts(self):
        for n in self.n_bidders:
            if n < 2:
                raise ValueError(f"n_bidders entries must be >= 2, got {n}")
        return self


MechanismUnion = Annotated[
    Union[
        SingleMechanism,
        VcgMechanism,
        SaaMechanism,
        CurseMechanism,
        RevenueEquivMechanism,
    ],
    Field(discriminator="kind"),
]


# -- expectation blocks (drive the replication report) ------------------------


class ExpectedSingle(StrictModel):
    kind: Literal["single"]
    winner: str | None = None
    payment: str | None = None


class ExpectedVcg(StrictModel):
    kind: Literal["vcg"]
    allocation: dict[str, list[list[int]]] | None = None
    payments: dict[str, str] | None = None
    revenue: str | None = None


class ExpectedSaa(StrictModel):
    kind: Literal["saa"]
    prices: dict[str, str] | None = None
    winners: dict[str, str] | None = None
    revenue: str | None = None


class ExpectedGoldenCurse(StrictModel):
    median: float
    mean: float
    overpayment_ticks: int


class ExpectedCurse(StrictModel):
    kind: Literal["curse"]
    mean_of_means: tuple[float, float] | None = None
    min_fraction_overpaid: float | None = None
    golden: ExpectedGoldenCurse | None = None


class ExpectedRevenueTarget(StrictModel):
    format: str
    n_bidders: int
    mean: float
    tolerance: float = 0.01


class ExpectedRevenueEquiv(StrictModel):
    kind: Literal["revenue_equiv"]
    targets: list[ExpectedRevenueTarget]


ExpectedUnion = Annotated[
    Union[ExpectedSingle, ExpectedVcg, ExpectedSaa, ExpectedCurse, ExpectedRevenueEquiv],
    Field(discriminator="kind"),
]


class Scenario(StrictModel):
    schema_version: Literal[1]
    title: str = ""
    description: str = ""
    unit_scale: int = Field(ge=1)
    unit_label: str = ""
    items: list[ItemSpec] = Field(default_factory=list)
    bidders: list[BidderSpec] = Field(default_factory=list)
    mechanism: MechanismUnion
    seed: int = Field(default=0, ge=0, lt=2**64)
    replications: int = Field(default=1, ge=1)
    expected: ExpectedUnion | None = None

    @model_validator(mode="after")
    def _check_consistency(self):
        problems: list[str] = []
        for pos, item in enumerate(self.items):
            if item.index != pos:
                problems.append(f"items[{pos}].index must be {pos}, got {item.index}")
        names = set()
        for pos, bidder in enumerate(self.bidders):
            if bidder.index != pos:
                problems.append(
                    f"bidders[{pos}].index must be {pos}, got {bidder.index}"
                )
            if bidder.name in names:
                problems.append(f"bidders[{pos}].name {bidder.name!r} is not unique")
            names.add(bidder.name)
        if self.expected is not None and self.expected.kind != self.mechanism.kind:
            problems.append(
                f"expected.kind {self.expected.kind!r} does not match "
                f"mechanism.kind {self.mechanism.kind!r}"
            )
        if self.mechanism.kind in ("single", "vcg", "saa") and self.replications != 1:
            problems.append(
                f"mechanism {self.mechanism.kind!r} is deterministic; "
                f"replications must be 1"
            )
        problems.extend(self._check_references())
        problems.extend(self._check_money())
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def _check_references(self) -> list[str]:
        problems = []
        names = {b.name for b in self.bidders}
        n_items = len(self.items)
        mech = self.mechanism

        def check_names(field: str, got):
            for name in got:
                if name not in names:
                    problems.append(f"{field}: unknown bidder {name!r}")

        def check_items(field: str, indices):
            for idx in indices:
                if not 0 <= idx < n_items:
                    problems.append(f"{field}: unknown item index {idx}")

        if isinstance(mech, SingleMechanism):
            for field in ("bids", "values", "stop_prices", "true_values"):
                mapping = getattr(mech, field)
                if mapping:
                    check_names(f"mechanism.{field}", mapping)
        elif isinstance(mech, VcgMechanism):
            for pos, bid in enumerate(mech.bids):
                check_names(f"mechanism.bids[{pos}].bidder", [bid.bidder])
                check_items(f"mechanism.bids[{pos}].items", bid.items)
            for pos, bid in enumerate(mech.true_values or []):
                check_names(f"mechanism.true_values[{pos}].bidder", [bid.bidder])
                check_items(f"mechanism.true_values[{pos}].items", bid.items)
        elif isinstance(mech, SaaMechanism):
            check_names("mechanism.strategies", mech.strategies)
            for name, strat in mech.strategies.items():
                where = f"mechanism.strategies[{name}]"
                if isinstance(strat, TruthfulStrategySpec):
                    check_items(where, (int(i) for i in strat.values))
                elif isinstance(strat, PackageStrategySpec):
                    check_items(where, strat.items)
                else:
                    check_items(where, (e.item for e in strat.bids))
                    check_items(where, (int(i) for i in strat.truthful))
        return problems

    def _check_money(self) -> list[str]:
        problems = []

        def check(field: str, text: str):
            try:
                ticks_from_decimal(text, self.unit_scale)
            except PrecisionError as exc:
                problems.append(f"{field}: {exc}")

        mech = self.mechanism
        if isinstance(mech, SingleMechanism):
            for field in ("bids", "values", "stop_prices", "true_values"):
                for name, text in (getattr(mech, field) or {}).items():
                    check(f"mechanism.{field}[{name}]", text)
            for field in ("step", "start_price"):
                if getattr(mech, field) is not None:
                    check(f"mechanism.{field}", getattr(mech, field))
        elif isinstance(mech, VcgMechanism):
            for pos, bid in enumerate(mech.bids):
                check(f"mechanism.bids[{pos}].amount", bid.amount)
            for pos, bid in enumerate(mech.true_values or []):
                check(f"mechanism.true_values[{pos}].amount", bid.amount)
        elif isinstance(mech, SaaMechanism):
            check("mechanism.step", mech.step)
            for name, strat in mech.strategies.items():
                where = f"mechanism.strategies[{name}]"
                if isinstance(strat, TruthfulStrategySpec):
                    for idx, text in strat.values.items():
                        check(f"{where}.values[{idx}]", text)
                elif isinstance(strat, PackageStrategySpec):
                    check(f"{where}.joint_value", strat.joint_value)
                else:
                    for pos, entry in enumerate(strat.bids):
                        check(f"{where}.bids[{pos}].price", entry.price)
                    for idx, text in strat.truthful.items():
                        check(f"{where}.truthful[{idx}]", text)
        elif isinstance(mech, CurseMechanism):
            check("mechanism.unit_profit", mech.unit_profit)
            check("mechanism.step", mech.step)
        if self.expected is not None:
            if isinstance(self.expected, ExpectedSingle) and self.expected.payment:
                check("expected.payment", self.expected.payment)
            if isinstance(self.expected, ExpectedVcg):
                for name, text in (self.expected.payments or {}).items():
                    check(f"expected.payments[{name}]", text)
                if self.expected.revenue:
                    check("expected.revenue", self.expected.revenue)
            if isinstance(self.expected, ExpectedSaa):
                for idx, text in (self.expected.prices or {}).items():
                    check(f"expected.prices[{idx}]", text)
                if self.expected.revenue:
                    check("expected.revenue", self.expected.revenue)
        return problems

    # -- conversions to core types ------------------------------------------

    def item_ids(self) -> list[ItemId]:
        return [ItemId(i.index, i.label) for i in self.items]

    def bidder_map(self) -> dict[str, BidderId]:
        return {b.name: BidderId(b.index, b.name) for b in self.bidders}

    def ticks(self, text: str) -> int:
        return ticks_from_decimal(text, self.unit_scale)


def load_scenario(path: str | Path) -> Scenario:
    """Read, parse and validate a scenario file."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError([f"{path}: {exc.strerror or exc}"]) from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"{path}: invalid JSON: {exc}"]) from None
    return parse_scenario(doc, source=str(path))


def parse_scenario(doc: object, source: str = "<scenario>") -> Scenario:
    try:
        return Scenario.model_validate(doc)
    except ValidationError as exc:
        problems = []
        for err in exc.errors():
            loc = ".".join(str(part) for part in err["loc"]) or "<root>"
            problems.append(f"{source}: {loc}: {err['msg']}")
        raise ScenarioError(problems) from None


def packaged_scenario_names() -> list[str]:
    from importlib import resources

    root = resources.files(__package__) / "scenarios"
    return sorted(p.name.removesuffix(".json") for p in root.iterdir() if p.name.endswith(".json"))


def load_packaged_scenario(name: str) -> Scenario:
    from importlib import resources

    ref = resources.files(__package__) / "scenarios" / f"{name}.json"
    if not ref.is_file():
        raise ScenarioError([f"no packaged scenario named {name!r}"])
    return parse_scenario(json.loads(ref.read_text(encoding="utf-8")), source=name)


# -- result payloads (HTTP response schema) -----------------------------------


class OutcomePayload(BaseModel):
    allocation: dict[str, list[list[int]]]
    payments: dict[str, str]
    revenue: str
    surplus: dict[str, str]


class SingleResult(BaseModel):
    kind: Literal["single"] = "single"
    format: str
    winner: str
    payment: str
    outcome: OutcomePayload


class VcgResult(BaseModel):
    kind: Literal["vcg"] = "vcg"
    welfare: str
    outcome: OutcomePayload


class RoundRow(BaseModel):
    round: int
    bidder: str
    item: int
    price_ticks: int
    action: str


class SaaResult(BaseModel):
    kind: Literal["saa"] = "saa"
    prices: dict[str, str]
    winners: dict[str, str]
    unsold: list[int]
    rounds: list[RoundRow]
    outcome: OutcomePayload


class CurseReplicationRow(BaseModel):
    replication: int
    median: float
    mean: float
    overpayment_ticks: int


class CurseResult(BaseModel):
    kind: Literal["curse"] = "curse"
    n_deposits: int
    n_buyers: int
    distinct_cells: bool
    seed: int
    replications: list[CurseReplicationRow]
    mean_of_medians: float
    mean_of_means: float
    fraction_overpaid: float
    deposits: list[tuple[float, float]]
    buyer_cells: list[tuple[int, int]]


class RevenueRow(BaseModel):
    format: str
    n_bidders: int
    replications: int
    mean_revenue: float
    std_error: float


class RevenueEquivResult(BaseModel):
    kind: Literal["revenue_equiv"] = "revenue_equiv"
    seed: int
    rows: list[RevenueRow]


ResultUnion = Annotated[
    Union[SingleResult, VcgResult, SaaResult, CurseResult, RevenueEquivResult],
    Field(discriminator="kind"),
]


class CheckRow(BaseModel):
    check: str
    expected: str
    actual: str
    passed: bool


class RunReport(BaseModel):
    scenario: str
    kind: str
    result: ResultUnion
    checks: list[CheckRow]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# -- running -------------------------------------------------------------------


def outcome_to_payload(
    outcome: Outcome, bidders: dict[str, BidderId], unit_scale: int
) -> OutcomePayload:
    by_id = {b: name for name, b in bidders.items()}

    def name_of(bidder: BidderId) -> str:
        return by_id.get(bidder, str(bidder))

    allocation = {}
    for bidder in outcome.allocation.winners():
        bundles = sorted(
            (sorted(i.index for i in bundle) for bundle in outcome.allocation.bundles_for(bidder)),
        )
        allocation[name_of(bidder)] = bundles
    return OutcomePayload(
        allocation=allocation,
        payments={
            name_of(b): format_ticks(p, unit_scale)
            for b, p in sorted(outcome.payments.items())
        },
        revenue=format_ticks(outcome.revenue, unit_scale),
        surplus={
            name_of(b): format_ticks(s, unit_scale)
            for b, s in sorted(outcome.surplus.items())
        },
    )


def payload_to_outcome(
    payload: OutcomePayload,
    bidders: dict[str, BidderId],
    items: list[ItemId],
    unit_scale: int,
) -> Outcome:
    by_index = {i.index: i for i in items}
    assignment = {}
    for name, bundles in payload.allocation.items():
        assignment[bidders[name]] = frozenset(
            frozenset(by_index[i] for i in bundle) for bundle in bundles
        )
    payments = {
        bidders[name]: ticks_from_decimal(text, unit_scale)
        for name, text in payload.payments.items()
    }
    surplus = {
        bidders[name]: ticks_from_decimal(text, unit_scale)
        for name, text in payload.surplus.items()
    }
    return Outcome(
        Allocation(assignment),
        payments,
        ticks_from_decimal(payload.revenue, unit_scale),
        surplus,
    )


def _run_single(scn: Scenario, mech: SingleMechanism) -> SingleResult:
    bidders = scn.bidder_map()

    def to_ticks(mapping: dict[str, str] | None) -> dict[BidderId, int] | None:
        if not mapping:
            return None
        return {bidders[name]: scn.ticks(text) for name, text in mapping.items()}

    fmt = single_item.AuctionFormat(mech.format)
    true_values = to_ticks(mech.true_values)
    if fmt is single_item.AuctionFormat.FIRST_PRICE:
        outcome = single_item.run_first_price(to_ticks(mech.bids), true_values)
    elif fmt is single_item.AuctionFormat.VICKREY:
        outcome = single_item.run_vickrey(to_ticks(mech.bids), true_values)
    else:
        cfg = single_item.ClockConfig(
            step=scn.ticks(mech.step),
            payment_rule=single_item.PaymentRule(mech.payment_rule),
            start_price=scn.ticks(mech.start_price) if mech.start_price else None,
        )
        if fmt is single_item.AuctionFormat.ENGLISH:
            outcome = single_item.run_english_clock(to_ticks(mech.values), cfg)
        elif fmt is single_item.AuctionFormat.JAPANESE:
            outcome = single_item.run_japanese(to_ticks(mech.values), cfg)
        else:
            outcome = single_item.run_dutch(to_ticks(mech.stop_prices), cfg)
    winner = outcome.allocation.winners()[0]
    return SingleResult(
        format=mech.format,
        winner=winner.name,
        payment=format_ticks(outcome.payment_for(winner), scn.unit_scale),
        outcome=outcome_to_payload(outcome, scn.bidder_map(), scn.unit_scale),
    )


def _build_profile(scn: Scenario, bids: list[BundleBidSpec]) -> BidProfile:
    bidders = scn.bidder_map()
    items = scn.item_ids()
    return BidProfile.of(
        BundleBid(
            bidders[b.bidder],
            frozenset(items[i] for i in b.items),
            scn.ticks(b.amount),
        )
        for b in bids
    )


def _run_vcg(scn: Scenario, mech: VcgMechanism) -> VcgResult:
    items = scn.item_ids()
    profile = _build_profile(scn, mech.bids)
    problems = validate_profile(profile, items)
    if problems:
        raise ScenarioError([f"mechanism.bids: {p}" for p in problems])
    true_profile = _build_profile(scn, mech.true_values) if mech.true_values else None
    outcome = combinatorial.run_generalized_vickrey(
        items, profile, true_profile, mech.max_items
    )
    _, welfare = combinatorial.winner_determination(items, profile, mech.max_items)
    return VcgResult(
        welfare=format_ticks(welfare.total, scn.unit_scale),
        outcome=outcome_to_payload(outcome, scn.bidder_map(), scn.unit_scale),
    )


def _build_strategy(
    scn: Scenario, spec: TruthfulStrategySpec | PackageStrategySpec | ScriptedStrategySpec
) -> ascending.StrategySpec:
    items = scn.item_ids()
    if isinstance(spec, TruthfulStrategySpec):
        return ascending.TruthfulSingleton(
            {items[int(i)]: scn.ticks(text) for i, text in spec.values.items()}
        )
    if isinstance(spec, PackageStrategySpec):
        return ascending.PackageBudget(
            frozenset(items[i] for i in spec.items), scn.ticks(spec.joint_value)
        )
    return ascending.Scripted(
        tuple(
            ascending.ScriptedBidEntry(e.round, items[e.item], scn.ticks(e.price))
            for e in spec.bids
        ),
        {items[int(i)]: scn.ticks(text) for i, text in spec.truthful.items()},
    )


def _run_saa(scn: Scenario, mech: SaaMechanism, seed: int) -> SaaResult:
    items = scn.item_ids()
    bidders = scn.bidder_map()
    strategies = {
        bidders[name]: _build_strategy(scn, spec)
        for name, spec in mech.strategies.items()
    }
    outcome, log = ascending.run_saa(items, strategies, scn.ticks(mech.step), seed)
    board = log.replay_prices()
    prices = {}
    winners = {}
    for item, (bidder, price) in board.items():
        prices[str(item.index)] = format_ticks(price, scn.unit_scale)
        winners[str(item.index)] = bidder.name
    unsold = sorted(i.index for i in items if i not in board)
    rounds = [
        RoundRow(
            round=r.round,
            bidder=r.bidder.name,
            item=r.item.index,
            price_ticks=r.price,
            action=r.action.value,
        )
        for r in log.records
    ]
    return SaaResult(
        prices=prices,
        winners=winners,
        unsold=unsold,
        rounds=rounds,
        outcome=outcome_to_payload(outcome, bidders, scn.unit_scale),
    )


def _run_curse(scn: Scenario, mech: CurseMechanism, seed: int, reps: int) -> CurseResult:
    cfg = winners_curse.CurseConfig(
        n_deposits=mech.n_deposits,
        n_buyers=mech.n_buyers,
        unit_profit=scn.ticks(mech.unit_profit),
        step=scn.ticks(mech.step),
        distinct_cells=mech.distinct_cells,
    )
    summary = winners_curse.run_curse_experiment(cfg, reps, seed)
    return CurseResult(
        n_deposits=cfg.n_deposits,
        n_buyers=cfg.n_buyers,
        distinct_cells=cfg.distinct_cells,
        seed=seed,
        replications=[
            CurseReplicationRow(
                replication=r.replication,
                median=r.median,
                mean=r.mean,
                overpayment_ticks=r.overpayment,
            )
            for r in summary.replications
        ],
        mean_of_medians=summary.mean_of_medians,
        mean_of_means=summary.mean_of_means,
        fraction_overpaid=summary.fraction_overpaid,
        deposits=list(summary.deposits),
        buyer_cells=list(summary.buyer_cells),
    )


def _run_revenue_equiv(
    scn: Scenario, mech: RevenueEquivMechanism, seed: int, reps: int
) -> RevenueEquivResult:
    rows = []
    for fmt in mech.formats:
        for n in mech.n_bidders:
            est = single_item.estimate_revenue(
                single_item.AuctionFormat(fmt), n, reps, seed
            )
            rows.append(
                RevenueRow(
                    format=fmt,
                    n_bidders=n,
                    replications=reps,
                    mean_revenue=est.mean_revenue,
                    std_error=est.std_error,
                )
            )
    return RevenueEquivResult(seed=seed, rows=rows)


def run_scenario(
    scn: Scenario,
    name: str = "<scenario>",
    seed: int | None = None,
    replications: int | None = None,
) -> RunReport:
    """Dispatch a validated scenario to its mechanism and check expectations."""
    effective_seed = scn.seed if seed is None else seed
    effective_reps = scn.replications if replications is None else replications
    mech = scn.mechanism
    if isinstance(mech, SingleMechanism):
        result: ResultUnion = _run_single(scn, mech)
    elif isinstance(mech, VcgMechanism):
        result = _run_vcg(scn, mech)
    elif isinstance(mech, SaaMechanism):
        result = _run_saa(scn, mech, effective_seed)
    elif isinstance(mech, CurseMechanism):
        result = _run_curse(scn, mech, effective_seed, effective_reps)
    else:
        result = _run_revenue_equiv(scn, mech, effective_seed, effective_reps)
    checks = check_expected(scn, result)
    return RunReport(scenario=name, kind=mech.kind, result=result, checks=checks)


def _tick_eq(scn: Scenario, expected: str, actual: str) -> bool:
    return scn.ticks(expected) == scn.ticks(actual)


def check_expected(scn: Scenario, result: ResultUnion) -> list[CheckRow]:
    """Compare a result against the scenario's expected block, row per claim."""
    exp = scn.expected
    if exp is None:
        return []
    rows: list[CheckRow] = []

    def row(check: str, expected: str, actual: str, passed: bool):
        rows.append(CheckRow(check=check, expected=expected, actual=actual, passed=passed))

    def canon(mapping) -> str:
        return json.dumps(mapping, sort_keys=True)

    if isinstance(exp, ExpectedSingle):
        if exp.winner is not None:
            row("winner", exp.winner, result.winner, exp.winner == result.winner)
        if exp.payment is not None:
            row(
                "payment",
                exp.payment,
                result.payment,
                _tick_eq(scn, exp.payment, result.payment),
            )
    elif isinstance(exp, ExpectedVcg):
        if exp.allocation is not None:
            actual = result.outcome.allocation
            expected = {
                name: sorted(sorted(b) for b in bundles)
                for name, bundles in exp.allocation.items()
            }
            row("allocation", canon(expected), canon(actual), expected == actual)
        for name, text in (exp.payments or {}).items():
            actual_text = result.outcome.payments.get(name, "<absent>")
            ok = actual_text != "<absent>" and _tick_eq(scn, text, actual_text)
            row(f"payment[{name}]", text, actual_text, ok)
        if exp.revenue is not None:
            row(
                "revenue",
                exp.revenue,
                result.outcome.revenue,
                _tick_eq(scn, exp.revenue, result.outcome.revenue),
            )
    elif isinstance(exp, ExpectedSaa):
        for idx, text in (exp.prices or {}).items():
            actual_text = result.prices.get(idx, "<unsold>")
            ok = actual_text != "<unsold>" and _tick_eq(scn, text, actual_text)
            row(f"price[item {idx}]", text, actual_text, ok)
        for idx, name in (exp.winners or {}).items():
            actual_name = result.winners.get(idx, "<unsold>")
            row(f"winner[item {idx}]", name, actual_name, name == actual_name)
        if exp.revenue is not None:
            row(
                "revenue",
                exp.revenue,
                result.outcome.revenue,
                _tick_eq(scn, exp.revenue, result.outcome.revenue),
            )
    elif isinstance(exp, ExpectedCurse):
        if exp.mean_of_means is not None:
            lo, hi = exp.mean_of_means
            actual = result.mean_of_means
            row(
                "mean of mean estimates",
                f"[{lo}, {hi}]",
                f"{actual:.4f}",
                lo <= actual <= hi,
            )
        if exp.min_fraction_overpaid is not None:
            row(
                "fraction overpaid",
                f">= {exp.min_fraction_overpaid}",
                f"{result.fraction_overpaid:.4f}",
                result.fraction_overpaid >= exp.min_fraction_overpaid,
            )
        if exp.golden is not None:
            first = result.replications[0]
            triple = (first.median, first.mean, first.overpayment_ticks)
            want = (exp.golden.median, exp.golden.mean, exp.golden.overpayment_ticks)
            row("golden replication 0", str(want), str(triple), triple == want)
    elif isinstance(exp, ExpectedRevenueEquiv):
        by_key = {(r.format, r.n_bidders): r for r in result.rows}
        for target in exp.targets:
            got = by_key.get((target.format, target.n_bidders))
            if got is None:
                row(
                    f"mean revenue[{target.format}, n={target.n_bidders}]",
                    f"{target.mean:.6f}",
                    "<missing>",
                    False,
                )
                continue
            ok = abs(got.mean_revenue - target.mean) <= target.tolerance
            row(
                f"mean revenue[{target.format}, n={target.n_bidders}]",
                f"{target.mean:.6f} +/- {target.tolerance}",
                f"{got.mean_revenue:.6f}",
                ok,
            )
    return rows
