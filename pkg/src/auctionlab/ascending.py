"""Simultaneous ascending auction: parallel per-item price clocks.

All items run at once.  Rounds proceed in fixed bidder-index order; on
its turn a bidder may raise any open item it is not standing on by at
least one step.  The auction ends after a full round with no new bid;
each item then goes to its standing bidder at the standing price, and an
item nobody ever bid on stays unsold.

Strategies are pluggable and deterministic:

* ``TruthfulSingleton`` raises a minimum increment on every item whose
  next price would still be strictly below its private value.  Bidding
  at or above value is never rational here, which also means a clock
  can stop one step below a rival's value depending on turn parity.
* ``PackageBudget`` wants one bundle jointly: it quits all bundle items
  the moment the prospective sum of bundle prices (own standing prices
  kept, every other item raised by one step) would exceed its joint
  value; otherwise it raises the cheapest item it is not standing on.
* ``Scripted`` replays an explicit per-round bid list, with an optional
  truthful fallback for items the script does not touch.  Replays of
  recorded human behavior (deliberate slow bidding, early exits) are
  expressed this way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .money import Ticks
from .rng import Rng
from .types import Allocation, BidderId, ItemId, Outcome


class ScriptError(ValueError):
    """A scripted bid is not a legal raise."""


class Action(str, enum.Enum):
    BID = "bid"
    HOLD = "hold"
    QUIT = "quit"


@dataclass(frozen=True)
class RoundRecord:
    round: int
    bidder: BidderId
    item: ItemId
    price: Ticks
    action: Action


@dataclass
class RoundLog:
    """Ordered trace of the auction, replayable into the final board."""

    records: list[RoundRecord] = field(default_factory=list)

    def add(self, round: int, bidder: BidderId, item: ItemId, price: Ticks, action: Action):
        self.records.append(RoundRecord(round, bidder, item, price, action))

    def replay_prices(self) -> dict[ItemId, tuple[BidderId, Ticks]]:
        """Standing bidder and price per item, reconstructed from bids alone."""
        board: dict[ItemId, tuple[BidderId, Ticks]] = {}
        for rec in self.records:
            if rec.action is Action.BID:
                board[rec.item] = (rec.bidder, rec.price)
        return board


@dataclass
class ItemState:
    price: Ticks = 0
    standing: BidderId | None = None
    open: bool = True


@dataclass
class PriceBoard:
    """Current per-item clock state."""

    items: dict[ItemId, ItemState]

    @classmethod
    def fresh(cls, items: Sequence[ItemId]) -> "PriceBoard":
        return cls({item: ItemState() for item in items})

    def price(self, item: ItemId) -> Ticks:
        return self.items[item].price

    def standing(self, item: ItemId) -> BidderId | None:
        return self.items[item].standing

    def place_bid(self, item: ItemId, bidder: BidderId, price: Ticks, step: Ticks):
        state = self.items[item]
        if not state.open:
            raise ScriptError(f"item {item} is closed")
        if price < state.price + step:
            raise ScriptError(
                f"bid {price} on {item} is below the minimum raise "
                f"{state.price + step}"
            )
        state.price = price
        state.standing = bidder


# -- strategy specifications (pure data) -------------------------------------


@dataclass(frozen=True)
class TruthfulSingleton:
    values: Mapping[ItemId, Ticks]


@dataclass(frozen=True)
class PackageBudget:
    bundle: frozenset[ItemId]
    joint_value: Ticks


@dataclass(frozen=True)
class ScriptedBidEntry:
    round: int
    item: ItemId
    price: Ticks


@dataclass(frozen=True)
class Scripted:
    entries: tuple[ScriptedBidEntry, ...]
    truthful: Mapping[ItemId, Ticks] = field(default_factory=dict)


StrategySpec = TruthfulSingleton | PackageBudget | Scripted


@dataclass(frozen=True)
class PackageDecision:
    action: Action
    item: ItemId | None = None
    price: Ticks | None = None


def package_budget_decision(
    board: PriceBoard,
    bidder: BidderId,
    bundle: frozenset[ItemId],
    joint_value: Ticks,
    step: Ticks,
) -> PackageDecision:
    """One turn of a joint-value bundle bidder.

    The prospective cost keeps items the bidder already stands on at
    their standing prices and adds one step to every other one.  Once
    that sum exceeds the joint value the bundle is unwinnable and the
    bidder quits all of it at once, even if it could still fight for a
    single item.
    """
    prospective = 0
    missing = []
    for item in sorted(bundle):
        state = board.items[item]
        if state.standing == bidder:
            prospective += state.price
        else:
            prospective += state.price + step
            missing.append(item)
    if prospective > joint_value:
        return PackageDecision(Action.QUIT)
    if not missing:
        return PackageDecision(Action.HOLD)
    target = min(missing, key=lambda it: (board.price(it) + step, it.index))
    return PackageDecision(Action.BID, target, board.price(target) + step)


class _TruthfulRunner:
    def __init__(self, bidder: BidderId, values: Mapping[ItemId, Ticks]):
        self.bidder = bidder
        self.values = dict(values)
        self.quit: set[ItemId] = set()

    def turn(self, board: PriceBoard, round: int, step: Ticks, log: RoundLog) -> bool:
        bid_placed = False
        for item in sorted(self.values):
            state = board.items[item]
            if state.standing == self.bidder:
                log.add(round, self.bidder, item, state.price, Action.HOLD)
                continue
            if item in self.quit:
                continue
            next_price = state.price + step
            if next_price < self.values[item]:
                board.place_bid(item, self.bidder, next_price, step)
                log.add(round, self.bidder, item, next_price, Action.BID)
                bid_placed = True
            else:
                self.quit.add(item)
                log.add(round, self.bidder, item, state.price, Action.QUIT)
        return bid_placed


class _PackageRunner:
    def __init__(self, bidder: BidderId, spec: PackageBudget):
        self.bidder = bidder
        self.spec = spec
        self.quit = False

    def turn(self, board: PriceBoard, round: int, step: Ticks, log: RoundLog) -> bool:
        if self.quit:
            return False
        decision = package_budget_decision(
            board, self.bidder, self.spec.bundle, self.spec.joint_value, step
        )
        if decision.action is Action.QUIT:
            self.quit = True
            for item in sorted(self.spec.bundle):
                log.add(round, self.bidder, item, board.price(item), Action.QUIT)
            return False
        if decision.action is Action.BID:
            board.place_bid(decision.item, self.bidder, decision.price, step)
            log.add(round, self.bidder, decision.item, decision.price, Action.BID)
            return True
        for item in sorted(self.spec.bundle):
            log.add(round, self.bidder, item, board.price(item), Action.HOLD)
        return False


class _ScriptedRunner:
    def __init__(self, bidder: BidderId, spec: Scripted):
        self.bidder = bidder
        self.by_round: dict[int, list[ScriptedBidEntry]] = {}
        for entry in spec.entries:
            self.by_round.setdefault(entry.round, []).append(entry)
        self.fallback = _TruthfulRunner(bidder, spec.truthful) if spec.truthful else None

    def turn(self, board: PriceBoard, round: int, step: Ticks, log: RoundLog) -> bool:
        bid_placed = False
        for entry in self.by_round.get(round, []):
            state = board.items[entry.item]
            if state.standing == self.bidder:
                raise ScriptError(
                    f"round {round}, {self.bidder}: already standing on {entry.item}"
                )
            try:
                board.place_bid(entry.item, self.bidder, entry.price, step)
            except ScriptError as exc:
                raise ScriptError(f"round {round}, {self.bidder}: {exc}") from None
            log.add(round, self.bidder, entry.item, entry.price, Action.BID)
            bid_placed = True
        if self.fallback is not None:
            bid_placed |= self.fallback.turn(board, round, step, log)
        return bid_placed


def _make_runner(bidder: BidderId, spec: StrategySpec):
    if isinstance(spec, TruthfulSingleton):
        return _TruthfulRunner(bidder, spec.values)
    if isinstance(spec, PackageBudget):
        return _PackageRunner(bidder, spec)
    if isinstance(spec, Scripted):
        return _ScriptedRunner(bidder, spec)
    raise TypeError(f"unknown strategy spec {spec!r}")


def _round_bound(strategies: Mapping[BidderId, StrategySpec], step: Ticks) -> int:
    bound = len(strategies) + 2
    for spec in strategies.values():
        if isinstance(spec, TruthfulSingleton):
            top = max(spec.values.values(), default=0)
        elif isinstance(spec, PackageBudget):
            top = spec.joint_value
        else:
            top = max((e.round * step for e in spec.entries), default=0)
            top = max(top, max(spec.truthful.values(), default=0))
        bound += -(-top // step)
    return bound


def run_saa(
    items: Sequence[ItemId],
    strategies: Mapping[BidderId, StrategySpec],
    step: Ticks,
    seed: int = 0,
) -> tuple[Outcome, RoundLog]:
    """Run the parallel ascending auction to quiescence.

    Deterministic: bidders act in index order, strategies hold no hidden
    randomness, and the seed is reserved for future stochastic agents.
    Returns the outcome plus the full replayable round log.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if not strategies:
        raise ValueError("at least one bidder is required")
    _ = Rng(seed)  # reserved for stochastic strategies
    board = PriceBoard.fresh(items)
    log = RoundLog()
    runners = [(b, _make_runner(b, s)) for b, s in sorted(strategies.items())]
    limit = _round_bound(strategies, step)
    round_no = 0
    while True:
        round_no += 1
        if round_no > limit:
            raise AssertionError(
                f"auction failed to settle within {limit} rounds"
            )  # pragma: no cover
        any_bid = False
        for _, runner in runners:
            any_bid |= runner.turn(board, round_no, step, log)
        if not any_bid:
            break
    for state in board.items.values():
        state.open = False
    assignment: dict[BidderId, set] = {}
    payments: dict[BidderId, Ticks] = {}
    for item, state in board.items.items():
        if state.standing is None:
            continue
        assignment.setdefault(state.standing, set()).add(frozenset({item}))
        payments[state.standing] = payments.get(state.standing, 0) + state.price
    outcome = Outcome(
        Allocation({b: frozenset(s) for b, s in assignment.items()}),
        payments,
        sum(payments.values()),
    )
    return outcome, log
