"""Single-item auction formats and the revenue-equivalence experiment.

Four classical formats plus the button-clock variant with irrevocable
exit.  Ascending and descending clocks are computed in closed form (the
event-driven trace of the price ladder), so large tick values cost
nothing.  Ties always go to the lowest bidder index.

Clock payments: the runner-up stays until its own value is reached, so
it exits at its value snapped up to the step grid.  Under
``SECOND_PRICE`` the winner pays that exit price; ``SECOND_PRICE_PLUS_STEP``
adds one step on top, matching the reading where the winner must outbid
the exit.  Scenarios pick their rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import rng as rng_mod
from .money import Ticks
from .rng import Rng
from .types import Allocation, BidderId, ItemId, Outcome

# The implied lot of every single-item auction.
LOT = ItemId(0, "lot")

# Value grid of the Monte Carlo experiment: U[0,1] draws land on a grid of
# one millionth, fine enough that discretization error is far below the
# experiment's tolerances.
VALUE_GRID = 10**6


class PaymentRule(str, enum.Enum):
    SECOND_PRICE = "second_price"
    SECOND_PRICE_PLUS_STEP = "second_price_plus_step"


class AuctionFormat(str, enum.Enum):
    FIRST_PRICE = "first_price"
    VICKREY = "vickrey"
    ENGLISH = "english"
    JAPANESE = "japanese"
    DUTCH = "dutch"


@dataclass(frozen=True)
class ClockConfig:
    """Price-clock parameters; ``start_price`` applies to descending clocks only."""

    step: Ticks
    payment_rule: PaymentRule = PaymentRule.SECOND_PRICE
    start_price: Ticks | None = None

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"clock step must be positive, got {self.step}")


def snap_up(amount: Ticks, step: Ticks) -> Ticks:
    """Smallest multiple of ``step`` that is >= amount."""
    return -(-amount // step) * step


def _argmax_bidder(amounts: Mapping[BidderId, Ticks]) -> BidderId:
    if not amounts:
        raise ValueError("at least one bidder is required")
    return min(amounts, key=lambda b: (-amounts[b], b.index))


def _runner_up(amounts: Mapping[BidderId, Ticks], winner: BidderId) -> Ticks | None:
    others = [v for b, v in amounts.items() if b != winner]
    return max(others) if others else None


def _single_outcome(
    winner: BidderId,
    payment: Ticks,
    values: Mapping[BidderId, Ticks] | None,
) -> Outcome:
    allocation = Allocation({winner: frozenset({frozenset({LOT})})})
    surplus = {}
    if values is not None and winner in values:
        surplus = {winner: values[winner] - payment}
    return Outcome(allocation, {winner: payment}, payment, surplus)


def run_first_price(
    bids: Mapping[BidderId, Ticks],
    true_values: Mapping[BidderId, Ticks] | None = None,
) -> Outcome:
    """Sealed bids; the highest bid wins and pays itself."""
    winner = _argmax_bidder(bids)
    return _single_outcome(winner, bids[winner], true_values)


def run_vickrey(
    bids: Mapping[BidderId, Ticks],
    true_values: Mapping[BidderId, Ticks] | None = None,
) -> Outcome:
    """Sealed bids; the highest bid wins and pays the best losing bid.

    A lone bidder pays nothing (there is no reserve price).
    """
    winner = _argmax_bidder(bids)
    second = _runner_up(bids, winner)
    return _single_outcome(winner, 0 if second is None else second, true_values)


def run_english_clock(
    values: Mapping[BidderId, Ticks],
    cfg: ClockConfig,
) -> Outcome:
    """Ascending clock from zero in steps of ``cfg.step``.

    Each bidder stays while the price has not reached its value, so the
    holder of the highest value wins at the runner-up's exit price
    (snapped up to the grid), plus one step under
    ``SECOND_PRICE_PLUS_STEP``.  The winner's surplus is recorded.
    """
    winner = _argmax_bidder(values)
    second = _runner_up(values, winner)
    if second is None:
        payment = 0
    else:
        payment = snap_up(second, cfg.step)
        if cfg.payment_rule is PaymentRule.SECOND_PRICE_PLUS_STEP:
            payment += cfg.step
    return _single_outcome(winner, payment, values)


def run_japanese(
    values: Mapping[BidderId, Ticks],
    cfg: ClockConfig,
) -> Outcome:
    """Ascending clock with irrevocable exit.

    The clock ticks through the grid; a bidder exits the moment the
    price reaches its value and cannot return.  The trace is replayed
    event by event; the last bidder standing pays the price at which the
    final rival left.  On grid-aligned values this coincides with
    :func:`run_english_clock` under ``SECOND_PRICE``.
    """
    if not values:
        raise ValueError("at least one bidder is required")
    exit_price = {b: snap_up(v, cfg.step) for b, v in values.items()}
    remaining = set(values)
    last_exit = 0
    for price in sorted(set(exit_price.values())):
        leaving = {b for b in remaining if exit_price[b] == price}
        if leaving == remaining:
            # simultaneous final exits: the lowest index is deemed to hold on
            winner = min(leaving, key=lambda b: b.index)
            payment = price if len(values) > 1 else 0
            return _single_outcome(winner, payment, values)
        remaining -= leaving
        last_exit = price
        if len(remaining) == 1:
            winner = next(iter(remaining))
            return _single_outcome(winner, last_exit, values)
    raise AssertionError("clock must terminate")  # pragma: no cover


def run_dutch(
    stop_prices: Mapping[BidderId, Ticks],
    cfg: ClockConfig,
) -> Outcome:
    """Descending clock from ``cfg.start_price`` in steps of ``cfg.step``.

    The first bidder whose stop price is reached buys at the current
    announcement, i.e. at the first grid price at or below its stop: a
    buyer never pays above its stop.  Two stops inside the same grid gap
    are reached together and go to the lower index.
    """
    if not stop_prices:
        raise ValueError("at least one bidder is required")
    if cfg.start_price is None:
        raise ValueError("a descending clock needs a start price")
    top = max(stop_prices.values())
    if cfg.start_price < top:
        raise ValueError(
            f"start price {cfg.start_price} is below the highest stop {top}"
        )
    # First grid announcement start - k*step that is <= the best stop.
    gap = cfg.start_price - top
    price = cfg.start_price - snap_up(gap, cfg.step)
    price = max(price, 0)
    acceptors = [b for b, stop in stop_prices.items() if stop >= price]
    winner = min(acceptors, key=lambda b: b.index)
    return _single_outcome(winner, price, None)


def bne_bid_uniform(value: Ticks, n_bidders: int) -> Ticks:
    """Symmetric equilibrium bid for i.i.d. uniform private values.

    With n bidders the equilibrium shades the value by (n-1)/n; the
    result rounds down to the tick grid (conservative, deterministic).
    """
    if n_bidders < 2:
        raise ValueError(f"equilibrium bidding needs >= 2 bidders, got {n_bidders}")
    if value < 0:
        raise ValueError(f"value must be >= 0, got {value}")
    return ((n_bidders - 1) * value) // n_bidders


@dataclass(frozen=True)
class RevenueEstimate:
    """Monte Carlo revenue of one format, in units of the value scale."""

    format: AuctionFormat
    n_bidders: int
    replications: int
    seed: int
    mean_revenue: float
    std_error: float


def estimate_revenue(
    format: AuctionFormat,
    n_bidders: int,
    replications: int,
    seed: int,
) -> RevenueEstimate:
    """Seeded Monte Carlo of expected seller revenue.

    Each replication draws i.i.d. U[0,1) values on the tick grid from
    the split stream ``Rng(seed).split(k)``, so results do not depend on
    batching or worker count.  Sealed-descending formats (first-price,
    Dutch) are played at the equilibrium bid; ascending/second-price
    formats are played truthfully.  The clock formats run on a one-tick
    grid, where the ascending clock's price equals the runner-up value
    and the descending clock stops exactly on the winner's bid.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    if n_bidders < 2:
        raise ValueError(f"the experiment needs >= 2 bidders, got {n_bidders}")
    uniforms = rng_mod.child_uniforms(seed, replications, n_bidders)
    values = np.floor(uniforms * VALUE_GRID).astype(np.int64)
    if format in (AuctionFormat.FIRST_PRICE, AuctionFormat.DUTCH):
        top = values.max(axis=1)
        revenue_ticks = ((n_bidders - 1) * top) // n_bidders
    elif format in (AuctionFormat.VICKREY, AuctionFormat.ENGLISH, AuctionFormat.JAPANESE):
        revenue_ticks = np.sort(values, axis=1)[:, -2]
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown format {format}")
    revenue = revenue_ticks.astype(np.float64) / VALUE_GRID
    mean = float(revenue.mean())
    if replications > 1:
        se = float(revenue.std(ddof=1) / math.sqrt(replications))
    else:
        se = 0.0
    return RevenueEstimate(format, n_bidders, replications, seed, mean, se)


def replay_revenue_once(format: AuctionFormat, n_bidders: int, seed: int, k: int) -> Ticks:
    """Revenue of replication ``k`` via the scalar Rng and the real mechanisms.

    The independent slow path behind :func:`estimate_revenue`: draws the
    same values from the same split stream and runs the actual auction.
    """
    child = Rng(seed).split(k)
    values = {
        BidderId(i): int(child.random() * VALUE_GRID) for i in range(n_bidders)
    }
    if format is AuctionFormat.FIRST_PRICE:
        bids = {b: bne_bid_uniform(v, n_bidders) for b, v in values.items()}
        return run_first_price(bids, values).revenue
    if format is AuctionFormat.DUTCH:
        stops = {b: bne_bid_uniform(v, n_bidders) for b, v in values.items()}
        cfg = ClockConfig(step=1, start_price=VALUE_GRID)
        return run_dutch(stops, cfg).revenue
    if format is AuctionFormat.VICKREY:
        return run_vickrey(values, values).revenue
    if format is AuctionFormat.ENGLISH:
        return run_english_clock(values, ClockConfig(step=1)).revenue
    if format is AuctionFormat.JAPANESE:
        return run_japanese(values, ClockConfig(step=1)).revenue
    raise ValueError(f"unknown format {format}")  # pragma: no cover
