"""Combinatorial auction: exhaustive winner determination and VCG payments.

Instances here are tiny (a handful of items and bidders), so the welfare
maximization enumerates feasible allocations exactly instead of calling
an integer-programming solver.  Exactness matters more than scale: every
payment must land on the tick grid, and an independently written
brute-force maximizer can confirm every answer.

Each winner pays the externality it imposes: the best welfare the others
could reach without it, minus what the others actually get in the chosen
allocation.  Losers pay zero but are carried explicitly so revenue is a
sum over all participants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .money import Ticks
from .types import Allocation, BidderId, BidProfile, BundleBid, ItemId, Outcome

DEFAULT_MAX_ITEMS = 12


class InstanceTooLarge(ValueError):
    """The item count exceeds the exhaustive-search bound."""


@dataclass(frozen=True)
class WelfareValue:
    """Total accepted bid value of an allocation."""

    total: Ticks


def _check_size(items: list[ItemId], max_items: int) -> None:
    if len(items) > max_items:
        raise InstanceTooLarge(
            f"{len(items)} items exceed the exhaustive-search bound of {max_items}"
        )


def _item_masks(items: list[ItemId], profile: BidProfile) -> list[tuple[BundleBid, int]]:
    position = {item: i for i, item in enumerate(items)}
    masked = []
    for bid in profile.bids:
        mask = 0
        for item in bid.bundle:
            mask |= 1 << position[item]
        masked.append((bid, mask))
    return masked


def _to_allocation(accepted: list[BundleBid]) -> Allocation:
    assignment: dict[BidderId, set] = {}
    for bid in accepted:
        assignment.setdefault(bid.bidder, set()).add(bid.bundle)
    return Allocation({b: frozenset(s) for b, s in assignment.items()})


def enumerate_allocations(
    items: list[ItemId],
    profile: BidProfile,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> Iterator[Allocation]:
    """Yield every feasible allocation exactly once, the empty one included.

    Feasible means each accepted bundle is a bid of its own bidder and
    accepted bundles are pairwise disjoint across the whole allocation.
    """
    _check_size(items, max_items)
    masked = _item_masks(items, profile)

    def recurse(i: int, used: int, accepted: list[BundleBid]) -> Iterator[Allocation]:
        if i == len(masked):
            yield _to_allocation(accepted)
            return
        bid, mask = masked[i]
        yield from recurse(i + 1, used, accepted)
        if not used & mask:
            accepted.append(bid)
            yield from recurse(i + 1, used | mask, accepted)
            accepted.pop()

    yield from recurse(0, 0, [])


def winner_determination(
    items: list[ItemId],
    profile: BidProfile,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> tuple[Allocation, WelfareValue]:
    """Welfare-maximizing allocation with the deterministic tie rule.

    Among equal-welfare allocations the lexicographically smallest
    item-to-bidder vector wins (unassigned before assigned, then lowest
    bidder index), so all-zero bids resolve to the empty allocation.
    """
    _check_size(items, max_items)
    masked = _item_masks(items, profile)
    best_value = 0
    best_vector = Allocation.empty().item_vector(items)
    best_accepted: list[BundleBid] = []

    def recurse(i: int, used: int, value: Ticks, accepted: list[BundleBid]) -> None:
        nonlocal best_value, best_vector, best_accepted
        if i == len(masked):
            if value > best_value:
                best_value, best_accepted = value, list(accepted)
                best_vector = _to_allocation(accepted).item_vector(items)
            elif value == best_value:
                vector = _to_allocation(accepted).item_vector(items)
                if vector < best_vector:
                    best_vector, best_accepted = vector, list(accepted)
            return
        bid, mask = masked[i]
        recurse(i + 1, used, value, accepted)
        if not used & mask:
            accepted.append(bid)
            recurse(i + 1, used | mask, value + bid.amount, accepted)
            accepted.pop()

    recurse(0, 0, 0, [])
    return _to_allocation(best_accepted), WelfareValue(best_value)


def _accepted_total(profile: BidProfile, allocation: Allocation, bidder: BidderId) -> Ticks:
    total = 0
    for bundle in allocation.bundles_for(bidder):
        amount = profile.amount_for(bidder, bundle)
        if amount is None:
            raise ValueError(f"{bidder} was assigned a bundle it never bid on")
        total += amount
    return total


def vcg_payments(
    items: list[ItemId],
    profile: BidProfile,
    kstar: Allocation,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> dict[BidderId, Ticks]:
    """Per-winner externality prices for the chosen allocation ``kstar``.

    A winner pays the optimal welfare of everyone else with its bids
    removed, minus everyone else's welfare inside ``kstar``.  All other
    participants pay zero.
    """
    total_welfare = sum(_accepted_total(profile, kstar, b) for b in kstar.winners())
    payments: dict[BidderId, Ticks] = {}
    for bidder in profile.bidders():
        if bidder not in kstar.winners():
            payments[bidder] = 0
            continue
        _, without = winner_determination(items, profile.without(bidder), max_items)
        others_in_kstar = total_welfare - _accepted_total(profile, kstar, bidder)
        payments[bidder] = without.total - others_in_kstar
    return payments


def run_generalized_vickrey(
    items: list[ItemId],
    profile: BidProfile,
    true_values: BidProfile | None = None,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> Outcome:
    """Winner determination plus VCG pricing in one outcome.

    With ``true_values`` supplied, each bidder's surplus is its true
    value for the bundles it won minus its payment (zero bundles, zero
    payment for losers).
    """
    if not profile.bids:
        return Outcome(Allocation.empty(), {}, 0, {})
    kstar, _ = winner_determination(items, profile, max_items)
    payments = vcg_payments(items, profile, kstar, max_items)
    revenue = sum(payments.values())
    surplus: dict[BidderId, Ticks] = {}
    if true_values is not None:
        for bidder in profile.bidders():
            value = 0
            for bundle in kstar.bundles_for(bidder):
                amount = true_values.amount_for(bidder, bundle)
                value += amount if amount is not None else 0
            surplus[bidder] = value - payments.get(bidder, 0)
    return Outcome(kstar, payments, revenue, surplus)
