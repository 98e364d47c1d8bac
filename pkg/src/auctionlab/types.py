"""Shared domain types for all mechanisms.

Everything here is immutable value data: safe to share between threads
and usable as dict keys.  Mechanisms are pure functions of these types
plus an explicit Rng.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .money import Ticks


@dataclass(frozen=True, order=True)
class BidderId:
    """A participant: dense index within the scenario plus a display name."""

    index: int
    name: str = ""

    def __str__(self) -> str:
        return self.name or f"bidder{self.index}"


@dataclass(frozen=True, order=True)
class ItemId:
    """An object for sale: dense index plus a display label."""

    index: int
    label: str = ""

    def __str__(self) -> str:
        return self.label or f"item{self.index}"


# A bundle is a non-empty set of items valued jointly.
Bundle = frozenset[ItemId]


def bundle_of(items: Iterable[ItemId]) -> Bundle:
    return frozenset(items)


@dataclass(frozen=True)
class BundleBid:
    """One bidder's offer on one bundle."""

    bidder: BidderId
    bundle: Bundle
    amount: Ticks

    def sort_key(self) -> tuple:
        return (self.bidder.index, sorted(i.index for i in self.bundle))


@dataclass(frozen=True)
class BidProfile:
    """All offers on the table, OR language.

    A bidder may win any pairwise-disjoint subset of its own bundles,
    with values adding up; it may not place two bids on the identical
    bundle.
    """

    bids: tuple[BundleBid, ...]

    @classmethod
    def of(cls, bids: Iterable[BundleBid]) -> "BidProfile":
        return cls(tuple(sorted(bids, key=BundleBid.sort_key)))

    def bidders(self) -> list[BidderId]:
        return sorted({b.bidder for b in self.bids})

    def without(self, bidder: BidderId) -> "BidProfile":
        return BidProfile(tuple(b for b in self.bids if b.bidder != bidder))

    def amount_for(self, bidder: BidderId, bundle: Bundle) -> Ticks | None:
        for b in self.bids:
            if b.bidder == bidder and b.bundle == bundle:
                return b.amount
        return None


@dataclass(frozen=True)
class Allocation:
    """Disjoint assignment of bundles to bidders; unassigned items are fine."""

    assignment: Mapping[BidderId, frozenset[Bundle]]

    @classmethod
    def empty(cls) -> "Allocation":
        return cls({})

    def winners(self) -> list[BidderId]:
        return sorted(b for b, bundles in self.assignment.items() if bundles)

    def bundles_for(self, bidder: BidderId) -> frozenset[Bundle]:
        return self.assignment.get(bidder, frozenset())

    def items_for(self, bidder: BidderId) -> frozenset[ItemId]:
        return frozenset(i for bundle in self.bundles_for(bidder) for i in bundle)

    def item_vector(self, items: list[ItemId]) -> tuple[int, ...]:
        """Per-item winning bidder index, -1 for unassigned.

        The deterministic tie key: among equal-welfare allocations the
        lexicographically smallest vector wins, so unassigned items and
        low bidder indices are preferred, in that order.
        """
        owner = {}
        for bidder, bundles in self.assignment.items():
            for bundle in bundles:
                for item in bundle:
                    owner[item] = bidder.index
        return tuple(owner.get(item, -1) for item in items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Allocation):
            return NotImplemented
        mine = {b: f for b, f in self.assignment.items() if f}
        theirs = {b: f for b, f in other.assignment.items() if f}
        return mine == theirs

    def __hash__(self) -> int:
        return hash(frozenset((b, f) for b, f in self.assignment.items() if f))


@dataclass(frozen=True)
class Outcome:
    """Result of one mechanism run.

    ``revenue`` always equals the sum of ``payments``.  Sealed and clock
    auctions list only the winner in ``payments``; the combinatorial
    mechanism lists every participant (losers at zero) so revenue is a
    total over all bidders.  ``surplus`` is populated when true
    valuations are known: value received minus payment, signed.
    """

    allocation: Allocation
    payments: Mapping[BidderId, Ticks]
    revenue: Ticks
    surplus: Mapping[BidderId, Ticks] = field(default_factory=dict)

    def payment_for(self, bidder: BidderId) -> Ticks:
        return self.payments.get(bidder, 0)


def validate_profile(profile: BidProfile, items: list[ItemId]) -> list[str]:
    """Check BidProfile invariants; each violation is one message.

    Violations are data, not faults: an empty report means the profile
    is usable by every mechanism.
    """
    known = set(items)
    report: list[str] = []
    seen: set[tuple[BidderId, Bundle]] = set()
    for bid in profile.bids:
        tag = f"{bid.bidder}: bundle {{{', '.join(sorted(str(i) for i in bid.bundle))}}}"
        if not bid.bundle:
            report.append(f"{bid.bidder}: empty bundle")
            continue
        if (bid.bidder, bid.bundle) in seen:
            report.append(f"{tag}: duplicate bid on the same bundle")
        seen.add((bid.bidder, bid.bundle))
        for item in bid.bundle:
            if item not in known:
                report.append(f"{tag}: unknown item index {item.index}")
        if bid.amount < 0:
            report.append(f"{tag}: negative amount {bid.amount}")
    return report
