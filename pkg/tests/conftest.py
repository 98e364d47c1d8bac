"""Shared fixtures: independent oracles and random-instance generators.

The oracles here deliberately use different algorithms from the package:
winner determination is re-solved by filtering the raw powerset of bids,
so a bug in the package's pruned recursion cannot hide in the test.
"""

from itertools import combinations
from pathlib import Path

import pytest

from auctionlab.rng import Rng
from auctionlab.types import Allocation, BidProfile, BidderId, BundleBid, ItemId

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "src" / "auctionlab" / "scenarios"


def brute_force_winner(items: list[ItemId], profile: BidProfile):
    """Powerset maximizer with the same tie rule, written independently.

    Returns (welfare, item_vector, accepted bids).
    """
    bids = list(profile.bids)
    best_value = 0
    best_vector = tuple(-1 for _ in items)
    best_combo: tuple[BundleBid, ...] = ()
    for r in range(len(bids) + 1):
        for combo in combinations(bids, r):
            used: set[ItemId] = set()
            feasible = True
            total = 0
            for bid in combo:
                if used & bid.bundle:
                    feasible = False
                    break
                used |= bid.bundle
                total += bid.amount
            if not feasible:
                continue
            owner = {}
            for bid in combo:
                for item in bid.bundle:
                    owner[item] = bid.bidder.index
            vector = tuple(owner.get(item, -1) for item in items)
            if total > best_value or (total == best_value and vector < best_vector):
                best_value, best_vector, best_combo = total, vector, combo
    return best_value, best_vector, best_combo


def combo_to_allocation(combo) -> Allocation:
    assignment: dict[BidderId, set] = {}
    for bid in combo:
        assignment.setdefault(bid.bidder, set()).add(bid.bundle)
    return Allocation({b: frozenset(s) for b, s in assignment.items()})


def random_profile(
    rng: Rng,
    n_items: int,
    n_bidders: int,
    max_bundles: int = 2,
    max_amount: int = 5,
) -> tuple[list[ItemId], BidProfile]:
    """Small random OR profile with distinct bundles per bidder."""
    items = [ItemId(i) for i in range(n_items)]
    bids = []
    for b in range(n_bidders):
        bidder = BidderId(b, f"b{b}")
        bundles: set[frozenset] = set()
        for _ in range(rng.randint(1, max_bundles)):
            size = rng.randint(1, min(2, n_items))
            bundle = frozenset(
                items[rng.randint(0, n_items - 1)] for _ in range(size)
            )
            bundles.add(bundle)
        for bundle in sorted(bundles, key=lambda s: sorted(i.index for i in s)):
            bids.append(BundleBid(bidder, bundle, rng.randint(0, max_amount)))
    return items, BidProfile.of(bids)


@pytest.fixture
def seeded_rng():
    return Rng(0xA0C71)
