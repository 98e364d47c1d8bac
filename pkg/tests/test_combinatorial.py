import pytest

from auctionlab.combinatorial import (
    InstanceTooLarge,
    enumerate_allocations,
    run_generalized_vickrey,
    vcg_payments,
    winner_determination,
)
from auctionlab.rng import Rng
from auctionlab.single_item import run_vickrey
from auctionlab.types import Allocation, BidProfile, BidderId, BundleBid, ItemId
from conftest import brute_force_winner, random_profile

A, B, V, G, D = (
    BidderId(i, n) for i, n in enumerate(["Anna", "Boris", "Valery", "Grigory", "Dmitry"])
)
VY = BidderId(2, "Vyacheslav")


def items_(n):
    return [ItemId(i, f"project {i+1}") for i in range(n)]


def fair_profile(items):
    bundle = lambda *idx: frozenset(items[i] for i in idx)
    return BidProfile.of(
        [
            BundleBid(A, bundle(0, 1), 300),
            BundleBid(A, bundle(2), 90),
            BundleBid(A, bundle(3), 100),
            BundleBid(B, bundle(0), 150),
            BundleBid(B, bundle(1), 80),
            BundleBid(B, bundle(2), 80),
            BundleBid(B, bundle(3), 150),
            BundleBid(V, bundle(0), 200),
            BundleBid(V, bundle(1), 90),
            BundleBid(V, bundle(2), 0),
            BundleBid(V, bundle(3), 120),
            BundleBid(G, bundle(0), 60),
            BundleBid(G, bundle(1), 50),
            BundleBid(G, bundle(2), 100),
            BundleBid(G, bundle(3), 60),
            BundleBid(D, bundle(0), 0),
            BundleBid(D, bundle(1, 2), 180),
            BundleBid(D, bundle(3), 110),
        ]
    )


class TestEnumeration:
    def test_one_item_two_singletons(self):
        items = items_(1)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset({items[0]}), 10),
                BundleBid(B, frozenset({items[0]}), 20),
            ]
        )
        assert sum(1 for _ in enumerate_allocations(items, profile)) == 3

    def test_package_against_singletons(self):
        items = items_(2)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset(items), 30),
                BundleBid(B, frozenset({items[0]}), 10),
                BundleBid(B, frozenset({items[1]}), 10),
            ]
        )
        # empty; A{0,1}; B{0}; B{1}; B{0}+B{1}
        assert sum(1 for _ in enumerate_allocations(items, profile)) == 5

    def test_fair_table_count_matches_independent_counter(self):
        items = items_(4)
        profile = fair_profile(items)
        produced = list(enumerate_allocations(items, profile))
        assert len(produced) == len(set(produced))  # exactly once each

        def count(bids, used):
            if not bids:
                return 1
            head, *rest = bids
            total = count(rest, used)
            if not used & head.bundle:
                total += count(rest, used | head.bundle)
            return total

        assert len(produced) == count(list(profile.bids), frozenset())

    def test_size_bound(self):
        items = items_(13)
        profile = BidProfile.of([BundleBid(A, frozenset({items[0]}), 1)])
        with pytest.raises(InstanceTooLarge):
            list(enumerate_allocations(items, profile))
        winner_determination(items[:12], profile)  # at the bound is fine


class TestWinnerDetermination:
    def test_fair_case_allocation(self):
        items = items_(4)
        kstar, welfare = winner_determination(items, fair_profile(items))
        assert welfare.total == 550
        assert kstar.items_for(A) == frozenset(items[:2])
        assert kstar.items_for(G) == frozenset({items[2]})
        assert kstar.items_for(B) == frozenset({items[3]})

    def test_collusion_splits_the_package(self):
        items = items_(2)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset(items), 300),
                BundleBid(B, frozenset({items[0]}), 310),
                BundleBid(B, frozenset({items[1]}), 0),
                BundleBid(VY, frozenset({items[0]}), 0),
                BundleBid(VY, frozenset({items[1]}), 310),
            ]
        )
        kstar, welfare = winner_determination(items, profile)
        assert welfare.total == 620
        assert kstar.items_for(B) == frozenset({items[0]})
        assert kstar.items_for(VY) == frozenset({items[1]})

    def test_all_zero_bids_resolve_to_empty_allocation(self):
        items = items_(2)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset({items[0]}), 0),
                BundleBid(B, frozenset({items[1]}), 0),
            ]
        )
        kstar, welfare = winner_determination(items, profile)
        assert welfare.total == 0
        assert kstar == Allocation.empty()

    def test_matches_brute_force_on_random_instances(self, seeded_rng):
        for _ in range(200):
            n_items = seeded_rng.randint(1, 4)
            n_bidders = seeded_rng.randint(1, 5)
            items, profile = random_profile(seeded_rng, n_items, n_bidders)
            kstar, welfare = winner_determination(items, profile)
            oracle_value, oracle_vector, _ = brute_force_winner(items, profile)
            assert welfare.total == oracle_value
            assert kstar.item_vector(items) == oracle_vector


class TestVcgPayments:
    def test_fair_case_payments_from_the_formula(self):
        # Winners' externality prices, cross-checked against the brute-force
        # oracle below.  Anna's price is 2.90: without her the others reach
        # 2.0 + 0.9 + 1.0 + 1.5 = 5.4 and get 2.5 inside the chosen outcome.
        items = items_(4)
        profile = fair_profile(items)
        kstar, _ = winner_determination(items, profile)
        payments = vcg_payments(items, profile, kstar)
        assert payments[A] == 290
        assert payments[G] == 90
        assert payments[B] == 120
        assert payments[V] == 0 and payments[D] == 0

        without_anna, _, _ = brute_force_winner(items, profile.without(A))
        assert without_anna == 540
        assert payments[A] == without_anna - (100 + 150)

    def test_two_bidder_package_prelude(self):
        items = items_(2)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset(items), 300),
                BundleBid(B, frozenset({items[0]}), 150),
                BundleBid(B, frozenset({items[1]}), 80),
            ]
        )
        out = run_generalized_vickrey(items, profile)
        assert out.allocation.items_for(A) == frozenset(items)
        assert out.payments[A] == 230
        assert out.revenue == 230

    def test_three_party_collusion_pays_zero(self):
        items = items_(2)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset(items), 300),
                BundleBid(B, frozenset({items[0]}), 310),
                BundleBid(B, frozenset({items[1]}), 0),
                BundleBid(VY, frozenset({items[0]}), 0),
                BundleBid(VY, frozenset({items[1]}), 310),
            ]
        )
        out = run_generalized_vickrey(items, profile)
        assert out.payments[B] == 0
        assert out.payments[VY] == 0
        assert out.revenue == 0

    def test_five_bidder_collusion_totals(self):
        items = items_(4)
        bundle = lambda *idx: frozenset(items[i] for i in idx)
        profile = BidProfile.of(
            [
                BundleBid(A, bundle(0, 1), 300),
                BundleBid(A, bundle(2), 90),
                BundleBid(A, bundle(3), 100),
                BundleBid(B, bundle(0), 0),
                BundleBid(B, bundle(1), 310),
                BundleBid(B, bundle(2), 80),
                BundleBid(B, bundle(3), 150),
                BundleBid(V, bundle(0), 310),
                BundleBid(V, bundle(1), 0),
                BundleBid(V, bundle(2), 0),
                BundleBid(V, bundle(3), 120),
                BundleBid(G, bundle(0), 60),
                BundleBid(G, bundle(1), 50),
                BundleBid(G, bundle(2), 100),
                BundleBid(G, bundle(3), 60),
                BundleBid(D, bundle(0), 0),
                BundleBid(D, bundle(1, 2), 180),
                BundleBid(D, bundle(3), 110),
            ]
        )
        out = run_generalized_vickrey(items, profile)
        assert out.payments[V] == 60
        assert out.payments[B] == 200
        assert out.payments[G] == 90
        assert out.revenue == 350

    def test_collusion_strictly_cuts_revenue(self):
        # shill constructions beat the truthful runs of the same tables
        items = items_(4)
        fair = run_generalized_vickrey(items, fair_profile(items)).revenue
        assert fair == 500
        assert 350 < fair  # five-bidder ring
        assert 0 < 230  # pair-splitting ring versus the two-bidder prelude

    def test_losers_carry_explicit_zero(self):
        items = items_(1)
        profile = BidProfile.of(
            [
                BundleBid(A, frozenset({items[0]}), 10),
                BundleBid(B, frozenset({items[0]}), 4),
            ]
        )
        out = run_generalized_vickrey(items, profile)
        assert out.payments == {A: 4, B: 0}

    def test_empty_profile(self):
        out = run_generalized_vickrey(items_(2), BidProfile.of([]))
        assert out.revenue == 0
        assert out.payments == {}
        assert out.allocation == Allocation.empty()

    def test_payments_individually_rational_and_nonnegative(self, seeded_rng):
        for _ in range(150):
            items, profile = random_profile(
                seeded_rng, seeded_rng.randint(1, 4), seeded_rng.randint(1, 4)
            )
            out = run_generalized_vickrey(items, profile, true_values=profile)
            for bidder in profile.bidders():
                assert out.payments[bidder] >= 0
                accepted = sum(
                    profile.amount_for(bidder, bundle)
                    for bundle in out.allocation.bundles_for(bidder)
                )
                assert out.payments[bidder] <= accepted
                assert out.surplus[bidder] == accepted - out.payments[bidder]
                assert out.surplus[bidder] >= 0  # truthful bidding never loses

    def test_single_item_reduction_equals_second_price(self, seeded_rng):
        items = items_(1)
        for _ in range(100):
            n = seeded_rng.randint(1, 5)
            amounts = {BidderId(i): seeded_rng.randint(0, 50) for i in range(n)}
            profile = BidProfile.of(
                BundleBid(b, frozenset({items[0]}), amount)
                for b, amount in amounts.items()
            )
            vcg = run_generalized_vickrey(items, profile)
            vickrey = run_vickrey(amounts)
            if max(amounts.values()) == 0:
                assert vcg.revenue == 0  # tie rule leaves the lot unassigned
                continue
            assert vcg.allocation.winners() == vickrey.allocation.winners()
            winner = vickrey.allocation.winners()[0]
            assert vcg.payments[winner] == vickrey.payments[winner]
            assert vcg.revenue == vickrey.revenue


class TestTruthfulness:
    def test_truthful_reporting_weakly_dominates(self, seeded_rng):
        grid = 5
        for instance in range(120):
            n_items = seeded_rng.randint(1, 3)
            n_bidders = seeded_rng.randint(2, 4)
            items, truth = random_profile(
                seeded_rng, n_items, n_bidders, max_bundles=2, max_amount=grid
            )
            bidders = truth.bidders()
            deviator = bidders[instance % len(bidders)]
            own = [bid for bid in truth.bids if bid.bidder == deviator]
            others = [bid for bid in truth.bids if bid.bidder != deviator]

            def utility(profile):
                out = run_generalized_vickrey(items, profile, true_values=truth)
                return out.surplus.get(deviator, 0)

            truthful_utility = utility(truth)

            def deviations(prefix, remaining):
                if not remaining:
                    yield prefix
                    return
                head, *rest = remaining
                for amount in range(grid + 2):
                    yield from deviations(
                        prefix + [BundleBid(head.bidder, head.bundle, amount)], rest
                    )

            for deviated in deviations([], own):
                profile = BidProfile.of(others + deviated)
                assert truthful_utility >= utility(profile)
