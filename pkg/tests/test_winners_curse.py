import math
import statistics

import pytest

from auctionlab.rng import Rng
from auctionlab.types import BidderId
from auctionlab.winners_curse import (
    CELL_COUNT,
    CurseConfig,
    SurveyEstimate,
    Territory,
    curse_outcome,
    generate_territory,
    mean_estimate,
    median_estimate,
    run_curse_experiment,
    survey,
)

GOLDEN_SEED = 108


def estimates_of(counts):
    return [
        SurveyEstimate(BidderId(i), (0, 0), k, k * CELL_COUNT)
        for i, k in enumerate(counts)
    ]


class TestTerritory:
    def test_empty(self):
        territory = generate_territory(CurseConfig(n_deposits=0), Rng(1))
        assert territory.deposits == ()

    def test_golden_coordinates(self):
        territory = generate_territory(CurseConfig(n_deposits=2), Rng(42))
        rng = Rng(42)
        expected = tuple(
            (rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(2)
        )
        assert territory.deposits == expected
        assert all(0 <= x < 10 and 0 <= y < 10 for x, y in territory.deposits)

    def test_density_is_one_per_cell(self):
        # over many seeds the average count per unit cell approaches 1
        cfg = CurseConfig()
        total = 0
        seeds = 10_000
        root = Rng(314)
        for k in range(seeds):
            territory = generate_territory(cfg, root.split(k))
            x0, y0 = 4, 7
            total += sum(
                1 for x, y in territory.deposits if x0 < x < x0 + 1 and y0 < y < y0 + 1
            )
        assert abs(total / seeds - 1.0) < 0.02


class ScriptedCells(Rng):
    """Rng whose integer draws are forced; used to pin the sampled cell."""

    def __init__(self, cells):
        super().__init__(0)
        self._draws = iter(x for cell in cells for x in cell)

    def randint(self, lo, hi):
        return next(self._draws)


class TestSurvey:
    def test_single_containment(self):
        territory = Territory(10.0, ((0.5, 0.5),))
        cfg = CurseConfig(n_deposits=1, n_buyers=1)
        (est,) = survey(territory, cfg, ScriptedCells([(0, 0)]))
        assert est.cell == (0, 0)
        assert est.deposit_count == 1
        assert est.estimated_total == 100

    def test_deposit_outside_the_cell_not_counted(self):
        territory = Territory(10.0, ((0.5, 0.5),))
        cfg = CurseConfig(n_deposits=1, n_buyers=1)
        (est,) = survey(territory, cfg, ScriptedCells([(5, 5)]))
        assert est.deposit_count == 0

    def test_edge_deposit_counts_for_neither_cell(self):
        # both points sit exactly on borders of cell (3, 4): strict comparison
        territory = Territory(10.0, ((3.0, 4.5), (3.5, 5.0)))
        cfg = CurseConfig(n_deposits=2, n_buyers=2)
        left, right = survey(territory, cfg, ScriptedCells([(3, 4), (2, 4)]))
        assert left.cell == (3, 4) and left.deposit_count == 0
        assert right.cell == (2, 4) and right.deposit_count == 0

    def test_distinct_cells_never_repeat(self):
        cfg = CurseConfig(n_buyers=60, distinct_cells=True)
        territory = generate_territory(cfg, Rng(9))
        estimates = survey(territory, cfg, Rng(10))
        cells = [e.cell for e in estimates]
        assert len(set(cells)) == len(cells)

    def test_distinct_cells_capacity_checked(self):
        with pytest.raises(ValueError):
            CurseConfig(n_buyers=101, distinct_cells=True)

    def test_counts_match_binomial_oracle(self):
        # chi-square of observed counts against exact Binomial(100, 1/100)
        cfg = CurseConfig()
        root = Rng(777)
        observed = [0] * 5  # bins 0, 1, 2, 3, >=4
        draws = 0
        for k in range(250):
            child = root.split(k)
            territory = generate_territory(cfg, child)
            for est in survey(territory, cfg, child):
                observed[min(est.deposit_count, 4)] += 1
                draws += 1
        p = 1 / CELL_COUNT
        pmf = [
            math.comb(cfg.n_deposits, j) * p**j * (1 - p) ** (cfg.n_deposits - j)
            for j in range(4)
        ]
        pmf.append(1 - sum(pmf))
        statistic = sum(
            (observed[j] - draws * pmf[j]) ** 2 / (draws * pmf[j]) for j in range(5)
        )
        assert statistic < 18.47  # chi-square df=4 critical value at 0.001


class TestEstimators:
    def test_median_scales_the_central_count(self):
        assert median_estimate(estimates_of([1, 0, 1, 2, 1])) == 100.0

    def test_median_of_zero(self):
        assert median_estimate(estimates_of([0])) == 0.0

    def test_even_count_averages_middle_two(self):
        assert median_estimate(estimates_of([1, 2])) == 150.0

    def test_mean_matches_hand_arithmetic(self):
        counts = [1] * 36 + [2] * 4  # sums to 44 over 40 buyers
        assert mean_estimate(estimates_of(counts)) == 110.0

    def test_mean_degenerate_cases(self):
        assert mean_estimate(estimates_of([0, 0, 0])) == 0.0
        assert mean_estimate(estimates_of([1, 1, 1])) == 100.0


class TestOverpayment:
    CFG = CurseConfig()

    def test_reference_run_arithmetic(self):
        counts = [4, 4] + [1] * 38
        assert curse_outcome(estimates_of(counts), self.CFG) == 30_010_000

    def test_truthful_second_estimate_overpays_one_step(self):
        counts = [1, 1]  # both estimate the true 100
        assert curse_outcome(estimates_of(counts), self.CFG) == 10_000

    def test_zero_second_estimate_underpays(self):
        counts = [3, 0]
        y = curse_outcome(estimates_of(counts), self.CFG)
        assert y == self.CFG.step - self.CFG.n_deposits * self.CFG.unit_profit
        assert y < 0

    def test_monotonicity(self):
        base = curse_outcome(estimates_of([2, 2, 1]), self.CFG)
        higher_rating = curse_outcome(estimates_of([3, 3, 1]), self.CFG)
        assert higher_rating > base
        bigger_step = curse_outcome(
            estimates_of([2, 2, 1]), CurseConfig(step=20_000)
        )
        assert bigger_step > base
        richer_land = curse_outcome(
            estimates_of([2, 2, 1]), CurseConfig(n_deposits=150)
        )
        assert richer_land < base

    def test_needs_two_estimates(self):
        with pytest.raises(ValueError):
            curse_outcome(estimates_of([1]), self.CFG)


class TestExperiment:
    def test_golden_seed_reproduces_reference_run(self):
        summary = run_curse_experiment(CurseConfig(), 1, GOLDEN_SEED)
        first = summary.replications[0]
        assert first.median == 100.0
        assert first.mean == 110.0
        assert first.overpayment == 30_010_000

    def test_aggregates_and_unbiasedness(self):
        summary = run_curse_experiment(CurseConfig(), 1000, GOLDEN_SEED)
        assert 95 <= summary.mean_of_means <= 105
        assert summary.fraction_overpaid >= 0.95

    def test_bit_identical_reruns(self):
        a = run_curse_experiment(CurseConfig(), 50, 12)
        b = run_curse_experiment(CurseConfig(), 50, 12)
        assert a == b

    def test_replications_independent_of_total_count(self):
        # split seeding: the k-th replication is the same alone or in a batch
        long = run_curse_experiment(CurseConfig(), 40, 8)
        for k in (0, 17, 39):
            alone = run_curse_experiment(CurseConfig(), k + 1, 8)
            assert alone.replications[k] == long.replications[k]

    def test_scatter_points_exported(self):
        summary = run_curse_experiment(CurseConfig(), 2, 5)
        assert len(summary.deposits) == 100
        assert len(summary.buyer_cells) == 40
        assert all(0 <= cx <= 9 and 0 <= cy <= 9 for cx, cy in summary.buyer_cells)

    def test_mean_of_medians_tracks_the_truth_loosely(self):
        summary = run_curse_experiment(CurseConfig(), 300, 21)
        assert 80 <= statistics.fmean(r.median for r in summary.replications) <= 120
