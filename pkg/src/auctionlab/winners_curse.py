"""Common-value survey experiment: estimating a territory from tiny samples.

A square territory of side 10 holds point deposits of equal unit profit.
Each buyer surveys a single 1x1 cell, counts the deposits strictly
inside it, and extrapolates by the cell count (one deposit per cell
implies one hundred across the territory).  Selling the territory by an
ascending auction then prices it at the second-highest estimate plus one
step, which overshoots the true worth whenever the sample was lucky:
the winner's curse.

Deposits exactly on a cell edge count for neither adjacent cell; the
event has probability zero and keeping the comparison strict makes the
counting rule unambiguous.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .money import Ticks
from .rng import Rng
from .types import BidderId

SIDE = 10
CELL_COUNT = SIDE * SIDE


@dataclass(frozen=True)
class CurseConfig:
    n_deposits: int = 100
    n_buyers: int = 40
    unit_profit: Ticks = 100_000
    step: Ticks = 10_000
    distinct_cells: bool = False

    def __post_init__(self):
        if self.n_deposits < 0:
            raise ValueError("deposit count must be >= 0")
        if self.n_buyers < 1:
            raise ValueError("at least one buyer is required")
        if self.unit_profit <= 0 or self.step <= 0:
            raise ValueError("unit profit and step must be positive")
        if self.distinct_cells and self.n_buyers > CELL_COUNT:
            raise ValueError(
                f"{self.n_buyers} buyers cannot pick distinct cells out of {CELL_COUNT}"
            )


@dataclass(frozen=True)
class Territory:
    side: float
    deposits: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SurveyEstimate:
    buyer: BidderId
    cell: tuple[int, int]
    deposit_count: int
    estimated_total: int  # deposit_count scaled by the cell count


def generate_territory(cfg: CurseConfig, rng: Rng) -> Territory:
    """Scatter ``n_deposits`` i.i.d. uniform points over the square."""
    deposits = []
    for _ in range(cfg.n_deposits):
        x = rng.uniform(0, SIDE)
        y = rng.uniform(0, SIDE)
        deposits.append((x, y))
    return Territory(float(SIDE), tuple(deposits))


def survey(territory: Territory, cfg: CurseConfig, rng: Rng) -> list[SurveyEstimate]:
    """Each buyer samples one unit cell and extrapolates its count.

    Cells are drawn with replacement by default; with ``distinct_cells``
    buyers avoid already-surveyed ground (drawn by rejection, still
    deterministic under the seeded stream).
    """
    estimates = []
    taken: set[tuple[int, int]] = set()
    for i in range(cfg.n_buyers):
        while True:
            cx = rng.randint(0, SIDE - 1)
            cy = rng.randint(0, SIDE - 1)
            if not cfg.distinct_cells or (cx, cy) not in taken:
                break
        taken.add((cx, cy))
        k = 0
        for x, y in territory.deposits:
            if cx < x < cx + 1 and cy < y < cy + 1:
                k += 1
        estimates.append(SurveyEstimate(BidderId(i), (cx, cy), k, k * CELL_COUNT))
    return estimates


def median_estimate(estimates: list[SurveyEstimate]) -> float:
    """Median of the extrapolated totals (even counts average the middle two)."""
    return float(statistics.median(e.estimated_total for e in estimates))


def mean_estimate(estimates: list[SurveyEstimate]) -> float:
    """Arithmetic mean of the extrapolated totals."""
    return statistics.fmean(e.estimated_total for e in estimates)


def curse_outcome(estimates: list[SurveyEstimate], cfg: CurseConfig) -> Ticks:
    """Winner's overpayment under ascending-auction pricing, signed.

    The winner pays the second-highest estimate times the unit profit,
    plus one step; subtracting the territory's true worth leaves the
    overpayment.  Positive means the winner paid more than the land can
    return.
    """
    if len(estimates) < 2:
        raise ValueError("the second-highest estimate needs at least two buyers")
    rating_2 = sorted(e.estimated_total for e in estimates)[-2]
    return rating_2 * cfg.unit_profit + cfg.step - cfg.n_deposits * cfg.unit_profit


@dataclass(frozen=True)
class CurseReplication:
    replication: int
    median: float
    mean: float
    overpayment: Ticks


@dataclass(frozen=True)
class CurseSummary:
    config: CurseConfig
    seed: int
    replications: tuple[CurseReplication, ...]
    mean_of_medians: float
    mean_of_means: float
    fraction_overpaid: float
    # scatter data of replication 0, for external plotting
    deposits: tuple[tuple[float, float], ...] = field(default_factory=tuple)
    buyer_cells: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def run_curse_experiment(cfg: CurseConfig, replications: int, seed: int) -> CurseSummary:
    """Replicated survey-and-auction experiment, bit-reproducible by seed.

    Replication ``k`` runs entirely on the split stream ``split(k)``
    (territory first, then the surveys), so replications are independent
    and any parallel split-seeded execution agrees with the sequential
    one exactly.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    root = Rng(seed)
    rows = []
    first_points: tuple = ()
    first_cells: tuple = ()
    for k in range(replications):
        child = root.split(k)
        territory = generate_territory(cfg, child)
        estimates = survey(territory, cfg, child)
        rows.append(
            CurseReplication(
                k,
                median_estimate(estimates),
                mean_estimate(estimates),
                curse_outcome(estimates, cfg),
            )
        )
        if k == 0:
            first_points = territory.deposits
            first_cells = tuple(e.cell for e in estimates)
    return CurseSummary(
        config=cfg,
        seed=seed,
        replications=tuple(rows),
        mean_of_medians=statistics.fmean(r.median for r in rows),
        mean_of_means=statistics.fmean(r.mean for r in rows),
        fraction_overpaid=sum(1 for r in rows if r.overpayment > 0) / len(rows),
        deposits=first_points,
        buyer_cells=first_cells,
    )
