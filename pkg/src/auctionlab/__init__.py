"""Deterministic auction mechanisms and seeded market experiments.

Core modules:

* :mod:`auctionlab.money` -- exact integer tick arithmetic
* :mod:`auctionlab.rng` -- reproducible splitmix64 streams
* :mod:`auctionlab.single_item` -- sealed and clock single-item formats
* :mod:`auctionlab.combinatorial` -- winner determination and VCG pricing
* :mod:`auctionlab.ascending` -- simultaneous ascending auction
* :mod:`auctionlab.winners_curse` -- common-value survey experiment
* :mod:`auctionlab.scenarios` -- JSON scenario schema and dispatch
* :mod:`auctionlab.service` -- FastAPI app wrapping everything
* :mod:`auctionlab.cli` -- thin HTTP client
"""

__version__ = "0.1.0"

from .money import PrecisionError, Ticks, format_ticks, ticks_from_decimal
from .rng import Rng
from .types import (
    Allocation,
    BidProfile,
    BidderId,
    Bundle,
    BundleBid,
    ItemId,
    Outcome,
    validate_profile,
)

__all__ = [
    "__version__",
    "Allocation",
    "BidProfile",
    "BidderId",
    "Bundle",
    "BundleBid",
    "ItemId",
    "Outcome",
    "PrecisionError",
    "Rng",
    "Ticks",
    "format_ticks",
    "ticks_from_decimal",
    "validate_profile",
]
