"""Rank-based sampling designs for binary data.

Thin wrapper over the compiled ``_msrss`` extension.
"""

from ._msrss import (
    __version__,
    draw_msrss,
    estimate_proportion,
    exact_efficiency,
    load_csv,
    msrss_strata,
    simulate_efficiency,
    spearman,
    wald_interval,
)

__all__ = [
    "__version__",
    "draw_msrss",
    "estimate_proportion",
    "exact_efficiency",
    "load_csv",
    "msrss_strata",
    "simulate_efficiency",
    "spearman",
    "wald_interval",
]
