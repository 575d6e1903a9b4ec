"""Python bindings for the ridgepursuit library."""

from ._core import (
    Activation,
    InputError,
    Regime,
    RidgeModel,
    RidgeUnit,
    SizeError,
    cover_count,
    cover_count_library,
    fit_lpgp,
    gamma_tau,
    pen_highdim,
    pen_nonoise,
    run_cli,
    tail_tn,
    truncate,
)

__all__ = [
    "Activation",
    "InputError",
    "Regime",
    "RidgeModel",
    "RidgeUnit",
    "SizeError",
    "cover_count",
    "cover_count_library",
    "fit_lpgp",
    "gamma_tau",
    "pen_highdim",
    "pen_nonoise",
    "run_cli",
    "tail_tn",
    "truncate",
]
