"""Radial standing waves of coupled elliptic systems, computed by charge-constrained minimization."""

from ._core import (
    ConfigError,
    Grid,
    Potential,
    __version__,
    charge_from_profile,
    check,
    check_h3,
    hylomorphy_scan,
    rearrange,
    reduced_energy,
    reduced_gradient,
    run_cli,
    scan,
    solve,
    symmetric_decreasing,
)

__all__ = [
    "ConfigError",
    "Grid",
    "Potential",
    "__version__",
    "charge_from_profile",
    "check",
    "check_h3",
    "hylomorphy_scan",
    "rearrange",
    "reduced_energy",
    "reduced_gradient",
    "run_cli",
    "scan",
    "solve",
    "symmetric_decreasing",
]
