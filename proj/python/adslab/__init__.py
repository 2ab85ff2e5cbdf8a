"""Static vacuum identity checks and mass extraction."""

from ._adslab import (
    Error,
    catalog,
    default_tolerance,
    identity_names,
    mass,
    run_cli,
    verify,
)

__all__ = [
    "Error",
    "catalog",
    "default_tolerance",
    "identity_names",
    "mass",
    "run_cli",
    "verify",
]
