"""Curvature of S^1-invariant metrics on circle bundles over surfaces."""

from ._core import (
    BundlecurvError,
    Profile,
    catalog,
    conservation_residual,
    first_derivative_zero,
    flatness,
    holonomy_values,
    horizontal_sectional_curvature,
    integrate,
    lattice_reduce,
    nonexistence_certificate,
    render,
    schouten_frame,
    warp_from_profile,
)

__all__ = [
    "BundlecurvError",
    "Profile",
    "catalog",
    "conservation_residual",
    "first_derivative_zero",
    "flatness",
    "holonomy_values",
    "horizontal_sectional_curvature",
    "integrate",
    "lattice_reduce",
    "nonexistence_certificate",
    "render",
    "schouten_frame",
    "warp_from_profile",
]
