"""Closed geodesics on Finsler space forms."""

from ._ncgeo import (  # noqa: F401
    ConfigError,
    DataError,
    DomainError,
    Error,
    IoError,
    NormalForm,
    PreconditionError,
    betti,
    bound_index_from_length,
    bound_mean_index,
    bound_min_length,
    find_geodesics,
    poincare_series_coeffs,
    reversibility,
    standard_metric_index,
    thm1_counting,
    thm3_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]
