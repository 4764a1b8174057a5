"""Geodesic-flow mixing on the modular surface: sampling, observables,
Monte Carlo correlation estimates, and verification against the bound."""

from .correlation import (
    SHARD_SIZE,
    MixingReport,
    MixingRow,
    estimate_correlation,
    resolve_threads,
    verify_corollary,
)
from .observables import (
    MU_F,
    Observable,
    builtin_observable,
    observable_inner,
    observable_mean,
    surface_integral,
)
from .surface import (
    SurfacePoint,
    flow_point,
    iwasawa_lift,
    reduce_to_fundamental_domain,
    sample_base_point,
    sample_base_points,
)

__all__ = [
    "MU_F",
    "SHARD_SIZE",
    "MixingReport",
    "MixingRow",
    "Observable",
    "SurfacePoint",
    "builtin_observable",
    "estimate_correlation",
    "flow_point",
    "iwasawa_lift",
    "observable_inner",
    "observable_mean",
    "reduce_to_fundamental_domain",
    "resolve_threads",
    "sample_base_point",
    "sample_base_points",
    "surface_integral",
    "verify_corollary",
]
