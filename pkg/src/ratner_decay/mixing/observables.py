"""Mean-zero observables on the modular surface and their L^2 data.

Observables are real functions on the surface (constant along the fiber
angle). The builtin family combines a trigonometric factor in x with a
smooth bump in y supported in [1.1, 4]: vanishing near the boundary arc
and 1-periodicity in x make the function well-defined on the quotient,
and the x-factor integrates to zero exactly, giving a mean-zero
certificate by symmetry rather than by empirical recentering.

All integrals use the probability normalization of the hyperbolic area
measure: mu(F) = pi/3, and every inner product below divides by it. The
correlation bound scales consistently only when the Monte Carlo weights
and the L^2 norms use the same normalization, which this module enforces
by computing both from the same measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

__all__ = [
    "MU_F",
    "Observable",
    "builtin_observable",
    "observable_inner",
    "observable_mean",
    "surface_integral",
]

# Hyperbolic area of the fundamental domain.
MU_F = math.pi / 3.0

_CERTIFICATES = ("symmetry", "numeric")


@dataclass(frozen=True)
class Observable:
    """A real observable with precomputed L^2 data.

    `values` evaluates vectorized on coordinate arrays; `evaluate` is the
    pointwise form. `l2_norm` is the norm under the probability-normalized
    area measure. `mean_zero_certificate` states how the zero mean is
    known: "symmetry" for exact structural reasons (odd x-factor or a
    full-period x-integral of zero), "numeric" when it was checked by
    quadrature to 1e-6, None when the mean has not been certified at all
    (such observables are rejected by the correlation estimators, whose
    bound assumes mean zero). `y_support` bounds the support in y, used
    by the quadrature helpers.
    """

    id: str
    values: Callable
    l2_norm: float
    mean_zero_certificate: Optional[str]
    y_support: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.mean_zero_certificate is not None and self.mean_zero_certificate not in _CERTIFICATES:
            raise ValueError(
                f"unknown mean-zero certificate {self.mean_zero_certificate!r}; "
                f"expected one of {_CERTIFICATES} or None"
            )
        if not (math.isfinite(self.l2_norm) and self.l2_norm >= 0.0):
            raise ValueError(f"l2_norm must be a nonnegative real, got {self.l2_norm!r}")

    def evaluate(self, p):
        """The observable at a single surface point."""
        return float(self.values(np.array([p.x]), np.array([p.y]))[0])


def surface_integral(values, y_support=None):
    """(1 / mu(F)) int_F f dmu for a vectorized integrand f(x, y).

    Integrates dx dy / y^2 over the fundamental domain with adaptive
    quadrature; `y_support` restricts the y-range when the integrand has
    known compact support (required for unbounded supports, since the
    quadrature cannot see past its upper limit).
    """
    lo, hi = y_support if y_support is not None else (1.0, 50.0)

    def integrand(y, x):
        return float(values(np.array([x]), np.array([y]))[0]) / (y * y)

    def y_lower(x):
        return max(lo, math.sqrt(1.0 - x * x))

    value, _ = integrate.dblquad(
        integrand, -0.5, 0.5, y_lower, hi, epsabs=1e-12, epsrel=1e-12
    )
    return value / MU_F


def observable_mean(obs):
    """(1 / mu(F)) int_F v dmu by quadrature."""
    return surface_integral(obs.values, obs.y_support)


def observable_inner(v, w):
    """The probability-normalized L^2 pairing of two observables."""
    if v.y_support is None or w.y_support is None:
        support = v.y_support or w.y_support
    else:
        support = (max(v.y_support[0], w.y_support[0]), min(v.y_support[1], w.y_support[1]))
        if support[0] >= support[1]:
            return 0.0
    return surface_integral(lambda x, y: v.values(x, y) * w.values(x, y), support)


def _bump(y):
    """Smooth bump on (1.1, 4), zero elsewhere, C^infinity across the edges."""
    y = np.asarray(y, dtype=float)
    inside = (y > 1.1) & (y < 4.0)
    out = np.zeros(y.shape)
    ys = y[inside]
    out[inside] = np.exp(-1.0 / ((ys - 1.1) * (4.0 - ys)))
    return out


_BUMP_SUPPORT = (1.1, 4.0)


def _sinx_bump_values(x, y):
    return np.sin(2.0 * np.pi * np.asarray(x, dtype=float)) * _bump(y)


def _cosx_bump_values(x, y):
    return np.cos(2.0 * np.pi * np.asarray(x, dtype=float)) * _bump(y)


@lru_cache(maxsize=None)
def builtin_observable(name="sinx-bump"):
    """Construct a builtin observable by name.

    "sinx-bump" is sin(2 pi x) times the y-bump: odd in x, so its mean
    vanishes exactly by the x -> -x symmetry of F and the measure.
    "cosx-bump" is the even partner; its x-integral over the full period
    also vanishes exactly, recorded here with a numeric certificate
    checked at construction.
    """
    if name == "sinx-bump":
        norm = math.sqrt(observable_inner_values(_sinx_bump_values))
        return Observable(
            id="sinx-bump",
            values=_sinx_bump_values,
            l2_norm=norm,
            mean_zero_certificate="symmetry",
            y_support=_BUMP_SUPPORT,
        )
    if name == "cosx-bump":
        probe = Observable(
            id="cosx-bump",
            values=_cosx_bump_values,
            l2_norm=1.0,
            mean_zero_certificate="numeric",
            y_support=_BUMP_SUPPORT,
        )
        mean = observable_mean(probe)
        if abs(mean) > 1e-6:
            raise RuntimeError(f"cosx-bump failed its mean-zero check: integral {mean:.3e}")
        norm = math.sqrt(observable_inner_values(_cosx_bump_values))
        return Observable(
            id="cosx-bump",
            values=_cosx_bump_values,
            l2_norm=norm,
            mean_zero_certificate="numeric",
            y_support=_BUMP_SUPPORT,
        )
    raise ValueError(f"unknown builtin observable {name!r}; try 'sinx-bump' or 'cosx-bump'")


def observable_inner_values(values, y_support=_BUMP_SUPPORT):
    """Squared-norm helper for a bare vectorized integrand."""
    return surface_integral(lambda x, y: values(x, y) ** 2, y_support)
