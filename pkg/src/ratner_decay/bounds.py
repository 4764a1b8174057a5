"""Headline decay inequalities and their verification sweeps.

Three layers of bounds, each with an evaluator and a checker:

* per-coefficient: |B_{n,m}(t)| <= (Kbar (m^2+n^2) + Ktilde) b(t) for an
  irreducible model with Casimir eigenvalue lambda;
* summed: |<v, T(a(t)) w>| for finitely supported weight vectors, paying
  Cauchy-Schwarz factors sqrt(2 zeta(2)), sqrt(2 zeta(6)) to collapse the
  double mode sum into Sobolev norms of v and w;
* lattice: the correlation bound Ktilde_Gamma ||v|| ||w|| b_Gamma(t) for
  mean-zero observables on a finite-area hyperbolic surface.

The general (reducible) representation case enters through
:class:`SpectralProfile`: the caller states whether the Casimir spectrum
meets (-1/4, 0) and, if so, supplies its supremum beta. The bound is then
the summed bound at a representative eigenvalue, because the constant
tables only distinguish "spectral gap" (everything at or below -1/4) from
"small eigenvalue beta". No direct-integral decomposition is attempted.

Checkers return a :class:`BoundReport` whose rows hold the observed value,
the analytic bound, and their ratio. The bound side is exact up to
rounding; the observed side carries quadrature noise, so reports pass when
every ratio stays below 1 + slack with a default slack of 1e-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from ratner_decay.constants import decay_envelope, lattice_envelope
from ratner_decay.fourier import pair_correlation, sobolev_norms, zeta_factors

__all__ = [
    "BoundGridRow",
    "BoundReport",
    "SpectralProfile",
    "check_lemma22",
    "corollary_bound",
    "lemma22_bound",
    "theorem1_bound",
    "theorem3_bound",
    "verify_theorem1",
]

# Observed magnitudes below this are treated as exact zeros when forming
# ratios, so orthogonal pairs do not report 0/0 noise.
ZERO_OBSERVED = 1e-14


@dataclass(frozen=True)
class SpectralProfile:
    """What a verification needs to know about a Casimir spectrum.

    `a_t_nonempty` states whether the spectrum meets the exceptional range
    (-1/4, 0); `beta` is the supremum of that intersection and is required
    exactly when the intersection is nonempty. The bound degrades as beta
    approaches 0 (the spectral gap closes), and beta = 0 would leave no
    decay at all, so beta must lie strictly inside (-1/4, 0).
    """

    a_t_nonempty: bool
    beta: Optional[float] = None

    def __post_init__(self):
        if self.a_t_nonempty:
            if self.beta is None:
                raise ValueError("beta is required when the exceptional spectrum is nonempty")
            if not (-0.25 < self.beta < 0.0):
                raise ValueError(f"beta must lie in (-1/4, 0), got {self.beta!r}")
        elif self.beta is not None:
            raise ValueError("beta is only meaningful when the exceptional spectrum is nonempty")


class BoundGridRow(NamedTuple):
    """One comparison point: observed magnitude against its bound.

    `n` and `m` identify the weight pair for per-coefficient sweeps and are
    None for summed-correlation sweeps.
    """

    t: float
    observed: float
    bound: float
    ratio: float
    n: Optional[int] = None
    m: Optional[int] = None


@dataclass(frozen=True)
class BoundReport:
    """Outcome of sweeping an inequality over a grid."""

    grid: tuple
    max_ratio: float
    passed: bool
    slack: float = 1e-6

    def worst(self):
        """The row achieving max_ratio (ties: first), None for empty grids."""
        if not self.grid:
            return None
        return max(self.grid, key=lambda row: row.ratio)


def _ratio(observed, bound):
    if observed < ZERO_OBSERVED:
        return 0.0
    if bound <= 0.0:
        return math.inf
    return observed / bound


def _report(rows, slack):
    max_ratio = max((row.ratio for row in rows), default=0.0)
    return BoundReport(
        grid=tuple(rows),
        max_ratio=max_ratio,
        passed=max_ratio <= 1.0 + slack,
        slack=slack,
    )


def _check_time(t):
    if not (t >= 1.0):
        raise ValueError(f"the decay bounds hold for t >= 1, got t={t!r}")


def lemma22_bound(lam, n, m, t):
    """The per-coefficient bound (Kbar (m^2+n^2) + Ktilde) b(t).

    Valid for t >= 1 (rejected otherwise); symmetric in (n, m) since the
    weights enter through m^2 + n^2 only.
    """
    _check_time(t)
    env = decay_envelope(lam)
    return (env.kbar * (m * m + n * n) + env.ktilde) * env.b(t)


def check_lemma22(model, n_range, m_range, t_grid, tol=1e-10, slack=1e-6):
    """Sweep |B_{n,m}(t)| against lemma22_bound over a weight/time grid.

    Evaluates the coefficients by quadrature, one block per time, and
    records every (t, n, m) tuple. Weights outside the model's support
    span trivial weight spaces; their rows show observed = 0.
    """
    ns = [int(n) for n in n_range]
    ms = [int(m) for m in m_range]
    times = [float(t) for t in t_grid]
    for t in times:
        _check_time(t)
    rows = []
    for t in times:
        block, _ = model.coefficient_block(ns, ms, t, tol=tol)
        for i, n in enumerate(ns):
            for j, m in enumerate(ms):
                observed = abs(block[i, j])
                bound = lemma22_bound(model.lam, n, m, t)
                rows.append(BoundGridRow(t, observed, bound, _ratio(observed, bound), n, m))
    return _report(rows, slack)


def theorem1_bound(lam, norms_v, norms_w, t):
    """The summed correlation bound for an irreducible piece.

    `norms_v` and `norms_w` are (||v||, ||L_W^3 v||) pairs as returned by
    sobolev_norms. The bound is the three-summand product form

        sqrt(2 zeta(2)) Kbar ||L^3 v|| (||w|| + sqrt(2 zeta(6)) ||L^3 w||) b(t)
      + sqrt(2 zeta(2)) Kbar (||v|| + sqrt(2 zeta(6)) ||L^3 v||) ||L^3 w|| b(t)
      + Ktilde (||v|| + sqrt(2 zeta(6)) ||L^3 v||) (||w|| + sqrt(2 zeta(6)) ||L^3 w||) b(t),

    which dominates sum |c_n| |d_m| (Kbar (m^2+n^2) + Ktilde) b(t) after
    Cauchy-Schwarz on the mode sums.
    """
    _check_time(t)
    norm_v, lw3_v = norms_v
    norm_w, lw3_w = norms_w
    if min(norm_v, lw3_v, norm_w, lw3_w) < 0.0:
        raise ValueError("norms must be nonnegative")
    env = decay_envelope(lam)
    sqrt_2zeta2, sqrt_2zeta6 = zeta_factors()
    ext_v = norm_v + sqrt_2zeta6 * lw3_v
    ext_w = norm_w + sqrt_2zeta6 * lw3_w
    summands = (
        sqrt_2zeta2 * env.kbar * lw3_v * ext_w
        + sqrt_2zeta2 * env.kbar * ext_v * lw3_w
        + env.ktilde * ext_v * ext_w
    )
    return summands * env.b(t)


def verify_theorem1(model, v, w, t_grid, tol=1e-10, slack=1e-6):
    """Sweep |<v, T(a(t)) w>| against theorem1_bound on a time grid."""
    times = [float(t) for t in t_grid]
    for t in times:
        _check_time(t)
    norms_v = sobolev_norms(v)
    norms_w = sobolev_norms(w)
    rows = []
    for t in times:
        observed = abs(pair_correlation(model, v, w, t, tol=tol))
        bound = theorem1_bound(model.lam, norms_v, norms_w, t)
        rows.append(BoundGridRow(t, observed, bound, _ratio(observed, bound)))
    return _report(rows, slack)


def theorem3_bound(profile, norms_v, norms_w, t):
    """The summed correlation bound for a general representation.

    With no exceptional spectrum the constants are those of the spectral
    gap case (any eigenvalue at or below -1/4 produces them, so -1/4 is
    used as the representative); otherwise they are the constants at the
    supremum beta. Either way the expression is theorem1_bound at the
    representative eigenvalue: Kbar equals 4C1/(9e^3) + 2C2/e + e for
    every negative eigenvalue, and Ktilde and b take their tabulated
    two-case values.
    """
    lam = profile.beta if profile.a_t_nonempty else -0.25
    return theorem1_bound(lam, norms_v, norms_w, t)


def corollary_bound(lambda1, norm_v, norm_w, t):
    """The lattice mixing bound Ktilde_Gamma ||v|| ||w|| b_Gamma(t).

    `lambda1` is the first Laplacian eigenvalue of the surface in the
    negative-spectrum convention (rejected when >= 0); `norm_v`, `norm_w`
    are L^2 norms of the mean-zero observables.
    """
    _check_time(t)
    if min(norm_v, norm_w) < 0.0:
        raise ValueError("norms must be nonnegative")
    env = lattice_envelope(lambda1)
    return env.ktilde_gamma * norm_v * norm_w * env.b(t)
