"""Points, lifts, and the diagonal flow on the modular surface.

The surface is the quotient of the upper half plane by SL(2,Z), realized
on the standard fundamental domain F = {|x| <= 1/2, x^2 + y^2 >= 1}. Its
normalized hyperbolic area measure (total mass pi/3) admits an exact
inverse-CDF sampler, and unit-tangent frames are represented as Iwasawa
lifts n(x) a(y) r(theta). The flow acts by left multiplication with
a(t) = diag(e^t, e^-t); the flowed frame's base point is the Moebius
image of i, folded back into F by the translate/invert reduction loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ratner_decay import _kernels
from ratner_decay.models import GroupElement

__all__ = [
    "SurfacePoint",
    "flow_point",
    "iwasawa_lift",
    "reduce_to_fundamental_domain",
    "sample_base_point",
    "sample_base_points",
]

# The closed fundamental domain, with one ulp-scale allowance: the exact
# sampler can land a hair below the boundary arc after rounding.
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the closed standard fundamental domain."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x!r}, {self.y!r})")
        if (
            abs(self.x) > 0.5 + _DOMAIN_SLACK
            or self.y <= 0.0
            or self.x**2 + self.y**2 < 1.0 - _DOMAIN_SLACK
        ):
            raise ValueError(
                f"({self.x!r}, {self.y!r}) is outside the fundamental domain "
                "(|x| <= 1/2, y > 0, x^2 + y^2 >= 1)"
            )

    def as_complex(self):
        return complex(self.x, self.y)


def sample_base_points(rng, count):
    """Draw `count` points of F distributed by normalized hyperbolic area.

    Exact inverse-CDF construction: the x-marginal of dmu = dx dy / y^2 on
    F is proportional to (1 - x^2)^(-1/2), so x = sin(theta) with theta
    uniform on [-pi/6, pi/6]; conditionally on x the density is
    proportional to y^(-2) on [sqrt(1-x^2), inf), inverted by
    y = sqrt(1-x^2) / (1-u) with u uniform on [0, 1). Returns (x, y)
    arrays. Two rng draws, in this order: theta, then u.
    """
    theta = rng.uniform(-math.pi / 6.0, math.pi / 6.0, count)
    u = rng.random(count)
    x = np.sin(theta)
    y = np.sqrt(1.0 - x * x) / (1.0 - u)
    return x, y


def sample_base_point(rng):
    """One sample from the normalized area measure on F."""
    x, y = sample_base_points(rng, 1)
    return SurfacePoint(float(x[0]), float(y[0]))


def iwasawa_lift(p, theta):
    """The frame n(x) a(y) r(theta) over the point p.

    Returns [[1, x], [0, 1]] [[sqrt(y), 0], [0, 1/sqrt(y)]] r(theta); its
    Moebius action on i recovers x + iy regardless of theta.
    """
    shear = GroupElement(1.0, p.x, 0.0, 1.0)
    sq = math.sqrt(p.y)
    scale = GroupElement(sq, 0.0, 0.0, 1.0 / sq)
    return (shear @ scale) @ GroupElement.rotation(theta)


def reduce_to_fundamental_domain(z):
    """Fold a point of the upper half plane into F.

    Repeats {x <- x - round(x); invert at the unit circle if inside}
    until the point lands in F; the imaginary part strictly increases at
    each inversion, so the loop terminates for every valid input.
    """
    z = complex(z)
    if not (z.imag > 0.0):
        raise ValueError(f"requires a point of the upper half plane, got {z!r}")
    x, y = _kernels.reduce_points(z.real, z.imag)
    return SurfacePoint(float(x), float(y))


def flow_point(g, t):
    """Base point of the flowed frame a(t) g, reduced into F."""
    x, y = _kernels.flow_points(
        np.array([g.a]), np.array([g.b]), np.array([g.c]), np.array([g.d]), t
    )
    return SurfacePoint(float(x[0]), float(y[0]))
