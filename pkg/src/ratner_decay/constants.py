"""Closed-form constants and decay envelopes for diagonal-flow matrix coefficients.

Every quantity here is an explicit function of the Casimir eigenvalue lambda
(or of the first Laplacian eigenvalue lambda1 for the lattice variant) and is
evaluated in double precision from its closed form. Nothing in this module is
fitted or tabulated: the point of the library is that these constants are
exact, so they are recomputed from first principles on every call and the test
suite compares them against independent arbitrary-precision evaluations.

Sign conventions: Casimir/Laplacian eigenvalues of nonconstant eigenfunctions
are *negative*. The three regimes are lambda <= -1/4 (tempered oscillatory),
-1/4 < lambda < 0 (complementary range, slower decay) and lambda >= 0
(lowest-weight families, fastest decay).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

__all__ = [
    "CasimirCase",
    "BaseConstants",
    "DecayEnvelope",
    "EnvelopePoint",
    "LatticeEnvelope",
    "base_constants",
    "casimir_case",
    "characteristic_roots",
    "decay_envelope",
    "envelope_b",
    "envelope_point",
    "lattice_envelope",
]


class CasimirCase(enum.Enum):
    """Partition of the real line by Casimir eigenvalue.

    The boundary conventions are fixed once and for all: lambda = -1/4 belongs
    to AT_OR_BELOW_QUARTER and lambda = 0 to NON_NEGATIVE.
    """

    AT_OR_BELOW_QUARTER = "at_or_below_quarter"
    COMPLEMENTARY = "complementary"
    NON_NEGATIVE = "non_negative"


def casimir_case(lam: float) -> CasimirCase:
    """Classify a Casimir eigenvalue into its decay regime."""
    if not math.isfinite(lam):
        raise ValueError(f"Casimir eigenvalue must be finite, got {lam!r}")
    if lam <= -0.25:
        return CasimirCase.AT_OR_BELOW_QUARTER
    if lam < 0.0:
        return CasimirCase.COMPLEMENTARY
    return CasimirCase.NON_NEGATIVE


@dataclass(frozen=True)
class BaseConstants:
    """The scalar constants entering the coefficient and forcing bounds.

    C1 bounds the first forcing term, C2 the second; C1bar/C2bar bound the two
    Duhamel integrals; the Q family controls the strongly oscillatory regime
    (Q1..Q3 via the integration-by-parts decomposition, Qtilde/Qbar the
    combined integral bound, Qbar1/Qtilde1 the constant-term bounds).
    """

    C1: float
    C2: float
    C1bar: float
    C2bar: float
    Q1: float
    Q2: float
    Q3: float
    Qtilde: float
    Qbar: float
    Qbar1: float
    Qtilde1: float


def base_constants() -> BaseConstants:
    """Evaluate all base constants from their closed forms.

    Returns
    -------
    BaseConstants
        Deterministic double-precision values; no cached or hard-coded
        decimals are involved.
    """
    e = math.e
    e3 = e**3
    c1 = 1.0 / (1.0 - math.exp(-4.0))
    c2 = 2.0 * c1 * (1.0 + 2.0 * c1 * math.exp(-2.0) + 2.0 * c1 * math.exp(-4.0))
    q1 = 4.0 * c1 * c1
    q2 = 4.0 * c1 * c1 / (3.0 * e3)
    q3 = q1 / e3
    return BaseConstants(
        C1=c1,
        C2=c2,
        C1bar=c1 / (9.0 * e3),
        C2bar=c2 / e,
        Q1=q1,
        Q2=q2,
        Q3=q3,
        Qtilde=2.0 * (q2 + q3),
        Qbar=c2 / e,
        Qbar1=0.5 * (c1 / (3.0 * e3) + c2 / e + e),
        Qtilde1=(c1 / (3.0 * e3) + 2.0 * e) / math.sqrt(2.0) + e,
    )


def characteristic_roots(lam: float) -> tuple[complex, complex]:
    """Roots of x^2 + 2x - 4*lambda = 0.

    The square root of 1 + 4*lambda is taken as the principal complex root,
    so for lambda < -1/4 the roots form a conjugate pair -1 +/- i*sqrt(|1+4l|)
    with r1 carrying the positive imaginary part. Always Re(r1) >= Re(r2).
    """
    if not math.isfinite(lam):
        raise ValueError(f"Casimir eigenvalue must be finite, got {lam!r}")
    disc = 1.0 + 4.0 * lam
    if disc >= 0.0:
        root = math.sqrt(disc)
        return complex(-1.0 + root, 0.0), complex(-1.0 - root, 0.0)
    root = math.sqrt(-disc)
    return complex(-1.0, root), complex(-1.0, -root)


def _kbar(lam: float) -> float:
    c = base_constants()
    e = math.e
    if lam < 0.0:
        # Identical expression on both negative ranges.
        return 4.0 * c.C1 / (9.0 * e**3) + 2.0 * c.C2 / e + e
    return (c.C1 + c.C2) / 2.0


def _ktilde(lam: float) -> float:
    c = base_constants()
    e = math.e
    e3 = e**3
    case = casimir_case(lam)
    if case is CasimirCase.AT_OR_BELOW_QUARTER:
        return (1.0 + 2.0 * math.sqrt(2.0)) * e + (32.0 + math.sqrt(2.0)) * c.C1**2 / (3.0 * e3)
    if case is CasimirCase.COMPLEMENTARY:
        return 3.0 * e + e**2 + 4.0 * c.C1 / (9.0 * e3)
    return e**2


@dataclass(frozen=True)
class DecayEnvelope:
    """Decay data attached to a single Casimir eigenvalue.

    ``kbar`` scales the (m^2 + n^2) part of the coefficient bound and
    ``ktilde`` the constant part; ``b(t)`` is the common time envelope.
    """

    lam: float
    case: CasimirCase
    kbar: float
    ktilde: float
    r1: complex
    r2: complex

    def b(self, t: float) -> float:
        """Evaluate the time envelope b(t); see :func:`envelope_b`."""
        return envelope_b(self.lam, t)


def decay_envelope(lam: float) -> DecayEnvelope:
    """Assemble the full decay envelope for one eigenvalue."""
    r1, r2 = characteristic_roots(lam)
    return DecayEnvelope(
        lam=lam,
        case=casimir_case(lam),
        kbar=_kbar(lam),
        ktilde=_ktilde(lam),
        r1=r1,
        r2=r2,
    )


def _envelope_rate(lam: float) -> float:
    """The exponent c in b(t) = t*exp(c*t) for the given regime."""
    case = casimir_case(lam)
    if case is CasimirCase.AT_OR_BELOW_QUARTER:
        return -1.0
    if case is CasimirCase.COMPLEMENTARY:
        # Real part of r1; here 1 + 4*lambda is in (0, 1) so the root is real.
        return -1.0 + math.sqrt(1.0 + 4.0 * lam)
    return -2.0


def envelope_b(lam: float, t: float) -> float:
    """Evaluate the decay envelope b_lambda(t) = t * exp(rate * t).

    The guarantees attached to the envelope hold for t >= 1. Values for
    t in (0, 1) are computed from the same closed form but flagged with a
    UserWarning; see :func:`envelope_point` for a flag carried in-band.
    """
    if not (t > 0.0):
        raise ValueError(f"envelope requires t > 0, got {t!r}")
    if t < 1.0:
        warnings.warn(
            f"envelope evaluated at t={t} < 1, outside the guaranteed range",
            stacklevel=2,
        )
    return t * math.exp(_envelope_rate(lam) * t)


@dataclass(frozen=True)
class EnvelopePoint:
    """A single envelope evaluation with its domain flag."""

    t: float
    value: float
    outside_guarantee: bool


def envelope_point(lam: float, t: float) -> EnvelopePoint:
    """Like :func:`envelope_b` but returns the guarantee flag in-band.

    No warning is emitted; callers that batch-evaluate grids (the CLI) use
    this to avoid warning spam while still reporting the flag.
    """
    if not (t > 0.0):
        raise ValueError(f"envelope requires t > 0, got {t!r}")
    return EnvelopePoint(
        t=t,
        value=t * math.exp(_envelope_rate(lam) * t),
        outside_guarantee=t < 1.0,
    )


@dataclass(frozen=True)
class LatticeEnvelope:
    """Mixing-rate data for a lattice quotient with first eigenvalue lambda1.

    ``sigma`` (the spectral-gap exponent -1 + sqrt(1 + 4*lambda1)) is present
    exactly when lambda1 lies in the exceptional range (-1/4, 0).
    """

    lambda1: float
    case: CasimirCase
    ktilde_gamma: float
    sigma: Optional[float]

    def b(self, t: float) -> float:
        """The lattice envelope b(t): t*e^{-t} or t*e^{sigma*t}."""
        return envelope_b(self.lambda1, t)


def lattice_envelope(lambda1: float) -> LatticeEnvelope:
    """Constants of the mixing bound for a hyperbolic surface.

    Parameters
    ----------
    lambda1 : float
        First eigenvalue of the hyperbolic Laplacian in the *negative*
        spectrum convention (nonconstant eigenfunctions have negative
        eigenvalues). Must satisfy lambda1 < 0.

    Raises
    ------
    ValueError
        If lambda1 >= 0. The classical positive-spectrum convention differs
        by a sign; rejecting instead of converting avoids silent errors.
    """
    if not math.isfinite(lambda1) or lambda1 >= 0.0:
        raise ValueError(
            f"lambda1 must be negative (got {lambda1!r}): this library uses the "
            "convention that Laplacian eigenvalues of nonconstant functions are "
            "negative; negate the eigenvalue if yours follows the positive "
            "-Delta convention"
        )
    c = base_constants()
    e = math.e
    e3 = e**3
    case = casimir_case(lambda1)
    if case is CasimirCase.AT_OR_BELOW_QUARTER:
        ktg = (32.0 + math.sqrt(2.0)) * c.C1**2 / (3.0 * e3) + (1.0 + 2.0 * math.sqrt(2.0)) * e
        sigma = None
    else:
        ktg = 4.0 * c.C1 / (9.0 * e3) + 3.0 * e + e**2
        sigma = -1.0 + math.sqrt(1.0 + 4.0 * lambda1)
    return LatticeEnvelope(lambda1=lambda1, case=case, ktilde_gamma=ktg, sigma=sigma)


def _quadratic_residual(lam: float, root: complex) -> float:
    """|r^2 + 2r - 4*lambda|, used by the test suite to validate roots."""
    return abs(root * root + 2.0 * root - 4.0 * lam)


def _root_identities(lam: float) -> tuple[float, float]:
    """Residuals of r1+r2 = -2 and r1*r2 = -4*lambda."""
    r1, r2 = characteristic_roots(lam)
    return abs(r1 + r2 + 2.0), abs(r1 * r2 + 4.0 * lam)
