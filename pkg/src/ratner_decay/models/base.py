"""Shared infrastructure for the concrete representation models.

Each model realizes one irreducible family on a function space with an
orthonormal weight basis, and evaluates matrix coefficients
B_{n,m}(t) = <phi_n, T(a(t)) phi_m> by quadrature with a grid-doubling
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DET_TOL = 1e-12


class QuadratureConvergenceError(RuntimeError):
    """Raised when grid doubling fails to push the error estimate below tolerance."""


@dataclass(frozen=True)
class GroupElement:
    """A 2x2 real matrix with unit determinant.

    Attributes
    ----------
    a, b, c, d : float
        Entries in row-major order, [[a, b], [c, d]].
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or abs(det - 1.0) > DET_TOL:
            raise ValueError(f"determinant {det!r} is not 1 within {DET_TOL}")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta):
        """r(theta) = [[cos, sin], [-sin, cos]]."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, s, -s, c)

    @classmethod
    def diagonal_flow(cls, t):
        """a(t) = diag(e^t, e^-t), the geodesic direction."""
        return cls(math.exp(t), 0.0, 0.0, math.exp(-t))

    @classmethod
    def symmetric_boost(cls, s):
        """exp(s V) for V = [[0, 1], [1, 0]]: [[cosh, sinh], [sinh, cosh]]."""
        return cls(math.cosh(s), math.sinh(s), math.sinh(s), math.cosh(s))

    def inverse(self):
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)


@dataclass(frozen=True)
class Principal:
    """Spherical principal series parameter, nu >= 0."""

    nu: float


@dataclass(frozen=True)
class Complementary:
    """Complementary series parameter, u in (0, 1)."""

    u: float


@dataclass(frozen=True)
class Discrete:
    """Holomorphic discrete series parameter, even integer k >= 2."""

    k: int


class EvenIntegers:
    """The set of even integers, used as a weight support."""

    def __contains__(self, n):
        return isinstance(n, (int, np.integer)) and n % 2 == 0

    def __repr__(self):
        return "EvenIntegers()"


class WeightsFrom:
    """Weights {start, start+2, start+4, ...} of a holomorphic branch."""

    def __init__(self, start):
        self.start = start

    def __contains__(self, n):
        return isinstance(n, (int, np.integer)) and n >= self.start and (n - self.start) % 2 == 0

    def __repr__(self):
        return f"WeightsFrom({self.start})"


@dataclass(frozen=True)
class WeightVectorSample:
    """A weight vector phi_n sampled on its model's quadrature grid.

    `values` is the raw grid data (1-D for circle models, 2-D for the disk
    model) and `norm` is its length under the model's inner product, which
    should be 1 up to quadrature error for a basis mode.
    """

    model: "IrreducibleModel"
    n: int
    values: np.ndarray
    norm: float


class CoefficientValue(NamedTuple):
    value: complex
    error: float


# Floor for reported error estimates; two grids can agree to all bits.
ERROR_FLOOR = 8e-16


class IrreducibleModel:
    """Base class for the three concrete model families.

    Subclasses provide `_block_estimate`, `_derivative_estimate` and
    `_norm_estimate` at a fixed grid size; the adaptive drivers here double
    the grid until consecutive estimates agree to tolerance and report the
    last doubling difference as the error estimate.
    """

    kind = None
    lam = None
    weight_support = None

    grid_start = 512
    grid_cap = 1 << 20

    def supports(self, n):
        return n in self.weight_support

    # -- adaptive drivers ----------------------------------------------------

    def _adaptive(self, estimate, tol, label):
        nodes = self.grid_start
        prev = None
        streak = 0
        while nodes <= self.grid_cap:
            cur = np.asarray(estimate(nodes))
            if prev is not None:
                err = np.abs(cur - prev)
                # A sharply peaked integrand can sit on a false plateau for one
                # doubling before the grid resolves the peak, so demand two
                # consecutive quiet doublings before trusting the estimate.
                streak = streak + 1 if err.max() <= tol else 0
                if streak >= 2:
                    return cur, np.maximum(err, ERROR_FLOOR)
            prev = cur
            nodes *= 2
        raise QuadratureConvergenceError(
            f"{label}: grid doubling stalled at {self.grid_cap} nodes with "
            f"estimate change {float(np.max(np.abs(cur - prev))):.3e} > {tol:.3e}"
        )

    def coefficient(self, n, m, t, tol=1e-10):
        """B_{n,m}(t) with a grid-doubling error estimate.

        Returns exact zero when either weight is outside the support
        (the corresponding weight space is trivial).
        """
        if t < 0:
            raise ValueError("t must be nonnegative")
        if not (self.supports(n) and self.supports(m)):
            return CoefficientValue(0j, 0.0)
        block, err = self.coefficient_block([n], [m], t, tol=tol)
        return CoefficientValue(complex(block[0, 0]), float(err[0, 0]))

    def coefficient_block(self, ns, ms, t, tol=1e-10):
        """Matrix of B_{n,m}(t) over all pairs from `ns` x `ms`.

        Unsupported weights yield exact-zero rows/columns. Much faster than
        per-pair calls because the grid geometry is shared.
        """
        if t < 0:
            raise ValueError("t must be nonnegative")
        ns = list(ns)
        ms = list(ms)
        ns_live = [n for n in ns if self.supports(n)]
        ms_live = [m for m in ms if self.supports(m)]
        out = np.zeros((len(ns), len(ms)), dtype=complex)
        err = np.zeros((len(ns), len(ms)), dtype=float)
        if ns_live and ms_live:
            block, block_err = self._adaptive(
                lambda nodes: self._block_estimate(ns_live, ms_live, t, nodes),
                tol,
                f"B block at t={t:g}",
            )
            rows = [i for i, n in enumerate(ns) if self.supports(n)]
            cols = [j for j, m in enumerate(ms) if self.supports(m)]
            out[np.ix_(rows, cols)] = block
            err[np.ix_(rows, cols)] = block_err
        return out, err

    def coefficient_derivative(self, n, m, t, tol=1e-10, method="integrand"):
        """dB_{n,m}/dt by the requested method.

        "integrand" differentiates under the integral sign (closed-form
        t-derivative of the transported mode); "difference" uses central
        differences of B with one Richardson extrapolation step.
        """
        if t < 0:
            raise ValueError("t must be nonnegative")
        if not (self.supports(n) and self.supports(m)):
            return CoefficientValue(0j, 0.0)
        if method == "integrand":
            val, err = self._adaptive(
                lambda nodes: self._derivative_estimate(n, m, t, nodes),
                tol,
                f"dB/dt at t={t:g}",
            )
            return CoefficientValue(complex(val[()]), float(err[()]))
        if method == "difference":
            h = min(1e-4, t / 2) if t > 0 else 1e-4
            vals = {}
            for step in (h, h / 2):
                lo = self.coefficient(n, m, t - step, tol=tol)
                hi = self.coefficient(n, m, t + step, tol=tol)
                vals[step] = (hi.value - lo.value) / (2 * step)
                prop_err = (hi.error + lo.error) / (2 * step)
            rich = (4 * vals[h / 2] - vals[h]) / 3
            est_err = abs(vals[h / 2] - vals[h]) / 3 + prop_err
            return CoefficientValue(rich, max(est_err, ERROR_FLOOR))
        raise ValueError(f"unknown derivative method {method!r}")

    def rotation_coefficient(self, n, m, theta, tol=1e-10):
        """<phi_n, T(r(theta)) phi_m>, used by the equivariance checks."""
        if not (self.supports(n) and self.supports(m)):
            return CoefficientValue(0j, 0.0)

        def estimate(nodes):
            g = GroupElement.rotation(theta)
            acted = self.action_values(g, {m: 1.0}, nodes)
            reference = self.action_values(GroupElement.identity(), {n: 1.0}, nodes)
            return np.asarray(self.values_inner(reference, acted, nodes))

        val, err = self._adaptive(estimate, tol, f"rotation coefficient theta={theta:g}")
        return CoefficientValue(complex(val[()]), float(err[()]))

    def transported_norm(self, m, t, tol=1e-8):
        """|| T(a(t)) phi_m ||, which unitarity pins at 1."""
        if not self.supports(m):
            raise ValueError(f"weight {m} is outside the support {self.weight_support!r}")
        val, err = self._adaptive(
            lambda nodes: self._norm_estimate(m, t, nodes),
            tol,
            f"transported norm at t={t:g}",
        )
        return CoefficientValue(complex(val[()]), float(err[()]))

    def weight_sample(self, n, nodes=None):
        """phi_n sampled on the model's default grid."""
        if not self.supports(n):
            raise ValueError(f"weight {n} is outside the support {self.weight_support!r}")
        nodes = nodes if nodes is not None else self.grid_start
        values = self.action_values(GroupElement.identity(), {n: 1.0}, nodes)
        norm = math.sqrt(abs(self.values_inner(values, values, nodes)))
        return WeightVectorSample(model=self, n=n, values=values, norm=norm)

    # -- subclass surface ----------------------------------------------------

    def _block_estimate(self, ns, ms, t, nodes):
        raise NotImplementedError

    def _derivative_estimate(self, n, m, t, nodes):
        raise NotImplementedError

    def _norm_estimate(self, m, t, nodes):
        raise NotImplementedError

    def action_values(self, g, coeffs, nodes):
        """Grid values of T(g) applied to sum_n coeffs[n] * phi_n."""
        raise NotImplementedError

    def values_inner(self, f_values, g_values, nodes):
        """Model inner product of two grid-value arrays (conjugate-linear in the second)."""
        raise NotImplementedError


def matrix_coefficient(model, n, m, t, tol=1e-10):
    """B_{n,m}(t) as a plain complex number."""
    return model.coefficient(n, m, t, tol=tol).value


def coefficient_derivative(model, n, m, t, tol=1e-10, method="integrand"):
    """dB_{n,m}/dt as a plain complex number."""
    return model.coefficient_derivative(n, m, t, tol=tol, method=method).value
