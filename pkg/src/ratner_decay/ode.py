"""Second-order ODE route to matrix coefficients.

Each coefficient trajectory y(t) = B_{n,m}(t) satisfies a linear radial
equation whose homogeneous part is y'' + 2y' - 4*lam*y. The two forcing
expressions are exposed as `forcing_f1` (proportional to y') and
`forcing_f2` (proportional to y); the equation couples them with the fixed
multipliers (-4, -1). The zero-weight case pins those multipliers down:
B_{0,0} is the spherical function, which satisfies the classical radial
equation u'' + 2*coth(2t)*u' = 4*lam*u, and

    2 - 2*coth(2t) = -4*e^{-4t}/(1 - e^{-4t}) = -4 / (2*e^{2t}*sinh(2t)).

Substituting r = 2t turns the general (n, m) equation into the associated
radial form y_rr + coth(r)*y_r + [-lam - (m^2+n^2-2mn*cosh(r))/(4*sinh(r)^2)]*y = 0,
which is what the concrete models reproduce to solver precision.

Integrating from t = 1 with quadrature initial data gives a second,
independent computation of every coefficient. The Duhamel
(variation-of-parameters) components A1, A2, P1, P2 then rebuild the
trajectory from the forcing alone, checking the intermediate decay
estimates in one shot:

    y(t) = -e^{r2 t} A(t) + P1 * I(t) e^{r2 t} + P2 e^{r2 t},
    I(t) = integral_1^t e^{(r1-r2)s} ds,  A = A1 + A2,

a form that stays valid at the double root r1 = r2 (I(t) = t - 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import base_constants, characteristic_roots

# How the two forcing expressions enter the equation
# y'' + 2y' - 4*lam*y = _F1_COUPLING * f1 + _F2_COUPLING * f2
# (see the module docstring for the spherical-function derivation).
_F1_COUPLING = -4.0
_F2_COUPLING = -1.0

# Tolerances below ~100*eps make the step controller thrash.
_MIN_SOLVER_TOL = 2.5e-14


def forcing_f1(t, dy):
    """First forcing expression y'(t) / (2 e^{2t} sinh 2t).

    Accepts scalars or arrays; `t` must be positive (the equation is
    singular at t = 0).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be positive")
    out = np.asarray(dy) / (2.0 * np.exp(2.0 * t_arr) * np.sinh(2.0 * t_arr))
    return complex(out[()]) if out.ndim == 0 else out


def forcing_f2(t, y, n, m):
    """Second forcing expression y(t) * [2m*q/sinh(2t) - q^2/sinh^2(2t)].

    Here q = n - m e^{-2t}. Accepts scalars or arrays; `t` must be positive.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be positive")
    q = n - m * np.exp(-2.0 * t_arr)
    s = np.sinh(2.0 * t_arr)
    out = np.asarray(y) * (2.0 * m * q / s - (q / s) ** 2)
    return complex(out[()]) if out.ndim == 0 else out


@dataclass(frozen=True)
class OdeProblem:
    """Initial data at t = 1 for one coefficient trajectory."""

    lam: float
    n: int
    m: int
    y1: complex
    dy1: complex

    def __post_init__(self):
        if abs(self.y1) > 1.0 + 1e-6:
            raise ValueError(f"|y(1)| = {abs(self.y1):.6g} exceeds the unitarity bound 1")
        cap = math.sqrt(self.m**2 - 4.0 * self.lam)
        if abs(self.dy1) > cap + 1e-6:
            raise ValueError(f"|y'(1)| = {abs(self.dy1):.6g} exceeds sqrt(m^2 - 4 lam) = {cap:.6g}")


@dataclass
class CoefficientSeries:
    """Sampled coefficient trajectory with provenance and an error estimate."""

    t: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    error: float
    provenance: str
    dense: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.provenance not in ("quadrature", "ode"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


def _equation_coefficients(t, n, m, lam):
    """Coefficients (a, b) of y'' = a*y' + b*y; both are real."""
    s = math.sinh(2.0 * t)
    q = n - m * math.exp(-2.0 * t)
    a = -2.0 + _F1_COUPLING / (2.0 * math.exp(2.0 * t) * s)
    b = 4.0 * lam + _F2_COUPLING * (2.0 * m * q / s - (q / s) ** 2)
    return a, b


def ode_problem_from_model(model, n, m, tol=1e-12):
    """Build an OdeProblem from quadrature data of `model` at t = 1.

    The default tolerance is tighter than elsewhere because for lam > 0 the
    growing homogeneous mode amplifies any initial-data error by e^{r1 (t-1)}
    over the integration window.
    """
    y1 = model.coefficient(n, m, 1.0, tol=tol).value
    dy1 = model.coefficient_derivative(n, m, 1.0, tol=tol).value
    return OdeProblem(lam=model.lam, n=n, m=m, y1=y1, dy1=dy1)


def quadrature_series(model, n, m, t_grid, tol=1e-10):
    """Coefficient trajectory sampled directly from the quadrature model."""
    grid = np.asarray(t_grid, dtype=float)
    values = np.empty(grid.size, dtype=complex)
    derivatives = np.empty(grid.size, dtype=complex)
    worst = 0.0
    for i, t in enumerate(grid):
        val = model.coefficient(n, m, float(t), tol=tol)
        der = model.coefficient_derivative(n, m, float(t), tol=tol)
        values[i] = val.value
        derivatives[i] = der.value
        worst = max(worst, val.error, der.error)
    return CoefficientSeries(
        t=grid, values=values, derivatives=derivatives, error=worst, provenance="quadrature"
    )


def _solve(problem, t_end, rtol):
    z0 = [problem.y1.real, problem.y1.imag, problem.dy1.real, problem.dy1.imag]
    n, m, lam = problem.n, problem.m, problem.lam

    def rhs(t, z):
        a, b = _equation_coefficients(t, n, m, lam)
        return [z[2], z[3], a * z[2] + b * z[0], a * z[3] + b * z[1]]

    sol = solve_ivp(rhs, (1.0, t_end), z0, method="DOP853", dense_output=True, rtol=rtol, atol=rtol)
    if not sol.success:
        raise RuntimeError(f"coefficient integration failed: {sol.message}")
    return sol


def _dense_eval(sol, ts):
    z = sol.sol(np.asarray(ts, dtype=float))
    return z[0] + 1j * z[1], z[2] + 1j * z[3]


def integrate_coefficient(problem, t_grid, tol=1e-10):
    """Integrate the coefficient equation from t = 1 over `t_grid`.

    The grid must be strictly increasing and start at 1. The result carries
    a global-error estimate from a second integration at a 100x tighter
    tolerance (whose values are the ones returned).
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("t_grid must be a nonempty 1-d array")
    if abs(grid[0] - 1.0) > 1e-12:
        raise ValueError("t_grid must start at 1 (quadrature initial data lives there)")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")

    primary_tol = min(tol, 1e-10)
    if problem.lam > 0:
        # The growing homogeneous mode e^{r1 t} amplifies local error by
        # e^{r1 (t-1)}, so positive-lambda runs need a tighter controller.
        primary_tol = min(primary_tol, 1e-12)
    primary_tol = max(primary_tol, _MIN_SOLVER_TOL)
    check_tol = max(primary_tol / 100.0, _MIN_SOLVER_TOL)

    coarse = _solve(problem, float(grid[-1]), primary_tol)
    fine = _solve(problem, float(grid[-1]), check_tol)
    values, derivatives = _dense_eval(fine, grid)
    coarse_values, _ = _dense_eval(coarse, grid)
    error = float(np.max(np.abs(values - coarse_values))) + 1e-15
    return CoefficientSeries(
        t=grid, values=values, derivatives=derivatives, error=error, provenance="ode", dense=fine
    )


def _growth_integral(r1, r2, t):
    """I(t) = integral_1^t e^{(r1-r2)s} ds, continuous through r1 = r2."""
    sigma = r1 - r2
    t = np.asarray(t, dtype=float)
    if abs(sigma) < 1e-12:
        out = t - 1.0
        return out + 0j
    return (np.exp(sigma * t) - np.exp(sigma)) / sigma


@dataclass(frozen=True)
class DuhamelDecomposition:
    """Variation-of-parameters pieces of one trajectory.

    A1 and A2 are callables of t (vectorized); the tail budget bounds the
    effect of truncating the inner improper integrals at t_tail on A1, A2
    and P1. The reconstruction itself is exactly invariant under that
    truncation (the same tail enters A and P1 with opposite signs).
    """

    A1: object
    A2: object
    P1: complex
    P2: complex
    r1: complex
    r2: complex
    tail_budget: float

    def reconstruction(self, t):
        t = np.asarray(t, dtype=float)
        a_total = self.A1(t) + self.A2(t)
        growth = _growth_integral(self.r1, self.r2, t)
        return np.exp(self.r2 * t) * (-a_total + self.P1 * growth + self.P2)


def duhamel_components(problem, solution, t_tail, tol=1e-3):
    """Duhamel components A1, A2, P1, P2 for an integrated trajectory.

    The inner improper integrals are truncated at `t_tail`; the resulting
    certified tail budget (assumption-free, using only |y| <= 1 and
    |y'| <= sqrt(m^2-4 lam)) must stay below `tol`, otherwise the
    truncation is reported as an error. The budget limits how well A1, A2
    and P1 are known individually; the reconstruction is exactly invariant
    under the truncation. `solution` must be produced by
    `integrate_coefficient` and cover [1, t_tail].
    """
    if t_tail < 10.0:
        raise ValueError("t_tail must be at least 10")
    if solution.t[-1] < t_tail - 1e-9:
        raise ValueError(f"solution reaches t = {solution.t[-1]:g} but t_tail = {t_tail:g}")
    if solution.dense is None:
        raise ValueError("solution lacks a dense interpolant; use integrate_coefficient")

    n, m, lam = problem.n, problem.m, problem.lam
    r1, r2 = characteristic_roots(lam)
    consts = base_constants()

    def true_forcings(u):
        y, dy = _dense_eval(solution.dense, u)
        f1 = _F1_COUPLING * forcing_f1(u, dy)
        f2 = _F2_COUPLING * forcing_f2(u, y, n, m)
        return f1, f2

    # Pass 1 (backward): G_i(s) = integral_s^{t_tail} e^{-r1 u} f_i(u) du.
    def g_rhs(s, z):
        f1, f2 = true_forcings(s)
        d1 = -cmath.exp(-r1 * s) * complex(f1)
        d2 = -cmath.exp(-r1 * s) * complex(f2)
        return [d1.real, d1.imag, d2.real, d2.imag]

    g_sol = solve_ivp(
        g_rhs, (t_tail, 1.0), [0.0, 0.0, 0.0, 0.0],
        method="DOP853", dense_output=True, rtol=1e-12, atol=1e-14,
    )
    if not g_sol.success:
        raise RuntimeError(f"inner Duhamel integration failed: {g_sol.message}")

    def g_parts(s):
        z = g_sol.sol(np.asarray(s, dtype=float))
        return z[0] + 1j * z[1], z[2] + 1j * z[3]

    # Pass 2 (forward): A_i(t) = integral_1^t e^{(r1-r2)s} G_i(s) ds.
    def a_rhs(s, z):
        g1, g2 = g_parts(s)
        d1 = cmath.exp((r1 - r2) * s) * complex(g1)
        d2 = cmath.exp((r1 - r2) * s) * complex(g2)
        return [d1.real, d1.imag, d2.real, d2.imag]

    a_sol = solve_ivp(
        a_rhs, (1.0, t_tail), [0.0, 0.0, 0.0, 0.0],
        method="DOP853", dense_output=True, rtol=1e-12, atol=1e-14,
    )
    if not a_sol.success:
        raise RuntimeError(f"outer Duhamel integration failed: {a_sol.message}")

    # Certified truncation tails of the two inner integrals, using the
    # forcing bounds |F1| <= 4 C1 sqrt(m^2-4lam) e^{-4u}, |F2| <= C2 (m^2+n^2) e^{-2u}.
    sqrt_m2 = math.sqrt(m**2 - 4.0 * lam)
    rate1 = r1.real + 4.0
    rate2 = r1.real + 2.0
    tail1 = 4.0 * consts.C1 * sqrt_m2 * math.exp(-rate1 * t_tail) / rate1
    tail2 = consts.C2 * (m**2 + n**2) * math.exp(-rate2 * t_tail) / rate2
    tail_budget = tail1 + tail2
    if tail_budget > tol:
        raise RuntimeError(
            f"tail budget {tail_budget:.3e} exceeds tolerance {tol:.3e}; increase t_tail"
        )

    g1_at_1, g2_at_1 = g_parts(1.0)
    p1 = complex(g1_at_1 + g2_at_1) - r2 * cmath.exp(-r1) * problem.y1 + cmath.exp(-r1) * problem.dy1
    p2 = problem.y1 * cmath.exp(-r2)

    def a1(ts):
        z = a_sol.sol(np.asarray(ts, dtype=float))
        return z[0] + 1j * z[1]

    def a2(ts):
        z = a_sol.sol(np.asarray(ts, dtype=float))
        return z[2] + 1j * z[3]

    return DuhamelDecomposition(
        A1=a1, A2=a2, P1=p1, P2=p2, r1=r1, r2=r2, tail_budget=tail_budget
    )
