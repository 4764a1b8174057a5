"""Principal and complementary series realized on the circle.

Both act on even-weight functions by the projective transformation of the
direction vector u(theta) = (cos theta, sin theta) with a scaling cocycle:

    (T(g) f)(theta) = |g^-1 u(theta)|^(-1-s) * f(angle of g^-1 u(theta))

with s = i*nu on the principal line and s = u in (0, 1) on the complementary
interval. Everything in sight is pi-periodic (even weights), so grids live
on [0, pi) and FFT bins carry even frequencies 2q.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import roots_jacobi

from .base import EvenIntegers, IrreducibleModel, Complementary, Principal

# Chunk length for the block matmul so the outer-product intermediates stay
# within a few tens of MB even at the grid cap.
_CHUNK = 1 << 17


def _flow_geometry(tau, theta):
    """rho^2 and the rotated angle for a(tau)^-1 u(theta), plus tau-derivatives.

    Returns (rho2, angle, d_rho2, d_angle) where d_* are partial derivatives
    in tau. rho2 = e^{-2 tau} cos^2 + e^{2 tau} sin^2 and tan(angle) =
    e^{2 tau} tan(theta).
    """
    c, s = np.cos(theta), np.sin(theta)
    em, ep = math.exp(-2 * tau), math.exp(2 * tau)
    rho2 = em * c * c + ep * s * s
    angle = np.arctan2(math.exp(tau) * s, math.exp(-tau) * c)
    d_rho2 = -2 * em * c * c + 2 * ep * s * s
    d_angle = 2 * s * c / rho2
    return rho2, angle, d_rho2, d_angle


def _element_geometry(g, theta):
    """rho and angle of g^-1 u(theta) for a general group element."""
    inv = g.inverse()
    c, s = np.cos(theta), np.sin(theta)
    vx = inv.a * c + inv.b * s
    vy = inv.c * c + inv.d * s
    return np.hypot(vx, vy), np.arctan2(vy, vx)


def _grid(nodes):
    return np.pi * np.arange(nodes) / nodes


class PrincipalSeries(IrreducibleModel):
    """Spherical principal series with parameter nu >= 0.

    Casimir eigenvalue -(1 + nu^2)/4; weight modes phi_n(theta) = e^{i n theta}
    are orthonormal under the mean inner product on the circle.
    """

    def __init__(self, nu):
        if not (math.isfinite(nu) and nu >= 0):
            raise ValueError(f"principal parameter must satisfy nu >= 0, got {nu!r}")
        self.kind = Principal(nu=float(nu))
        self.nu = float(nu)
        self.lam = -(1.0 + self.nu**2) / 4.0
        self.weight_support = EvenIntegers()

    # The evaluation splits a(t) = a(t/2) a(t/2) and moves one half onto the
    # other argument by unitarity; the integrand's transition layers then
    # have width e^{-t} instead of e^{-2t}, halving the required resolution
    # exponent.
    def _split_weight(self, t, theta, n_arr=None):
        rho2_f, ang_f, d_rho2_f, d_ang_f = _flow_geometry(-t / 2, theta)
        rho2_g, ang_g, d_rho2_g, d_ang_g = _flow_geometry(t / 2, theta)
        w0 = (rho2_f * rho2_g) ** -0.5 * np.exp(
            0.5j * self.nu * (np.log(rho2_g) - np.log(rho2_f))
        )
        return (rho2_f, ang_f, d_rho2_f, d_ang_f), (rho2_g, ang_g, d_rho2_g, d_ang_g), w0

    def _block_estimate(self, ns, ms, t, nodes):
        theta = _grid(nodes)
        (rho2_f, ang_f, _, _), (rho2_g, ang_g, _, _), w0 = self._split_weight(t, theta)
        ns_arr = np.asarray(ns, dtype=float)
        ms_arr = np.asarray(ms, dtype=float)
        total = np.zeros((len(ns), len(ms)), dtype=complex)
        for lo in range(0, nodes, _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, nodes))
            left = np.exp(1j * np.outer(ns_arr, ang_f[sl]))
            right = w0[sl] * np.exp(-1j * np.outer(ms_arr, ang_g[sl]))
            total += left @ right.T
        return total / nodes

    def _derivative_estimate(self, n, m, t, nodes):
        theta = _grid(nodes)
        f_geo, g_geo, w0 = self._split_weight(t, theta)
        rho2_f, ang_f, d_rho2_f, d_ang_f = f_geo
        rho2_g, ang_g, d_rho2_g, d_ang_g = g_geo
        integrand = w0 * np.exp(1j * (n * ang_f - m * ang_g))
        # d/dt acts through tau = -t/2 on the left factor and tau = +t/2 on
        # the right (conjugated) one.
        left_rate = -0.5 * (-(1 + 1j * self.nu) / 2 * d_rho2_f / rho2_f + 1j * n * d_ang_f)
        right_rate = 0.5 * (-(1 - 1j * self.nu) / 2 * d_rho2_g / rho2_g - 1j * m * d_ang_g)
        return np.mean(integrand * (left_rate + right_rate))

    def _norm_estimate(self, m, t, nodes):
        # |T(a(t)) phi_m| has modulus rho^{-1} pointwise, m enters only a phase.
        rho2, _, _, _ = _flow_geometry(t, _grid(nodes))
        return math.sqrt(np.mean(1.0 / rho2))

    def action_values(self, g, coeffs, nodes):
        rho, angle = _element_geometry(g, _grid(nodes))
        mode_sum = np.zeros(nodes, dtype=complex)
        for n, c in coeffs.items():
            mode_sum += c * np.exp(1j * n * angle)
        return rho ** (-1 - 1j * self.nu) * mode_sum

    def values_inner(self, f_values, g_values, nodes):
        return complex(np.mean(f_values * np.conj(g_values)))


class ComplementarySeries(IrreducibleModel):
    """Complementary series with parameter u in (0, 1).

    Casimir eigenvalue (u^2 - 1)/4 in (-1/4, 0). The invariant inner product
    is the double integral against |sin(theta - theta')|^{u-1}, which is
    diagonal in Fourier modes: <e^{2iq.}, e^{2iq.}> = kappa_{2q} with

        kappa_p = (1/2pi) Int_0^{2pi} e^{i p tau} |sin tau|^{u-1} dtau,

    and phi_n = e^{i n theta} / sqrt(kappa_n).
    """

    def __init__(self, u):
        if not (math.isfinite(u) and 0.0 < u < 1.0):
            raise ValueError(f"complementary parameter must lie in (0, 1), got {u!r}")
        self.kind = Complementary(u=float(u))
        self.u = float(u)
        self.lam = (self.u**2 - 1.0) / 4.0
        self.weight_support = EvenIntegers()
        self._jacobi_rule = roots_jacobi(256, self.u - 1.0, self.u - 1.0)
        self._kappa0 = self._kappa_quadrature(0)

    # -- kernel Fourier coefficients ------------------------------------------

    def _kappa_quadrature(self, p):
        """kappa_p by Gauss-Jacobi quadrature (even p).

        Substituting tau = pi (x + 1)/2 turns the kernel into the Jacobi
        weight (1 - x^2)^{u-1} times the smooth positive factor
        g(x) = cos(pi x / 2) / (1 - x^2).
        """
        x, w = self._jacobi_rule
        # cos(pi x/2) = sin(pi (1-x)/2); the right-hand form avoids
        # cancellation as x -> 1 before dividing out the endpoint zeros.
        smooth = np.sin(np.pi * (1 - x) / 2) / ((1 - x) * (1 + x))
        return 0.5 * np.sum(w * np.cos(p * np.pi * (x + 1) / 2) * smooth ** (self.u - 1.0))

    def kappa_even(self, count):
        """Array of kappa_{2q} for q = 0 .. count-1 via the exact ratio recurrence.

        kappa_{p+2} / kappa_p = (p + 1 - u) / (p + 1 + u), anchored at the
        quadrature value of kappa_0.
        """
        if count <= 0:
            return np.empty(0)
        odd = 2.0 * np.arange(count - 1) + 1.0
        ratios = (odd - self.u) / (odd + self.u)
        return self._kappa0 * np.concatenate(([1.0], np.cumprod(ratios)))

    def _kappa_for_fft(self, nodes):
        table = self.kappa_even(nodes // 2 + 1)
        q = np.abs(np.rint(np.fft.fftfreq(nodes, 1.0 / nodes)).astype(int))
        return table[q]

    def _mode_norm(self, n):
        return math.sqrt(self.kappa_even(abs(n) // 2 + 1)[-1])

    # -- coefficient machinery -------------------------------------------------

    def _transported(self, tau, weight, theta, derivative=False):
        rho2, angle, d_rho2, d_angle = _flow_geometry(tau, theta)
        vals = rho2 ** (-(1 + self.u) / 2) * np.exp(1j * weight * angle)
        if not derivative:
            return vals
        rate = -(1 + self.u) / 2 * d_rho2 / rho2 + 1j * weight * d_angle
        return vals, vals * rate

    def _block_estimate(self, ns, ms, t, nodes):
        theta = _grid(nodes)
        kappa = self._kappa_for_fft(nodes)
        g_hat = np.empty((len(ms), nodes), dtype=complex)
        for j, m in enumerate(ms):
            g_hat[j] = np.fft.fft(self._transported(t / 2, m, theta)) / nodes
        out = np.empty((len(ns), len(ms)), dtype=complex)
        for i, n in enumerate(ns):
            f_hat = np.fft.fft(self._transported(-t / 2, n, theta)) / nodes
            out[i] = np.conj(g_hat) @ (kappa * f_hat)
        norms = np.outer(
            [self._mode_norm(n) for n in ns], [self._mode_norm(m) for m in ms]
        )
        return out / norms

    def _derivative_estimate(self, n, m, t, nodes):
        theta = _grid(nodes)
        kappa = self._kappa_for_fft(nodes)
        f_vals, f_rate = self._transported(-t / 2, n, theta, derivative=True)
        g_vals, g_rate = self._transported(t / 2, m, theta, derivative=True)
        f_hat = np.fft.fft(f_vals) / nodes
        g_hat = np.fft.fft(g_vals) / nodes
        df_hat = np.fft.fft(-0.5 * f_rate) / nodes
        dg_hat = np.fft.fft(0.5 * g_rate) / nodes
        total = np.sum(kappa * (df_hat * np.conj(g_hat) + f_hat * np.conj(dg_hat)))
        return total / (self._mode_norm(n) * self._mode_norm(m))

    def _norm_estimate(self, m, t, nodes):
        theta = _grid(nodes)
        kappa = self._kappa_for_fft(nodes)
        g_hat = np.fft.fft(self._transported(t, m, theta)) / nodes
        norm2 = np.sum(kappa * np.abs(g_hat) ** 2) / self._mode_norm(m) ** 2
        return math.sqrt(norm2)

    def action_values(self, g, coeffs, nodes):
        rho, angle = _element_geometry(g, _grid(nodes))
        mode_sum = np.zeros(nodes, dtype=complex)
        for n, c in coeffs.items():
            mode_sum += (c / self._mode_norm(n)) * np.exp(1j * n * angle)
        return rho ** (-1 - self.u) * mode_sum

    def values_inner(self, f_values, g_values, nodes):
        kappa = self._kappa_for_fft(nodes)
        f_hat = np.fft.fft(f_values) / nodes
        g_hat = np.fft.fft(g_values) / nodes
        return complex(np.sum(kappa * f_hat * np.conj(g_hat)))
