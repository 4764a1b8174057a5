"""Numeric kernels for the modular-surface Monte Carlo.

Two interchangeable backends implement the same three operations: the
fundamental-domain reduction loop, the Moebius action of a flowed frame on
i, and their fusion. A compiled extension is preferred when it was built;
the pure-numpy fallback is always available and produces bit-identical
results (same per-element operation order, no FMA contraction, same
rounding). ``backend_name()`` reports which one is active.

This facade owns input handling: it validates and copies inputs, computes
exp(+-t) once per call (so both backends consume the same double), and
returns freshly allocated arrays.
"""

import math

import numpy as np

try:
    from ratner_decay._kernels import _core as _impl

    COMPILED = True
except ImportError:
    from ratner_decay._kernels import _fallback as _impl

    COMPILED = False

from ratner_decay._kernels import _fallback

__all__ = [
    "COMPILED",
    "REDUCTION_CAP",
    "backend_name",
    "flow_points",
    "mobius_points",
    "reduce_points",
]

# Iteration guard for the reduction loop; unreachable for finite inputs
# with positive imaginary part, present to turn float pathologies into a
# diagnostic instead of a hang.
REDUCTION_CAP = 100_000


def backend_name():
    return "compiled" if COMPILED else "python"


def _as_batch(*arrays):
    out = []
    shape = None
    for arr in arrays:
        a = np.asarray(arr, dtype=float)
        if shape is None:
            shape = a.shape
        elif a.shape != shape:
            raise ValueError(f"kernel inputs must share a shape, got {a.shape} vs {shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("kernel inputs must be finite")
        out.append(np.ascontiguousarray(a).reshape(-1).copy())
    return shape, out


def reduce_points(x, y, cap=REDUCTION_CAP, backend=None):
    """Reduce points x + iy into the standard fundamental domain.

    Accepts scalars or arrays (any shared shape); requires y > 0. Returns
    new arrays of the same shape with |x| <= 1/2 and x^2 + y^2 >= 1.
    """
    shape, (xr, yr) = _as_batch(x, y)
    if np.any(yr <= 0.0):
        raise ValueError("reduction requires points in the upper half plane (y > 0)")
    impl = _select(backend)
    impl.reduce_points(xr, yr, cap)
    return xr.reshape(shape), yr.reshape(shape)


def mobius_points(h11, h12, h21, h22, t, backend=None):
    """Coordinates of (a(t) g) . i for a batch of frames g; no reduction."""
    shape, (e11, e12, e21, e22) = _as_batch(h11, h12, h21, h22)
    x_out = np.empty(e11.shape)
    y_out = np.empty(e11.shape)
    impl = _select(backend)
    impl.mobius_points(e11, e12, e21, e22, math.exp(t), math.exp(-t), x_out, y_out)
    return x_out.reshape(shape), y_out.reshape(shape)


def flow_points(h11, h12, h21, h22, t, cap=REDUCTION_CAP, backend=None):
    """Flowed-and-reduced surface coordinates of a batch of frames."""
    shape, (e11, e12, e21, e22) = _as_batch(h11, h12, h21, h22)
    x_out = np.empty(e11.shape)
    y_out = np.empty(e11.shape)
    impl = _select(backend)
    impl.flow_points(e11, e12, e21, e22, math.exp(t), math.exp(-t), cap, x_out, y_out)
    return x_out.reshape(shape), y_out.reshape(shape)


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _fallback
    if backend == "compiled":
        if not COMPILED:
            raise ValueError("compiled kernel backend is not available in this build")
        return _impl
    raise ValueError(f"unknown kernel backend {backend!r}")
