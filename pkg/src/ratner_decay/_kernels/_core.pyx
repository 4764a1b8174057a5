# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernels: per-element loops with the reference op order.

Must stay bit-compatible with ``_fallback.py``: same operation order,
round-half-even translations (C rint), and no fused multiply-adds (the
build passes -ffp-contract=off). Keep both files in sync when editing.
"""

from libc.math cimport rint


def reduce_points(double[::1] x, double[::1] y, long cap):
    """Translate/invert (x, y) into the standard fundamental domain."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef Py_ssize_t bad = -1
    cdef double xv, yv, r2
    cdef long k
    with nogil:
        for i in range(n):
            xv = x[i]
            yv = y[i]
            k = 0
            while True:
                xv = xv - rint(xv)
                r2 = xv * xv + yv * yv
                if r2 >= 1.0:
                    break
                xv = -xv / r2
                yv = yv / r2
                k = k + 1
                if k >= cap:
                    bad = i
                    break
            if bad >= 0:
                break
            x[i] = xv
            y[i] = yv
    if bad >= 0:
        raise RuntimeError(
            f"fundamental-domain reduction did not terminate within {cap} steps "
            f"(first stuck input index {bad})"
        )


def mobius_points(
    double[::1] h11,
    double[::1] h12,
    double[::1] h21,
    double[::1] h22,
    double et,
    double emt,
    double[::1] x_out,
    double[::1] y_out,
):
    """(a(t) g) acting on i, written to (x_out, y_out); no reduction."""
    cdef Py_ssize_t i, n = h11.shape[0]
    cdef double a, b, c, d, den
    with nogil:
        for i in range(n):
            a = et * h11[i]
            b = et * h12[i]
            c = emt * h21[i]
            d = emt * h22[i]
            den = c * c + d * d
            x_out[i] = (a * c + b * d) / den
            y_out[i] = (a * d - b * c) / den


def flow_points(
    double[::1] h11,
    double[::1] h12,
    double[::1] h21,
    double[::1] h22,
    double et,
    double emt,
    long cap,
    double[::1] x_out,
    double[::1] y_out,
):
    """Flowed-and-reduced surface coordinates of a batch of frames."""
    mobius_points(h11, h12, h21, h22, et, emt, x_out, y_out)
    reduce_points(x_out, y_out, cap)
