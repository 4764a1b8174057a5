"""Pure-numpy kernels: vectorized loops with the reference op order.

The compiled backend replays exactly the same per-element operation
sequence, so both produce bit-identical results: translations use
round-half-even (np.rint here, C rint there), inversions divide by the
freshly computed radius, and no fused multiply-adds are allowed on either
side. Keep the op order in sync with ``_core.pyx`` when editing.

All functions mutate their array arguments in place; the package facade
passes freshly allocated arrays.
"""

import numpy as np


def reduce_points(x, y, cap):
    """Translate/invert (x, y) into the standard fundamental domain.

    Each element repeats {x -= rint(x); stop if x^2 + y^2 >= 1; else
    (x, y) <- (-x, y)/(x^2+y^2)} until it lands in the domain. The imaginary
    part strictly increases at every inversion, so the loop terminates for
    every valid input; `cap` guards float pathologies only.
    """
    active = np.ones(x.shape, dtype=bool)
    # A point needing k inversions stays active for exactly k rounds, so
    # anything still active after cap rounds asked for >= cap inversions —
    # the same condition the compiled backend's per-element inversion
    # counter raises on.
    for _ in range(cap):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            return
        xa = x[idx]
        ya = y[idx]
        xa -= np.rint(xa)
        r2 = xa * xa + ya * ya
        inside = r2 < 1.0
        x[idx] = np.where(inside, -xa / r2, xa)
        y[idx] = np.where(inside, ya / r2, ya)
        active[idx] = inside
    if not active.any():
        return
    first = int(np.flatnonzero(active)[0])
    raise RuntimeError(
        f"fundamental-domain reduction did not terminate within {cap} steps "
        f"(first stuck input index {first})"
    )


def mobius_points(h11, h12, h21, h22, et, emt, x_out, y_out):
    """(a(t) g) acting on i, written to (x_out, y_out); no reduction.

    With A, B, C, D the entries of a(t) g, the action on i is
    ((AC + BD) + (AD - BC) i) / (C^2 + D^2).
    """
    a = et * h11
    b = et * h12
    c = emt * h21
    d = emt * h22
    den = c * c + d * d
    np.divide(a * c + b * d, den, out=x_out)
    np.divide(a * d - b * c, den, out=y_out)


def flow_points(h11, h12, h21, h22, et, emt, cap, x_out, y_out):
    """Flowed-and-reduced surface coordinates of a batch of frames."""
    mobius_points(h11, h12, h21, h22, et, emt, x_out, y_out)
    reduce_points(x_out, y_out, cap)
