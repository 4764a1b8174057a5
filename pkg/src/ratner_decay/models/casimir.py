"""Finite-difference Casimir and rotation-weight oracles.

These work through the generic action surface of the models, so the same
code validates the circle and disk realizations. The Casimir operator is
(L_V^2 + L_Q^2 - L_W^2)/4 with the one-parameter subgroups

    exp(sV) = [[cosh s, sinh s], [sinh s, cosh s]]
    exp(sQ) = [[e^s, 0], [0, e^-s]]
    exp(sW) = [[cos s, sin s], [-sin s, cos s]].
"""

from __future__ import annotations

from .base import GroupElement

PROBE_NORM_FLOOR = 1e-8


def _second_difference_sum(model, coeffs, nodes, h):
    """Grid values of (L_V^2 + L_Q^2 - L_W^2) f / 4 up to O(h^2)."""
    act = lambda g: model.action_values(g, coeffs, nodes)
    base = act(GroupElement.identity())
    total = (
        act(GroupElement.symmetric_boost(h))
        + act(GroupElement.symmetric_boost(-h))
        + act(GroupElement.diagonal_flow(h))
        + act(GroupElement.diagonal_flow(-h))
        - act(GroupElement.rotation(h))
        - act(GroupElement.rotation(-h))
        - 2.0 * base
    )
    return total / (4.0 * h * h)


def casimir_check(model, probe, h=0.02):
    """Rayleigh quotient of the finite-difference Casimir on a weight sample.

    Applies centered second differences along the three subgroup directions
    at steps h, h/2 and h/4, removes the O(h^2) and O(h^4) terms by two
    levels of Richardson extrapolation, and projects back onto the probe.
    For an eigenvector the result estimates the model's Casimir eigenvalue;
    the remaining error is O(h^6), around 1e-10 at the default step, which
    matters because the stored eigenvalue seeds the coefficient ODE whose
    growing mode amplifies parameter error.

    Raises
    ------
    ValueError
        If the probe norm is below 1e-8 (the quotient is ill-conditioned).
    """
    if probe.norm < PROBE_NORM_FLOOR:
        raise ValueError(f"probe norm {probe.norm:.3e} is too small for a stable quotient")
    nodes = model.grid_start
    coeffs = {probe.n: 1.0}
    sums = [_second_difference_sum(model, coeffs, nodes, h / 2**i) for i in range(3)]
    first = (4.0 * sums[1] - sums[0]) / 3.0
    second = (4.0 * sums[2] - sums[1]) / 3.0
    extrapolated = (16.0 * second - first) / 15.0
    reference = model.action_values(GroupElement.identity(), coeffs, nodes)
    num = model.values_inner(extrapolated, reference, nodes)
    den = model.values_inner(reference, reference, nodes)
    return (num / den).real


def weight_phase_check(model, n, h=0.01):
    """First derivative of the rotation action on phi_n; should be i*n.

    Centered differences of T(r(s)) at s = +-h and +-h/2 with one Richardson
    step give the generator L_W applied to phi_n to O(h^4).
    """
    nodes = model.grid_start
    coeffs = {n: 1.0}
    act = lambda g: model.action_values(g, coeffs, nodes)

    def central(step):
        return (act(GroupElement.rotation(step)) - act(GroupElement.rotation(-step))) / (2 * step)

    extrapolated = (4.0 * central(h / 2) - central(h)) / 3.0
    reference = act(GroupElement.identity())
    num = model.values_inner(extrapolated, reference, nodes)
    den = model.values_inner(reference, reference, nodes)
    return num / den
