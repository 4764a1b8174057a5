"""Concrete irreducible models with quadrature matrix coefficients."""

from __future__ import annotations

from .base import (
    CoefficientValue,
    Complementary,
    Discrete,
    GroupElement,
    IrreducibleModel,
    Principal,
    QuadratureConvergenceError,
    WeightVectorSample,
    coefficient_derivative,
    matrix_coefficient,
)
from .casimir import casimir_check, weight_phase_check
from .circle import ComplementarySeries, PrincipalSeries
from .disk import DiscreteSeries


def build_model(kind):
    """Construct the model for a parameter tag.

    Parameters
    ----------
    kind : Principal, Complementary or Discrete
        The family tag carrying its parameter.
    """
    if isinstance(kind, Principal):
        return PrincipalSeries(kind.nu)
    if isinstance(kind, Complementary):
        return ComplementarySeries(kind.u)
    if isinstance(kind, Discrete):
        return DiscreteSeries(kind.k)
    raise TypeError(f"unknown model kind {kind!r}")


def parse_model_spec(text):
    """Parse 'principal:NU', 'complementary:U' or 'discrete:K' into a model.

    This is the syntax the command line uses.
    """
    name, sep, raw = text.partition(":")
    if not sep or not raw:
        raise ValueError(f"model spec {text!r} is not of the form family:parameter")
    name = name.strip().lower()
    raw = raw.strip()
    try:
        if name == "principal":
            return build_model(Principal(float(raw)))
        if name == "complementary":
            return build_model(Complementary(float(raw)))
        if name == "discrete":
            return build_model(Discrete(int(raw)))
    except ValueError as exc:
        raise ValueError(f"bad parameter in model spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown model family {name!r} (expected principal, complementary or discrete)")


__all__ = [
    "CoefficientValue",
    "Complementary",
    "ComplementarySeries",
    "Discrete",
    "DiscreteSeries",
    "GroupElement",
    "IrreducibleModel",
    "Principal",
    "PrincipalSeries",
    "QuadratureConvergenceError",
    "WeightVectorSample",
    "build_model",
    "casimir_check",
    "coefficient_derivative",
    "matrix_coefficient",
    "parse_model_spec",
    "weight_phase_check",
]
