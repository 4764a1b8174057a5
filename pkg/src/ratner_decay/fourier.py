"""Finitely supported weight vectors and their correlation sums.

A smooth vector of an irreducible model expands over the weight basis,
v = sum_n c_n phi_n.  Keeping only finitely many modes preserves smoothness
and makes every Sobolev-type quantity an exact finite sum: the rotation
generator W satisfies L_W phi_n = i n phi_n, hence L_W^3 phi_n =
-i n^3 phi_n and

    ||v||^2 = sum |c_n|^2,        ||L_W^3 v||^2 = sum n^6 |c_n|^2.

Pair correlations <v, T(a(t)) w> then reduce to finite double sums of the
basis coefficients B_{n,m}(t), which is how the summed decay bounds are
assembled and tested.  Truncating an infinite expansion is the caller's
responsibility; this module never estimates tails.
"""

from __future__ import annotations

import json
import math
import operator
from collections.abc import Mapping

import numpy as np

__all__ = [
    "FourierVector",
    "absolute_sums",
    "load_vector",
    "pair_correlation",
    "save_vector",
    "sobolev_norms",
    "zeta_factors",
]


class FourierVector:
    """A finite weight expansion sum_n c_n phi_n.

    Parameters
    ----------
    coefficients : mapping or iterable of (n, c) pairs
        Integer weights with complex coefficients. Weights must be
        distinct; the order given does not matter.

    Notes
    -----
    Instances are immutable and hashable. Addition and scalar
    multiplication act coefficientwise, so linear-algebra style tests can
    build combinations directly.
    """

    __slots__ = ("modes",)

    def __init__(self, coefficients):
        if isinstance(coefficients, Mapping):
            coefficients = coefficients.items()
        pairs = []
        seen = set()
        for n, c in coefficients:
            n = operator.index(n)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"coefficient of weight {n} is not finite: {c!r}")
            if n in seen:
                raise ValueError(f"duplicate weight {n}")
            seen.add(n)
            pairs.append((n, c))
        pairs.sort(key=lambda pair: pair[0])
        object.__setattr__(self, "modes", tuple(pairs))

    def __setattr__(self, name, value):
        raise AttributeError("FourierVector is immutable")

    def __iter__(self):
        return iter(self.modes)

    def __len__(self):
        return len(self.modes)

    def __eq__(self, other):
        if not isinstance(other, FourierVector):
            return NotImplemented
        return self.modes == other.modes

    def __hash__(self):
        return hash(self.modes)

    def __repr__(self):
        inside = ", ".join(f"({n}, {c})" for n, c in self.modes)
        return f"FourierVector([{inside}])"

    def __add__(self, other):
        if not isinstance(other, FourierVector):
            return NotImplemented
        combined = dict(self.modes)
        for n, c in other.modes:
            combined[n] = combined.get(n, 0j) + c
        return FourierVector(combined.items())

    def __mul__(self, scalar):
        scalar = complex(scalar)
        return FourierVector((n, scalar * c) for n, c in self.modes)

    __rmul__ = __mul__

    @property
    def weights(self):
        return tuple(n for n, _ in self.modes)

    def coefficient(self, n):
        """The coefficient of weight `n`, zero when the mode is absent."""
        for k, c in self.modes:
            if k == n:
                return c
        return 0j

    def as_dict(self):
        return dict(self.modes)


def _mode_arrays(v):
    weights = np.array([n for n, _ in v.modes], dtype=float)
    coeffs = np.array([c for _, c in v.modes], dtype=complex)
    return weights, coeffs


def sobolev_norms(v):
    """Return (||v||, ||L_W^3 v||) for a finite weight expansion.

    Both norms are exact sums over the support: ||v||^2 = sum |c_n|^2 and,
    since L_W^3 phi_n = -i n^3 phi_n, ||L_W^3 v||^2 = sum n^6 |c_n|^2.
    """
    weights, coeffs = _mode_arrays(v)
    sq = np.abs(coeffs) ** 2
    return math.sqrt(float(np.sum(sq))), math.sqrt(float(np.sum(weights**6 * sq)))


def absolute_sums(v):
    """Return (sum |c_n|, sum n^2 |c_n|) over the support of `v`.

    These are the mode sums a summed correlation bound pays for. Each is
    controlled by the norms: splitting off n = 0 and applying
    Cauchy-Schwarz with sum_{n!=0} n^-6 = 2 zeta(6) gives

        sum |c_n|     <= ||v|| + sqrt(2 zeta(6)) ||L_W^3 v||,

    and weighting by n^2 = |n|^3 / |n| with sum_{n!=0} n^-2 = 2 zeta(2),

        sum n^2 |c_n| <= sqrt(2 zeta(2)) ||L_W^3 v||.
    """
    weights, coeffs = _mode_arrays(v)
    mags = np.abs(coeffs)
    return float(np.sum(mags)), float(np.sum(weights**2 * mags))


def zeta_factors():
    """The Cauchy-Schwarz factors (sqrt(2 zeta(2)), sqrt(2 zeta(6))).

    zeta(2) = pi^2/6 and zeta(6) = pi^6/945 are classical, so the factors
    are sqrt(pi^2/3) ~ 1.8138 and sqrt(2 pi^6/945) ~ 1.4264.
    """
    return math.sqrt(math.pi**2 / 3.0), math.sqrt(2.0 * math.pi**6 / 945.0)


def pair_correlation(model, v, w, t, tol=1e-10):
    """<v, T(a(t)) w> assembled as a double sum of basis coefficients.

    Expands both vectors over the weight basis and sums
    c_n conj(d_m) B_{n,m}(t) over the finite supports; the conjugate on
    d_m comes from the inner product being conjugate-linear in its second
    slot (magnitudes do not depend on that convention). Weights outside
    the model's support span trivial weight spaces and contribute zero.

    Propagates quadrature non-convergence from the coefficient block.
    """
    if not v.modes or not w.modes:
        return 0j
    block, _ = model.coefficient_block(v.weights, w.weights, t, tol=tol)
    _, c = _mode_arrays(v)
    _, d = _mode_arrays(w)
    return complex(c @ block @ np.conj(d))


def load_vector(path):
    """Read a FourierVector from the JSON mode-list format.

    The file holds ``{"modes": [{"n": -2, "re": 0.1, "im": 0.0}, ...]}``;
    a missing "re" or "im" entry means that part is zero.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "modes" not in data:
        raise ValueError(f"{path}: expected a JSON object with a 'modes' list")
    modes = data["modes"]
    if not isinstance(modes, list):
        raise ValueError(f"{path}: 'modes' must be a list")
    pairs = []
    for entry in modes:
        if not isinstance(entry, dict) or "n" not in entry:
            raise ValueError(f"{path}: each mode needs an integer 'n': {entry!r}")
        pairs.append((entry["n"], complex(entry.get("re", 0.0), entry.get("im", 0.0))))
    try:
        return FourierVector(pairs)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc


def save_vector(v, path):
    """Write `v` in the JSON mode-list format, sorted by weight."""
    payload = {"modes": [{"im": c.imag, "n": n, "re": c.real} for n, c in v.modes]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
