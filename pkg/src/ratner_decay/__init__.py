"""Explicit decay bounds for matrix coefficients of SL(2,R) representations.

The library evaluates the closed-form decay constants and envelopes, computes
matrix coefficients of the diagonal flow in concrete irreducible models by two
independent methods (quadrature and the governing ODE), verifies every
intermediate bound, and Monte-Carlo-checks the exponential-mixing consequence
for the geodesic flow on the modular surface.
"""

from ratner_decay.bounds import (
    BoundReport,
    SpectralProfile,
    check_lemma22,
    corollary_bound,
    lemma22_bound,
    theorem1_bound,
    theorem3_bound,
    verify_theorem1,
)
from ratner_decay.constants import (
    BaseConstants,
    CasimirCase,
    DecayEnvelope,
    LatticeEnvelope,
    base_constants,
    casimir_case,
    characteristic_roots,
    decay_envelope,
    envelope_b,
    lattice_envelope,
)
from ratner_decay.fourier import (
    FourierVector,
    absolute_sums,
    load_vector,
    pair_correlation,
    save_vector,
    sobolev_norms,
    zeta_factors,
)

__version__ = "0.1.0"

__all__ = [
    "BaseConstants",
    "BoundReport",
    "CasimirCase",
    "DecayEnvelope",
    "FourierVector",
    "LatticeEnvelope",
    "SpectralProfile",
    "absolute_sums",
    "base_constants",
    "casimir_case",
    "characteristic_roots",
    "check_lemma22",
    "corollary_bound",
    "decay_envelope",
    "envelope_b",
    "lattice_envelope",
    "lemma22_bound",
    "load_vector",
    "pair_correlation",
    "save_vector",
    "sobolev_norms",
    "theorem1_bound",
    "theorem3_bound",
    "verify_theorem1",
    "zeta_factors",
    "__version__",
]
