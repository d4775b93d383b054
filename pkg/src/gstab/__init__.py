"""Exact and sampled Gowers-3 norms, Weyl distributions and stabilizer testing for small n."""

from ._accel import backend
from .f2core import BitVec, F2Subspace, SymplecticPoint, symplectic_fourier, symplectic_product, walsh_hadamard
from .pauli import CanonicalForm, SymplecticMap, anticommuting_family, canonicalize_subgroup, commutes, weyl_matrix
from .state import (
    CharTable,
    StateVector,
    WeylTable,
    char_table,
    gowers3_pow8,
    gowers_norm_definition,
    haar_random_state,
    make_phase_state,
    make_stabilizer_state,
    noisy_stabilizer,
    random_stabilizer_state,
    weyl_expect_q,
    weyl_expectation,
    weyl_table,
)

__version__ = "0.1.0"

__all__ = [
    "BitVec",
    "CanonicalForm",
    "CharTable",
    "F2Subspace",
    "StateVector",
    "SymplecticMap",
    "SymplecticPoint",
    "WeylTable",
    "anticommuting_family",
    "backend",
    "canonicalize_subgroup",
    "char_table",
    "commutes",
    "gowers3_pow8",
    "gowers_norm_definition",
    "haar_random_state",
    "make_phase_state",
    "make_stabilizer_state",
    "noisy_stabilizer",
    "random_stabilizer_state",
    "symplectic_fourier",
    "symplectic_product",
    "walsh_hadamard",
    "weyl_expect_q",
    "weyl_expectation",
    "weyl_matrix",
    "weyl_table",
]
