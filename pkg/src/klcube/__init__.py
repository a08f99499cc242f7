"""
Kazhdan-Lusztig polynomials of symmetric groups through hypercube
decompositions of Bruhat intervals.

The classical recursion in :mod:`klcube.klbase` is the oracle; the modules
:mod:`klcube.hypercube`, :mod:`klcube.decomp` and :mod:`klcube.formula`
implement the decomposition side, and :mod:`klcube.sweep` checks one
against the other over whole groups.
"""

from .decomp import DecompositionFailure, HypercubeDecomposition, canonical_L, enumerate_decompositions, validate
from .formula import FormulaKL, VerificationRecord, check_formula
from .graph import BruhatInterval, RankedDigraph, SymmetricGroup, build_interval
from .klbase import KLTable
from .perm import Permutation, bruhat_leq
from .poly import IntPolynomial
from .sweep import sweep

__version__ = "0.1.0"

__all__ = [
    "BruhatInterval",
    "DecompositionFailure",
    "FormulaKL",
    "HypercubeDecomposition",
    "IntPolynomial",
    "KLTable",
    "Permutation",
    "RankedDigraph",
    "SymmetricGroup",
    "VerificationRecord",
    "bruhat_leq",
    "build_interval",
    "canonical_L",
    "check_formula",
    "enumerate_decompositions",
    "sweep",
    "validate",
]
