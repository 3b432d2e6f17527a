"""Majorization uncertainty relations for finite-dimensional projective measurements.

Submodules
----------
numkernel
    Hermitian largest-eigenvalue solver (compiled Jacobi kernel with a numpy fallback).
quantum
    States, orthonormal bases, Born probabilities and the built-in four-level bases.
majorization
    Majorization order, direct product / direct sum, least concave majorant.
measures
    Schur-concave uncertainty measures and additivity checks.
bounds
    Direct-product and direct-sum bound construction by projector-sum maximization.
experiments
    Sweeps over the probe state family, shot-noise simulation, Monte Carlo checks.
"""
from .bounds import CumulativeBoundProfile, dp_bound, ds_bound, normalized_ds_bound, pairwise_bound_report
from .majorization import direct_product, direct_sum, dominated_by_profile, flatten, majorizes
from .measures import REGISTRY as MEASURES
from .numkernel import BACKEND
from .quantum import (
    DensityMatrix,
    OrthonormalBasis,
    ProbabilityVector,
    PureState,
    born_probabilities,
    builtin_bases,
    state_family,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CumulativeBoundProfile",
    "DensityMatrix",
    "MEASURES",
    "OrthonormalBasis",
    "ProbabilityVector",
    "PureState",
    "born_probabilities",
    "builtin_bases",
    "direct_product",
    "direct_sum",
    "dominated_by_profile",
    "dp_bound",
    "ds_bound",
    "flatten",
    "majorizes",
    "normalized_ds_bound",
    "pairwise_bound_report",
    "state_family",
]
