"""Nonuniform quantum Fourier transform by truncated-SVD interpolation.

Submodules
----------
linalg     complex vectors and matrices, one-sided Jacobi SVD
transform  QFT / inverse QFT, phase states, readout distributions
frames     tight approximation sets and orthogonal completion
engine     the four-stage nonuniform transform, direct oracle, baseline
search     Grover search by exact state-vector simulation
analysis   probability bounds, cost models, effectiveness measurement
"""

from . import analysis, engine, frames, linalg, search, transform
from .engine import (
    NonuniformAngleSet,
    SvdBasis,
    direct_nudft,
    interp_nudft_baseline,
    precompute_interpolators,
    qsvd_nudft,
    reference_basis,
)
from .errors import (
    ConfigurationError,
    ContractError,
    ConvergenceError,
    DegenerateFrameError,
    DimensionError,
    InputFormatError,
    NumericError,
    NuqftError,
    OutOfRegimeError,
    PartitionError,
)
from .linalg import SvdFactorization, svd
from .transform import RegisterState, PhaseParameter, iqft, qft

__version__ = "0.1.0"
