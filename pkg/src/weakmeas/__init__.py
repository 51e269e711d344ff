"""Finite-resolution quantum measurement: Gaussian measurement operators,
information/noise splitting with quasi-states, and readout correlations."""

from .engine import (
    DensityMatrix,
    MeasurementModel,
    OutcomeGrid,
    decoherence_factor,
    default_grid,
    kraus,
    outcome_moments,
    outcome_pdf,
    posterior,
    total_channel,
)
from .errors import (
    ConfigError,
    DimensionMismatch,
    GridOverflow,
    MeasurementError,
    NegligibleOutcome,
    NonHermitianInput,
    ZeroDiagonal,
)
from .infonoise import (
    QuasiDensityMatrix,
    negativity,
    noise_free_state,
    positivity_condition,
    purity,
    reconstruct_initial,
)
from .linalg import (
    HermitianObservable,
    SpectralDecomposition,
    eig_hermitian,
    expectation,
    spectral_apply,
    tensor_product,
    trace_distance,
)

__version__ = "0.1.0"
