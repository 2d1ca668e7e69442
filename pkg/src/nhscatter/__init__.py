"""Scattering off complex 1D potentials, spectral singularities, and metric operators."""

from .errors import (
    AtSpectralSingularityError,
    ConfigurationError,
    ExceptionalPointError,
    InvalidInputError,
    NoPositiveMetricError,
    ParseError,
)
from .pseudo_hermitian import (
    BiorthonormalSystem,
    MetricDecomposition,
    biorthonormal_eig,
    c_operator_check,
    check_antilinear_symmetry,
    hermitize,
    is_spectrum_real,
    metric_from_spectrum,
)
from .spectral_singularity import (
    ResonancePoint,
    SpectralSingularity,
    delta_singularity,
    find_singularities,
    pt_barrier_singularities,
    resonance_curve,
)
from .transfer_matrix import (
    Delta,
    Potential,
    ScatteringData,
    Segment,
    TransferMatrix,
    compose,
    delta_transfer,
    double_delta,
    jost_coefficients,
    pt_barrier,
    scattering_data,
    segment_transfer,
    shifted_delta_transfer,
    single_delta,
)

__version__ = "0.1.0"
