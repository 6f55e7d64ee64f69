"""Spectral solver and variational-stability analyzer for periodic
finite-depth gravity water waves."""

from .continuation import Branch, BranchPoint, branch_validate, critical_mu, newton_solve, trace_branch
from .errors import (
    ContinuationError,
    GraphConditionWarning,
    NonPhysicalStateError,
    ParameterError,
    SingularTransformError,
    TruncationError,
)
from .problem import (
    WaveParameters,
    WaveState,
    bernoulli_residual,
    functional_lambda,
    mass_flux_from_constraint,
    mean_depth_and_speed,
    residual,
    residual_jacobian,
    surface_points,
    symbol_compare,
)
from .spectral import SampledFunction, SpectralFunction
from .stability import (
    OperatorMatrix,
    StabilityReport,
    assemble_direct_form,
    assemble_transformed_operator,
    form_equivalence_check,
    perturbation_prediction,
    plotnikov_potential,
    spectrum_along_branch,
    symmetric_eigen,
    trivial_full_variation,
    trivial_spectrum,
)
from .strip import ComplexBoundaryFunction, StripPoint, build_W, extend, plotnikov_forward, plotnikov_inverse

__version__ = "0.1.0"
