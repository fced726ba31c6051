"""Chebyshev polynomials, capacities and Widom factors on composition-tower Julia sets.

The package builds boundary samples of the sets left invariant by a
sequence of polynomial maps, computes their monic minimax (Chebyshev)
polynomials both structurally (rescaled composition minus a center
shift) and through an independent discrete minimax solver, and measures
logarithmic capacities and Widom factors.
"""

__version__ = "0.1.0"

from .cheb import (
    ArnoldiBasis,
    ChebyshevSolution,
    Disk,
    SolverParams,
    TauStep,
    VerificationReport,
    enclosing_disk,
    lawson_minimax,
    structured_chebyshev,
    tau_sequence,
    verify_theorem,
    weighted_arnoldi,
)
from .config import (
    RunConfig,
    build_sequence,
    emit_config,
    fingerprint,
    parse_config,
    solver_params,
)
from .errors import (
    CompositionTooLarge,
    ConfigError,
    EmptyGrid,
    GeneratorFailure,
    JuliachebError,
    NoAdmissibleRadius,
    NoConvergence,
    NonConvergence,
    NumericError,
    RankDeficient,
    SolverStalled,
)
from .julia import (
    Classification,
    EscapeRadius,
    GridSpec,
    PointCloud,
    PolynomialSequence,
    Provenance,
    ValidationReport,
    capacity,
    classify,
    distance_profile,
    escape_depths,
    escape_radius,
    periodic_sequence,
    pull_circle,
    quadratic_constant,
    quadratic_perturbed,
    quadratic_random,
    sample_julia,
    validate_regularity,
)
from .poly import (
    Polynomial,
    compose,
    derivative,
    evaluate,
    monomial,
    preimages,
    quadratic_roots,
)
from .widom import WidomReport, WidomRow, conjecture_run, widom_factor, widom_general

__all__ = [name for name in dir() if not name.startswith("_")]
