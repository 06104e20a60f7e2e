"""Central configurations of the isosceles-trapezoid four-body problem.

Closed-form pair masses, sign analysis of the parameter plane, a generic
planar N-body centrality checker, and a fixed-step integrator for
rigid-rotation verification.  See the README for the CLI surface.
"""

__version__ = "0.1.0"

from .geometry import (
    DegenerateMassError,
    DistanceCubes,
    PlanarPoint,
    TrapezoidConfiguration,
    TrapezoidParams,
    build_configuration,
    compute_distance_cubes,
    reconstruct_positions,
)
from .masses import (
    DegenerateConfigurationError,
    MassSolution,
    RegionLabel,
    SignTriple,
    classify,
    sign_functions,
    solve_masses,
    solve_masses_linear,
)
from .oracle import (
    PlanarSystem,
    ResidualReport,
    cc_residual,
    center_of_mass,
    is_central_configuration,
    potential_and_moment,
    trapezoid_system,
)
from .dynamics import (
    BodyState,
    CollisionError,
    RigidityReport,
    SystemState,
    Trajectory,
    UnphysicalParametersError,
    accelerations,
    init_relative_equilibrium,
    integrate,
    rigidity_metrics,
    trapezoid_accelerations,
)
from .regions import (
    ApproxCoefficients,
    ApproxReport,
    BoundaryCurve,
    BoundarySample,
    DomainAudit,
    NegativeDiscriminantError,
    NegativeRadicandError,
    RasterGrid,
    RootSearch,
    audit_published_domains,
    compare_exact_vs_approx,
    exact_boundary,
    exact_f1,
    exact_f3,
    f1_approx,
    f3_approx,
    g1_published,
    g3_published,
    raster,
    trace_boundary,
)

__all__ = [
    "__version__",
    "DegenerateMassError",
    "DistanceCubes",
    "PlanarPoint",
    "TrapezoidConfiguration",
    "TrapezoidParams",
    "build_configuration",
    "compute_distance_cubes",
    "reconstruct_positions",
    "DegenerateConfigurationError",
    "MassSolution",
    "RegionLabel",
    "SignTriple",
    "classify",
    "sign_functions",
    "solve_masses",
    "solve_masses_linear",
    "PlanarSystem",
    "ResidualReport",
    "cc_residual",
    "center_of_mass",
    "is_central_configuration",
    "potential_and_moment",
    "trapezoid_system",
    "BodyState",
    "CollisionError",
    "RigidityReport",
    "SystemState",
    "Trajectory",
    "UnphysicalParametersError",
    "accelerations",
    "init_relative_equilibrium",
    "integrate",
    "rigidity_metrics",
    "trapezoid_accelerations",
    "ApproxCoefficients",
    "ApproxReport",
    "BoundaryCurve",
    "BoundarySample",
    "DomainAudit",
    "NegativeDiscriminantError",
    "NegativeRadicandError",
    "RasterGrid",
    "RootSearch",
    "audit_published_domains",
    "compare_exact_vs_approx",
    "exact_boundary",
    "exact_f1",
    "exact_f3",
    "f1_approx",
    "f3_approx",
    "g1_published",
    "g3_published",
    "raster",
    "trace_boundary",
]
