"""Material evolution toolkit: distribution fibers, evolution
classification, isomorphism search, leaf tracing and remodeling-process
analysis on top of the C++ core."""

from matdist._core import (  # noqa: F401
    ClassificationReport,
    ConstitutiveLaw,
    ExpCheck,
    FiberReport,
    FreezeTimeReport,
    Grid,
    GridPoint,
    GrowthClass,
    GrowthEntry,
    GrowthReport,
    IsoConfig,
    IsoSearchResult,
    IsoStatus,
    JetMode,
    KernelVariant,
    LawJet,
    LeafTrace,
    LeafVariant,
    MassConsistencyEntry,
    MassConsistencyReport,
    MaterialIsomorphism,
    MembershipReport,
    NullspaceResult,
    PairProbe,
    PointOutcome,
    RemodelingProcess,
    SamplingConfig,
    SweepResult,
    SymmetryAlgebra,
    TraceAbort,
    TraceBranch,
    TransitivityEvidence,
    Verdict,
    check_membership,
    classify,
    classify_growth,
    find_isomorphism,
    fiber_report,
    freeze_time_check,
    grid_sweep,
    jet,
    make_builtin,
    mass_consistency,
    membership_test,
    nullspace,
    registry_names,
    sample_gl3,
    solve_kernel,
    symmetry_algebra,
    trace_leaf,
    transitivity_probe,
    velocity_gradient,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
