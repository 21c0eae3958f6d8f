"""Streaming difference-of-convex optimization with an expected-PCA benchmark.

The library minimizes F(w) = E[g(w, Z)] - E[h(w, Z)] over a compact convex
set from a stream of samples.  Three streaming solver variants trade off
what is computed exactly versus sampled per batch, alongside full-batch
DCA and projected stochastic subgradient baselines.  The bundled
application is expected PCA (leading eigenvector of a second-moment
matrix) with two DC splits of the same objective, plus data ingestion,
synthetic generators, and a benchmark harness with CSV/SVG reporting.
"""
from .core import (
    Batch,
    CriticalityReport,
    DcProblem,
    EuclideanBall,
    ExactFirstComponent,
    FeasibleSet,
    StrongConvexity,
    SubproblemResult,
    Vector,
    criticality_residual,
    empirical_objective,
)
from .schedules import (
    RademacherBound,
    SampleSchedule,
    ScheduleOverflowError,
    ScheduleValidation,
    rademacher_discrete,
    rademacher_holder_in_w,
    rademacher_holder_in_z,
    validate_schedule,
)
from .epca import (
    SUBPROBLEM_BACKENDS,
    EigenReport,
    decomp1_problem,
    decomp2_problem,
    epca1_t,
    epca1_update,
    epca2_subproblem,
    epca2_t,
    epca_objective,
    top_eigvec_oracle,
)
from .solvers import (
    TERMINATIONS,
    VARIANTS,
    IterationRecord,
    RunTrace,
    SolverConfig,
    SolverPreconditionError,
    random_ball_point,
    run_dca,
    run_osdca_exact_dh,
    run_osdca_exact_g,
    run_osdca_full,
    run_pss,
    run_variant,
)
from .data import (
    DATASET_MANIFEST,
    CovarianceSpec,
    DataFormatError,
    Dataset,
    IIDStream,
    OnePassStream,
    Provenance,
    ShiftStreamSpec,
    gen_gaussian,
    gen_shift_stream,
    load_any,
    load_libsvm,
    normalize_unit,
    parse_libsvm,
    read_cache,
    shuffle,
    stream_batches,
    write_cache,
    write_libsvm,
)
from .bench import (
    DEFAULT_LAMBDA_GRID,
    EXPERIMENT_KINDS,
    CurvePoint,
    ExperimentConfig,
    ExperimentResult,
    GapSummary,
    GeneratorSpec,
    OracleDegeneracyError,
    SolverSetting,
    SuboptimalityCurve,
    WStarReport,
    canonicalize_csv,
    compute_w_star,
    emit_csv,
    emit_svg,
    run_experiment,
    summarize_gap,
)
from .seeding import DATA, INIT, ORACLE, SHUFFLE, child_seed, make_rng, seed_sequence

__version__ = "0.1.0"

__all__ = [
    # core
    "Batch",
    "Vector",
    "FeasibleSet",
    "EuclideanBall",
    "StrongConvexity",
    "SubproblemResult",
    "ExactFirstComponent",
    "DcProblem",
    "CriticalityReport",
    "criticality_residual",
    "empirical_objective",
    # schedules
    "SampleSchedule",
    "ScheduleOverflowError",
    "ScheduleValidation",
    "validate_schedule",
    "RademacherBound",
    "rademacher_holder_in_w",
    "rademacher_holder_in_z",
    "rademacher_discrete",
    # epca
    "SUBPROBLEM_BACKENDS",
    "epca_objective",
    "epca1_t",
    "epca1_update",
    "epca2_t",
    "epca2_subproblem",
    "EigenReport",
    "top_eigvec_oracle",
    "decomp1_problem",
    "decomp2_problem",
    # solvers
    "VARIANTS",
    "TERMINATIONS",
    "SolverPreconditionError",
    "SolverConfig",
    "IterationRecord",
    "RunTrace",
    "random_ball_point",
    "run_dca",
    "run_osdca_full",
    "run_osdca_exact_g",
    "run_osdca_exact_dh",
    "run_pss",
    "run_variant",
    # data
    "DATASET_MANIFEST",
    "DataFormatError",
    "Provenance",
    "Dataset",
    "parse_libsvm",
    "load_libsvm",
    "load_any",
    "write_libsvm",
    "normalize_unit",
    "shuffle",
    "OnePassStream",
    "IIDStream",
    "stream_batches",
    "CovarianceSpec",
    "gen_gaussian",
    "ShiftStreamSpec",
    "gen_shift_stream",
    "write_cache",
    "read_cache",
    # bench
    "EXPERIMENT_KINDS",
    "DEFAULT_LAMBDA_GRID",
    "OracleDegeneracyError",
    "WStarReport",
    "compute_w_star",
    "GeneratorSpec",
    "SolverSetting",
    "ExperimentConfig",
    "CurvePoint",
    "SuboptimalityCurve",
    "GapSummary",
    "summarize_gap",
    "ExperimentResult",
    "run_experiment",
    "emit_csv",
    "canonicalize_csv",
    "emit_svg",
    # seeding
    "SHUFFLE",
    "INIT",
    "DATA",
    "ORACLE",
    "seed_sequence",
    "make_rng",
    "child_seed",
    "__version__",
]
