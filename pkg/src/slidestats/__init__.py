"""Scale-invariant slide statistics for finite point sets.

From the nearest-neighbor distances of a point set the package evaluates an
entropy-based pair of statistics (rho1, rho2) that is invariant under
location and scale changes, estimates dimensions of point processes from
them, reproduces the reference Monte Carlo tables, and builds goodness-of-fit
curves for financial return series.
"""

from .entropy import (
    genial_entropy_complement_ecdf,
    genial_entropy_profile,
    genial_entropy_quadrature,
    genial_entropy_step,
)
from .errors import (
    BadSpec,
    DuplicatePoint,
    NonNegativeRho2,
    NonPositiveDistance,
    NonPositivePrice,
    NotNormalized,
    NumericFailure,
    OracleUnstable,
    ParseError,
    QuadratureNoConvergence,
    SeriesTooShort,
    SlideOverflow,
    SlideStatsError,
    TooFewPoints,
)
from .generators import (
    SourceSpec,
    cantor_points,
    cos_walk,
    derive_seed,
    primes,
    sample,
    sample_stable,
    sierpinski_points,
    stream_rng,
)
from .harness import (
    ExperimentSummary,
    ScatterCloud,
    TangibilityReport,
    TestReport,
    cloud,
    normality_test,
    parse_config,
    replicate,
    table_run,
    tangibility_check,
)
from .neighbors import (
    PointCloud,
    dedupe_points,
    load_cloud,
    make_cloud,
    nn_distances,
    nn_distances_1d,
)
from .profiles import (
    DistanceProfile,
    StepDensity,
    complement_ecdf_density,
    make_profile,
    make_step_density,
    profile_density,
)
from .returns import (
    ReturnSeries,
    RhoCurve,
    delay_embed,
    load_prices,
    log_returns,
    rho_curve,
    scatter_point,
)
from .slide import (
    SlideEstimate,
    TangibilityTarget,
    dimension_from_rho2,
    log_slide_reference,
    rho1,
    rho1_fd,
    rho2,
    rho2_fd,
    right_derivative,
    slide_estimate,
    slide_function_step,
    slide_pair,
    slide_pair_batch,
    tangible_target,
    zeta_value,
)

__version__ = "0.1.0"
