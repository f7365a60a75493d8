"""weightlab: a numerical laboratory for doubling weights built from Riesz
products through the Hardy-Littlewood maximal operator, with welding-map and
quasicircle diagnostics."""

from ._kernels import USING_NUMBA
from .conformal import (
    CurveTrace,
    FourierSeries,
    arclength_reparam,
    bloch_norm_from_coefficients,
    bloch_norm_probe,
    chord_arc_scan,
    conjugate_function,
    fourier_series,
    jensen_h1_probe,
    poisson_extension,
    trace_curve,
)
from .diagnostics import (
    DiagnosticsReport,
    DistributionFunction,
    a1_characteristic,
    ap_characteristic,
    bmo_norm,
    diagnose,
    distribution_function,
    doubling_constant,
    layer_cake_check,
    reverse_holder_probe,
    verify_llogl_lp_bound,
)
from .errors import (
    IndexNotFound,
    NonIncreasingError,
    NonMonotonicError,
    NumericFailure,
    ValidationError,
    WeightlabError,
)
from .harness import (
    ExperimentConfig,
    WeightArchive,
    cmd_build_weight,
    cmd_curve,
    cmd_diagnose,
    cmd_report,
    cmd_welding,
    load_archive,
    save_archive,
)
from .maximal import (
    MaximalResult,
    WeightBundle,
    build_omega,
    maximal_fast,
    maximal_naive,
)
from .riesz import (
    FtildeSpec,
    RieszSpec,
    build_ftilde,
    eval_riesz_product,
    llogl_norm,
    lp_norm,
    plan_indices,
    sample_riesz,
    select_index,
)
from .sampling import (
    IntervalStats,
    SampledFunction,
    default_grid_size,
    prefix_sums,
)
from .welding import (
    WeldingMap,
    build_welding,
    log_derivative_parts,
    quasisymmetry_constant,
)

__version__ = "0.1.0"
