"""Exact and numerical tooling for systems of cubic forms: Hessians and their
minors, auxiliary-inequality counting over dyadic eigenvalue classes, the
minor-built near-null vectors and their dichotomy, and desk-scale
Hardy-Littlewood verification for diagonal systems."""

from .errors import (
    CubicFormError,
    DimensionMismatchError,
    InconclusiveError,
    NonDiagonalError,
    RankDeficientError,
    VanishingMinorError,
    ZeroEigenvalueError,
    ZeroFormError,
    ZeroPredictionError,
)
from .forms import (
    EXACT,
    FLOAT,
    BetaVector,
    CubicForm,
    SymMatrix,
    linear_combination,
    load_forms,
    parse_form_file,
    save_forms,
    trilinear,
)
from .minors import (
    big_subspace,
    cauchy_binet,
    index_tuples,
    minor_sv_bounds,
    minors_jacobian,
    minors_matrix,
    minors_vector,
    singular_values,
    small_or_big,
)
from .counting import (
    STRICT,
    WEAK,
    DyadicClass,
    classify_dyadic,
    count_NH,
    count_aux,
    count_aux_eq,
    cover_class,
    ellipsoid_bound,
    partition_check,
    pigeonhole,
    trichotomy,
)
from .davenport import (
    build_Y_basis,
    build_y_vectors,
    dichotomy,
    sigma_diagonal,
    singular_candidates,
    trilinear_bound_check,
    verify_Hy_identity,
)
from .circle import (
    DiagonalSystem,
    convergence_report,
    count_zeros_box,
    local_density,
    singular_integral_estimate,
    singular_series_estimate,
)

__version__ = "0.1.0"
