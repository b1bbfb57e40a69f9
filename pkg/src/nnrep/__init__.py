"""Nearest-neighbor representations of Boolean functions, with exact arithmetic."""

from .constructions import (
    BallCovering,
    ConstructionError,
    build_covering,
    build_majority_bnn,
    build_parity_bnn,
    build_symmetric,
    build_threshold,
    centroid,
    cover_hypercube,
)
from .core import (
    BooleanFunction,
    SpecError,
    SymmetricSpec,
    ThresholdSpec,
    hamming,
    parse_function,
    parse_rational,
    parse_spec,
    sqdist,
)
from .ldt import knn_classify_counted, ldt_check, ldt_depth, ldt_eval, max_mono_rectangle
from .minimize import SearchResult, exact_bnn, exact_knn_bnn, grid_nn_upper
from .ptf import compile_ptf, eval_sign, term_count_report, verify_ptf
from .representation import (
    EmptyRepresentation,
    KTooLarge,
    Label,
    NNRepresentation,
    TieError,
    VerificationReport,
    WellDefinednessError,
    classify_knn,
    classify_nn,
    verify_knn,
    verify_nn,
)

__version__ = "0.1.0"


def __getattr__(name):
    # scikit-learn is slow to import, so the estimator loads on first use
    if name == "NearestPrototypeClassifier":
        from .estimator import NearestPrototypeClassifier
        return NearestPrototypeClassifier
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
