"""Curvature, homogeneity, solitons and geodesics of 3D Walker metrics.

The metric is ``g_f = dy^2 + 2 dx dxt - 2 f(x, y) dx^2`` on coordinates (x, y, xt).
"""

from .errors import (
    BuildError,
    DivisionError,
    DomainError,
    InconsistencyError,
    NotNormalizedError,
    ODESolveError,
    OrderError,
    ParseError,
    SignError,
    UnclassifiedError,
    WalkerError,
    ZeroCurvatureError,
)
from .expr import Expr2, evaluate, loads, parse, to_infix
from .jets import Jet2, grad_eval, jet_eval, partial
from .metric import (
    CovTensor,
    WalkerGeometry,
    christoffel,
    cotton,
    metric_at,
    nabla_k_R,
    recurrence_form,
    riemann,
)
from .frames import (
    FrameCoeffs,
    ModelRecord,
    ModelTag,
    frame_0,
    frame_1,
    kv_frame,
    kv_weighted_slots,
    pc_recursion_constants,
    match_model,
    model_invariants,
)
from .classify import (
    Classification,
    Grid,
    StructuredFamily,
    Transform,
    build_isometry_to_model,
    classify_sampled,
    classify_structured,
    verify_isometry,
)
from .solitons import (
    CottonCase,
    RicciCase,
    build_cotton_soliton,
    build_ricci_soliton,
    homothety_search,
    verify_soliton,
)
from .geodesics import (
    GeodesicState,
    blowup_experiment_pc,
    integrate_geodesic,
    parallel_transport,
)
from .config import RunConfig

__version__ = "0.1.0"
