"""Entire minimal graphs from Grassmannian geodesics.

The evolving-plane construction: a slope curve Z(t) that is geodesic for the
affine-chart Grassmannian metric sweeps out a minimal graph of dimension n
and codimension m. This package provides the closed-form solution family,
entireness certification, the minimal-surface residual operators that verify
the construction, an independent RK4 integrator, and the Minkowski-base
analogue.
"""

from .matlin import (
    EigenConvergenceError,
    SingularMatrixError,
    as_matrix,
    as_vector,
    det,
    invert_with_det,
    matmul,
    spd_roots,
    sym_eigen,
)
from .geodesic import (
    ChartBreakdownError,
    ClosedFormGeodesic,
    CurveJet,
    OrthPartition,
    SpectralBlock,
    StiefelFrame,
    affine_residual,
    closed_form_build,
    closed_form_eval,
    closed_form_lift,
    curvature_quadratic,
    left_orthogonal_action,
    mobius_transform,
    orthogonal_symmetry,
    stiefel_residual,
    stiefel_to_affine,
    trig_frame,
)
from .entire import (
    CERTIFIED,
    VIOLATION,
    BlockSpec,
    PositivityReport,
    build_odd_pair,
    char_poly_positive_2x2,
    positivity_scan,
    tan_blow_up_time,
)
from .graph import (
    AnsatzPoint,
    MetricReport,
    embed,
    fd_oracle_residual,
    hessian_blocks,
    induced_metric,
    metric_report,
    mss_residual,
    mss_residual_det_form,
)
from .ode import (
    BLOW_UP,
    CHART_BREAKDOWN,
    COMPLETED,
    EXACT_ORDER,
    IntegrationRun,
    convergence_order,
    integrate,
)
from .lorentz import (
    SignatureCount,
    SpacelikeBreakdownError,
    lorentz_metric,
    lorentz_residual,
    tanh_family_eval,
)

__version__ = "0.1.0"
