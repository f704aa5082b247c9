"""Explaining one-class SVM outlier scores by deep Taylor decomposition.

A trained one-class SVM with an exponential or t-Student kernel is rewritten
as a layer of support-vector distances followed by soft min-pooling.  Its
outlier score is then redistributed onto support vectors and further onto
input variables.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DegenerateBandwidthError,
    DomainError,
    OcxError,
    ParameterError,
    ShapeError,
    SingularPointError,
    UndefinedAUCError,
)
from .kernels import KernelSpec, bandwidth_heuristic, eval_kernel, pow_distance
from .ocsvm import OneClassModel, decide, discriminant, make_model, train
from .measures import (
    Activations,
    detection_activations,
    harmonic_mean,
    inlierness,
    neg_lse_pool,
    outlierness,
    outlierness_via_network,
)
from .dtd import (
    Heatmap,
    SvRelevance,
    decomposable_relevance,
    explain_inlier,
    input_relevance,
    sa_gradient,
    sv_relevance,
)
from .baselines import (
    MvnModel,
    ev_map,
    mvn_decompose,
    mvn_fit,
    nn_map,
    random_order,
    sensitivity,
    sobel_map,
)
from .flipping import (
    FlipCurve,
    flip_auc,
    flip_curve,
    gen_two_panel,
    order_from_heatmap,
    panel_shares,
)
from .patches import (
    ImageHeatmap,
    PatchConfig,
    extract_patches,
    fit_image_model,
    image_outlierness,
    image_relevance,
)
