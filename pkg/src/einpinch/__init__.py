"""Pointwise curvature algebra and pinching estimates for Einstein four-manifolds."""

__version__ = "0.1.0"

from .berger import (
    BergerData,
    FrameRotation,
    berger_to_tensor,
    find_berger_frame,
    rotate_tensor,
    verify_berger_properties,
)
from .constants import PinchConstants, constants_table, corollary13_audit, k_s, pinch_constants
from .curvature import (
    CurvatureTensor4,
    EigenProfile,
    OperatorBlocks,
    Plane2,
    blocks_to_profile,
    einstein_defect,
    min_max_sectional,
    model_space,
    sectional_curvature,
    tensor_to_blocks,
)
from .flow import (
    FlowState,
    PinchLine,
    boundary_derivative_gap,
    integrate,
    ode_rhs,
    scalar_evolution_check,
    self_similar_residual,
)
from .lemmas import (
    LemmaReport,
    berger_to_profile,
    invariant_I,
    lemma22_case_bounds,
    lemma22_margin,
    lemma41_lower_bound,
    lemma41_margin,
)
from .search import SearchConfig, lemma22_search, lemma41_search
