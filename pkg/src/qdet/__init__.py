"""Binary hypothesis testing between quantum states.

Builds Helstrom-optimal measurements, generates decision and measurement
operating characteristics, and converts POVMs to and from classical Parseval
frames to synthesize equivalent minimum-error measurement systems.
"""

from .characteristics import (
    DegenerateConic,
    EllipseParams,
    QubitDiscriminationSetup,
    count_rank_segments,
    prior_sweep,
    qdoc,
    qmoc_ellipse_params,
    qmoc_qubit,
    reconstruct_helstrom_subspaces,
    reduce_to_qubit,
    verify_ellipse,
)
from .decision import (
    CurveKind,
    DecisionRegion,
    OperatingCharacteristic,
    OperatingPoint,
    ScorePmfPair,
    error_at_point,
    lrt_region,
    lrt_roc,
    min_error_vertex,
    pf_pd,
    reconstruct_lrt_from_svt,
    svt_region,
    svt_roc,
)
from .frames import (
    FrameExpansion,
    ParsevalFrame,
    build_equivalent_system,
    dft_frame,
    eigen_frame,
    expand_element,
    expand_povm,
    haar_random_orthonormal_basis,
    verify_equivalence,
)
from .helstrom import (
    HelstromSolution,
    Priors,
    error_probability,
    helstrom_binary,
    helstrom_rank_one,
    lagrange_operator,
)
from .measurement import (
    Povm,
    PovmValidationReport,
    is_rank_one,
    is_standard,
    outcome_pmf,
    projector_from_span,
    validate_povm,
)
from .operators import (
    DensityOperator,
    EigenDecomposition,
    HermitianOperator,
    PureStateVector,
    density_from_eigensystem,
    hermitian_eig,
    trace_inner,
)

__version__ = "0.1.0"

__all__ = [
    "CurveKind",
    "DecisionRegion",
    "DegenerateConic",
    "DensityOperator",
    "EigenDecomposition",
    "EllipseParams",
    "FrameExpansion",
    "HelstromSolution",
    "HermitianOperator",
    "OperatingCharacteristic",
    "OperatingPoint",
    "ParsevalFrame",
    "Povm",
    "PovmValidationReport",
    "Priors",
    "PureStateVector",
    "QubitDiscriminationSetup",
    "ScorePmfPair",
    "build_equivalent_system",
    "count_rank_segments",
    "density_from_eigensystem",
    "dft_frame",
    "eigen_frame",
    "error_at_point",
    "error_probability",
    "expand_element",
    "expand_povm",
    "haar_random_orthonormal_basis",
    "helstrom_binary",
    "helstrom_rank_one",
    "hermitian_eig",
    "is_rank_one",
    "is_standard",
    "lagrange_operator",
    "lrt_region",
    "lrt_roc",
    "min_error_vertex",
    "outcome_pmf",
    "pf_pd",
    "prior_sweep",
    "projector_from_span",
    "qdoc",
    "qmoc_ellipse_params",
    "qmoc_qubit",
    "reconstruct_helstrom_subspaces",
    "reconstruct_lrt_from_svt",
    "reduce_to_qubit",
    "svt_region",
    "svt_roc",
    "trace_inner",
    "validate_povm",
    "verify_ellipse",
    "verify_equivalence",
]
