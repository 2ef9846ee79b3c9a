"""Pointwise algebra of generalized f.pk-space forms.

Builds metric f.pk-structures on a single tangent space, evaluates the
model curvature tensor, and checks parallel-tensor and hypersurface
statements by computing kernels of the curvature action.
"""
from .curvature import (
    CurvatureParams,
    CurvatureTensor,
    PresetKind,
    SymmetryReport,
    model_curvature,
    phi_sectional_curvature,
    preset_params,
    ricci_tensor,
    symmetry_audit,
)
from .errors import (
    DomainError,
    FpkError,
    NormalizationError,
    PreconditionError,
    StructuralError,
    TangencyError,
)
from .hypersurface import (
    HypersurfaceModel,
    make_hypersurface,
    normal_curvature_component,
    parallel_obstruction_witness,
    phi_decomposition,
    semi_parallel_kernel,
)
from .parallel import (
    ActionMatrix,
    ClassificationReport,
    KernelBasis,
    TheoremReport,
    assemble_action_matrix,
    classify_symmetric_kernel,
    curvature_action,
    nullspace,
    structure_span_basis,
    verify_theorems,
)
from .structure import (
    BilinearForm,
    FpkStructure,
    ValidationReport,
    canonical_structure,
    fundamental_two_form,
    random_adapted_frame,
    validate_structure,
)

__version__ = "0.1.0"
