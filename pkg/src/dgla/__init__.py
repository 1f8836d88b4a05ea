"""Exact, weight-truncated computations with free differential graded Lie algebras."""
from .cobar import (
    CoalgebraData,
    cobar_construct,
    conilpotency_filtration,
    iterated_coproduct,
    semifree_certificate,
    validate_coalgebra,
)
from .contraction import (
    Contraction,
    cohomology_commutation_check,
    extend_to_lie,
    extend_to_tensor,
    verify_contraction,
)
from .errors import (
    DglaError,
    ExtensionError,
    InputError,
    LiftingError,
    NotAComplexError,
    NotSurjectiveError,
    VerificationError,
    WeightCapError,
)
from .freelie import (
    DglaMorphism,
    DglaPresentation,
    GeneratorSet,
    Realization,
    bracket,
    derivation_extend,
    dynkin_rho,
    lie_basis,
    lie_dims,
    nested_bracket,
    realize,
)
from .linalg import ChainComplex, DegreeMap, GradedSpace, cohomology, normalize_homotopy, split_complex
from .maurer_cartan import NilpotentRing, TensorDgla, mc_elements, obstruction_demo
from .model import (
    LiftingSquare,
    certify_extension,
    factor_free_surjective,
    factor_semifree_qis,
    lift_free,
    lift_semifree,
    qis_report,
)
from .tensor import Tensor

__all__ = [name for name in dir() if not name.startswith("_")]
