"""Coefficient matrices of the abstract interpolation problem and their properties."""
__version__ = "0.1.0"

from .errors import (AipError, DegenerateInput, DimensionMismatch, IllDefined, NotContractive,
                     NotHermitian, NotIsometric, NotPsd, PreconditionError, SingularResolvent)
from .problems import (AipProblem, BoundaryData, NpData, SarasonData, build_boundary, build_np,
                       build_sarason, check_fundamental_identity, sarason_from_np)
from .colligation import (CoefficientMatrix, UnitaryColligation, build_coefficient_matrix,
                          build_universal_colligation, eval_S)
from .parametrization import SchurParameter, eval_F, lft_solution, verify_solution
from .boundary import angular_derivative, boundary_residual_detect

__all__ = [
    "AipError", "DegenerateInput", "DimensionMismatch", "IllDefined", "NotContractive",
    "NotHermitian", "NotIsometric", "NotPsd", "PreconditionError", "SingularResolvent",
    "AipProblem", "BoundaryData", "NpData", "SarasonData", "build_boundary", "build_np",
    "build_sarason", "check_fundamental_identity", "sarason_from_np",
    "CoefficientMatrix", "UnitaryColligation", "build_coefficient_matrix",
    "build_universal_colligation", "eval_S",
    "SchurParameter", "eval_F", "lft_solution", "verify_solution",
    "angular_derivative", "boundary_residual_detect",
]
