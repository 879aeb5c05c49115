from .errors import (
    CategoryFileError,
    DotBudgetError,
    FactorizationError,
    FieldMismatchError,
    KernelLabError,
    LatticeLimitError,
    MissingStructureError,
    NotAComplexError,
    ObjectMismatchError,
    SignConventionError,
    WindowError,
)
from .fields import FieldSpec
from .linalg import ExactMatrix, SubQuotient, homology_mid, kernel_basis, row_reduce

__all__ = [
    'FieldSpec',
    'ExactMatrix',
    'SubQuotient',
    'row_reduce',
    'kernel_basis',
    'homology_mid',
    'KernelLabError',
    'FieldMismatchError',
    'NotAComplexError',
    'ObjectMismatchError',
    'MissingStructureError',
    'WindowError',
    'DotBudgetError',
    'LatticeLimitError',
    'CategoryFileError',
    'SignConventionError',
    'FactorizationError'
]
