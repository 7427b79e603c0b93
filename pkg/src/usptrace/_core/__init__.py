"""Point-counting kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable USPTRACE_PURE_PYTHON is set to 1, the numpy
implementation is used.  Both have the same contract.
"""
import os

from . import _pycore
from ._tables import MAX_TABLE_PRIME, FieldTables, field_tables, least_nonresidue, quadratic_character

_impl = _pycore
BACKEND = "python"
if os.environ.get("USPTRACE_PURE_PYTHON", "") != "1":
    try:
        from . import _ccore
    except ImportError:
        pass
    else:
        _impl = _ccore
        BACKEND = "cython"


def count_models(coeffs, p: int, backend: str | None = None):
    """(squarefree, N1, N2) arrays for rows of coefficients c0..c6 over F_p."""
    impl = _impl
    if backend == "python":
        impl = _pycore
    elif backend == "cython":
        from . import _ccore as impl
    return impl.count_models(coeffs, field_tables(p))


def is_squarefree(coeffs, p: int) -> bool:
    return _impl.is_squarefree(list(coeffs) + [0] * (7 - len(coeffs)), p)


__all__ = [
    "BACKEND",
    "MAX_TABLE_PRIME",
    "FieldTables",
    "count_models",
    "field_tables",
    "is_squarefree",
    "least_nonresidue",
    "quadratic_character",
]
