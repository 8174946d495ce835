"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``MOBIUS_RIGIDITY_PURE=1`` to force the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("MOBIUS_RIGIDITY_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

lorentz_gram = _impl.lorentz_gram
gram_discrepancy = _impl.gram_discrepancy
cross_ratio_discrepancy = _impl.cross_ratio_discrepancy

__all__ = ["BACKEND", "lorentz_gram", "gram_discrepancy", "cross_ratio_discrepancy"]
