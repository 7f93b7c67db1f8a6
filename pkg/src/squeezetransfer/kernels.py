"""Hot-loop kernels: the Cython build when importable, numpy otherwise.

Set ``SQUEEZE_PURE_PYTHON=1`` to force the numpy path.
"""

import os

from . import _kernels_py

if os.environ.get("SQUEEZE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

quadratic_form_grid = _impl.quadratic_form_grid
dicke_moments = _impl.dicke_moments
