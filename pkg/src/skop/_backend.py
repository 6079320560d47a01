"""Selects the compiled axis-sum core, falling back to pure NumPy.

Set ``SKOP_PURE_PYTHON=1`` in the environment to force the fallback
(the backend benchmark does this to time both paths).
"""
from __future__ import annotations

import os

if os.environ.get("SKOP_PURE_PYTHON"):
    from . import _sumcore_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _sumcore as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _sumcore_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"


def weighted_axis_sums(values, starts, lengths, weights):
    return _impl.weighted_axis_sums(values, starts, lengths, weights)
