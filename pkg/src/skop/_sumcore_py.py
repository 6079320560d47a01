"""Pure NumPy fallback for the axis-sum core.

Reference semantics for skop._sumcore: for each output column i,
accumulate ``weights[i, j] * values[:, starts[i] + j]`` in ascending j
with Neumaier compensation.  The per-element operation sequence is
identical to the compiled loop, so both backends produce bit-identical
results.
"""
from __future__ import annotations

import numpy as np


def weighted_axis_sums(values, starts, lengths, weights):
    """out[r, i] = sum_{j < lengths[i]} weights[i, j] * values[r, starts[i] + j]."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    nrows = values.shape[0]
    nout = int(starts.shape[0])
    out = np.empty((nrows, nout), dtype=np.float64)
    for i in range(nout):
        base = int(starts[i])
        s = np.zeros(nrows)
        comp = np.zeros(nrows)
        for j in range(int(lengths[i])):
            term = weights[i, j] * values[:, base + j]
            t = s + term
            swap = np.abs(s) >= np.abs(term)
            comp += np.where(swap, (s - t) + term, (term - t) + s)
            s = t
        out[:, i] = s + comp
    return out
