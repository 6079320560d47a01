# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled axis-sum core.

Semantics (including the floating-point result, bit for bit) match
skop._sumcore_py.weighted_axis_sums: ascending-tap accumulation with
Neumaier compensation.  Compile without -ffast-math; the compensation
relies on IEEE addition.
"""
from libc.math cimport fabs
from libc.stdint cimport int64_t

import numpy as np


def weighted_axis_sums(const double[:, ::1] values,
                       const int64_t[::1] starts,
                       const int64_t[::1] lengths,
                       const double[:, ::1] weights):
    """out[r, i] = sum_{j < lengths[i]} weights[i, j] * values[r, starts[i] + j]."""
    cdef Py_ssize_t nrows = values.shape[0]
    cdef Py_ssize_t nout = starts.shape[0]
    out_arr = np.empty((nrows, nout), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, j
    cdef int64_t base, ln
    cdef double s, comp, term, t
    for r in range(nrows):
        for i in range(nout):
            base = starts[i]
            ln = lengths[i]
            s = 0.0
            comp = 0.0
            for j in range(ln):
                term = weights[i, j] * values[r, base + j]
                t = s + term
                if fabs(s) >= fabs(term):
                    comp += (s - t) + term
                else:
                    comp += (term - t) + s
                s = t
            out[r, i] = s + comp
    return out_arr
