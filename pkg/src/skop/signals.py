"""Built-in 1D test signals with exact cell means.

Each signal carries an antiderivative valid on its support, so the
Kantorovich cell means (w / Delta_k) * integral_{cell} f are computed in
closed form; the signal is 0 outside the support.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sampling import CellMeans, SamplingScheme, UniformNodes, uniform_scheme

__all__ = ["TestSignal1D", "raised_cosine", "unit_step", "signal_cell_means"]


@dataclass(frozen=True)
class TestSignal1D:
    """A compactly supported signal with a closed-form antiderivative.

    ``antiderivative`` must be valid on [support_lo, support_hi]; values
    of the signal outside the support are 0 by convention.
    """

    name: str
    support: tuple
    fn: Callable
    antiderivative: Callable

    def __call__(self, x):
        xs = np.asarray(x, dtype=np.float64)
        lo, hi = self.support
        inside = (xs >= lo) & (xs <= hi)
        out = np.where(inside, self.fn(np.clip(xs, lo, hi)), 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    def integral(self, a: float, b: float) -> float:
        """integral_a^b of the zero-extended signal."""
        lo, hi = self.support
        ac = min(max(a, lo), hi)
        bc = min(max(b, lo), hi)
        if bc <= ac:
            return 0.0
        return float(self.antiderivative(bc) - self.antiderivative(ac))


def raised_cosine() -> TestSignal1D:
    """g(x) = (1 + cos(pi x)) / 2 on [-1, 1], zero outside (C^1 overall)."""

    def fn(x):
        return (1.0 + np.cos(np.pi * np.asarray(x, dtype=np.float64))) / 2.0

    def anti(x):
        xs = np.asarray(x, dtype=np.float64)
        return (xs + 1.0) / 2.0 + np.sin(np.pi * xs) / (2.0 * np.pi)

    return TestSignal1D(name="smooth", support=(-1.0, 1.0), fn=fn,
                        antiderivative=anti)


def unit_step() -> TestSignal1D:
    """Indicator of [0, 1]: the canonical discontinuous test signal."""

    def fn(x):
        return np.ones_like(np.asarray(x, dtype=np.float64))

    def anti(x):
        return np.asarray(x, dtype=np.float64)

    return TestSignal1D(name="step", support=(0.0, 1.0), fn=fn,
                        antiderivative=anti)


def signal_cell_means(signal: TestSignal1D, w: float,
                      scheme: SamplingScheme = None) -> CellMeans:
    """Exact cell means of a 1D signal over the support-intersecting cells."""
    if not w > 0.0:
        raise ValueError("w must be positive")
    if scheme is None:
        scheme = uniform_scheme(1)
    if scheme.dims != 1:
        raise ValueError("signal_cell_means needs a 1-dimensional scheme")
    lo, hi = signal.support
    nd = scheme.nodes[0]
    if isinstance(nd, UniformNodes):
        k0 = int(math.floor(w * lo + 1e-12))
        k1 = int(math.ceil(w * hi - 1e-12)) - 1
        edges = np.arange(k0, k1 + 2, dtype=np.float64) / w
        spac = np.ones(k1 - k0 + 1)
    else:
        vals = nd.values
        lo_e, hi_e = vals[:-1] / w, vals[1:] / w
        keep = (hi_e > lo) & (lo_e < hi)
        if not keep.any():
            raise ValueError("explicit nodes do not cover the signal support")
        idx = np.nonzero(keep)[0]
        k0, k1 = int(idx[0]), int(idx[-1])
        edges = vals[k0 : k1 + 2] / w
        spac = np.diff(vals[k0 : k1 + 2])
    a = np.clip(edges[:-1], lo, hi)
    b = np.clip(edges[1:], lo, hi)
    ints = np.asarray(signal.antiderivative(b)) - np.asarray(signal.antiderivative(a))
    means = ints / (edges[1:] - edges[:-1])
    return CellMeans(w=float(w), index_lo=(k0,), values=means, spacings=(spac,))
