"""Convergence sweeps: reconstruction error versus the rate w.

Two built-in experiments mirror the theory's two regimes:

* ``smooth``: the bivariate C^1 bump (1 + cos(pi x))(1 + cos(pi y))/4 on
  [-1, 1]^2, where pointwise/uniform convergence applies and the natural
  metric is the sup error on a fixed probe grid;
* ``step``: the indicator of [0, 1] embedded in [-2, 3], where only
  modular / L^p convergence is available (the signal is discontinuous).

Both use exact cell means, the separable evaluator, and centered
anchoring, so a sweep is a faithful discretization of ||S_w f - f||.
"""
from __future__ import annotations

import csv

import numpy as np

from .kernels import make_kernel, make_product
from .metrics import SampledField, lp_norm, modular, power_phi, sup_error
from .sampling import CellMeans, evaluate_operator_separable, uniform_scheme
from .signals import raised_cosine, signal_cell_means, unit_step

__all__ = ["parse_metric", "run_sweep", "write_sweep_csv",
           "SMOOTH_GRID_POINTS", "STEP_GRID_CELLS", "STEP_DOMAIN"]

SMOOTH_GRID_POINTS = 201          # probe points per axis on [-1, 1]
STEP_GRID_CELLS = 5000            # midpoint cells on the step domain
STEP_DOMAIN = (-2.0, 3.0)


def parse_metric(spec: str):
    """Parse ``sup``, ``lp:p``, or ``modular:p`` into a (kind, p) pair."""
    parts = str(spec).strip().split(":")
    if parts == ["sup"]:
        return ("sup", None)
    if len(parts) == 2 and parts[0] in ("lp", "modular"):
        try:
            p = float(parts[1])
        except ValueError:
            raise ValueError(f"invalid metric spec {spec!r}") from None
        if p < 1.0:
            raise ValueError("metric exponent must satisfy p >= 1")
        return (parts[0], p)
    raise ValueError(f"unknown metric {spec!r}; expected sup, lp:p, or modular:p")


def _smooth_error(kernel_spec: str, metric, w: float, *, truncation_tol: float,
                  centered: bool) -> float:
    sig = raised_cosine()
    factor = make_kernel(kernel_spec)
    kernel = make_product([factor, factor])
    scheme = uniform_scheme(2)
    m1 = signal_cell_means(sig, w)
    means = CellMeans(w=w, index_lo=(m1.index_lo[0],) * 2,
                      values=np.outer(m1.values, m1.values),
                      spacings=(m1.spacings[0],) * 2)
    kind, p = metric
    if kind == "sup":
        axis = np.linspace(-1.0, 1.0, SMOOTH_GRID_POINTS)
    else:
        h = 2.0 / SMOOTH_GRID_POINTS
        axis = -1.0 + (np.arange(SMOOTH_GRID_POINTS) + 0.5) * h
    approx = evaluate_operator_separable(means, kernel, scheme, [axis, axis],
                                         truncation_tol=truncation_tol,
                                         centered=centered)
    exact = np.outer(sig(axis), sig(axis))
    if kind == "sup":
        return float(np.max(np.abs(approx - exact)))
    field = SampledField.from_values(approx - exact, ((-1.0, 1.0), (-1.0, 1.0)))
    if kind == "lp":
        return lp_norm(field, p)
    return modular(power_phi(p), field)


def _step_error(kernel_spec: str, metric, w: float, *, truncation_tol: float,
                centered: bool) -> float:
    sig = unit_step()
    kernel = make_product([make_kernel(kernel_spec)])
    scheme = uniform_scheme(1)
    means = signal_cell_means(sig, w)
    lo, hi = STEP_DOMAIN
    h = (hi - lo) / STEP_GRID_CELLS
    axis = lo + (np.arange(STEP_GRID_CELLS) + 0.5) * h
    approx = evaluate_operator_separable(means, kernel, scheme, [axis],
                                         truncation_tol=truncation_tol,
                                         centered=centered)
    diff = approx - sig(axis)
    kind, p = metric
    if kind == "sup":
        return float(np.max(np.abs(diff)))
    field = SampledField.from_values(diff, (STEP_DOMAIN,))
    if kind == "lp":
        return lp_norm(field, p)
    return modular(power_phi(p), field)


def run_sweep(test: str, kernel_spec: str, metric_spec: str, w_list, *,
              truncation_tol: float = 1e-8, centered: bool = True) -> list:
    """Error of S_w against the named test signal for each w.

    Returns [(w, value), ...] in the given w order.  ``test`` is
    ``smooth`` (bivariate bump, any metric) or ``step`` (1D indicator).
    """
    metric = parse_metric(metric_spec)
    ws = [float(w) for w in w_list]
    if not ws:
        raise ValueError("w_list must be nonempty")
    if any(w <= 0 for w in ws):
        raise ValueError("all w must be positive")
    if test == "smooth":
        err = _smooth_error
    elif test == "step":
        err = _step_error
    else:
        raise ValueError(f"unknown test {test!r}; expected smooth or step")
    return [(w, err(kernel_spec, metric, w, truncation_tol=truncation_tol,
                    centered=centered)) for w in ws]


def write_sweep_csv(rows, metric_spec: str, path) -> None:
    """Write the sweep as CSV with header ``w,metric,value``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["w", "metric", "value"])
        for w, value in rows:
            writer.writerow([f"{w:g}", metric_spec, f"{value:.12g}"])
