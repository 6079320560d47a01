"""Sampling Kantorovich operators for signals and images.

Kernel toolbox (Fejer, central B-splines, Jackson-type), exact
Kantorovich cell means, a separable reconstruction operator with a
compiled hot loop and a pure-NumPy fallback, Orlicz-style error
metrics, and an image upscaling pipeline.
"""
from ._backend import BACKEND as backend_name
from .convergence import parse_metric, run_sweep, write_sweep_csv
from .image import (
    ReconstructionConfig,
    StepImage,
    binarize,
    downsample_mean,
    load_image,
    nearest_upscale,
    otsu_threshold,
    phase_fractions,
    psnr,
    reconstruct,
    round_half_away,
    save_image,
    write_phase_report,
)
from .kernels import (
    CompactInterval,
    PolynomialDecay,
    ProductKernel,
    UnivariateKernel,
    check_partition_of_unity,
    export_curve,
    jackson_norm_const,
    make_central_bspline,
    make_fejer,
    make_jackson,
    make_kernel,
    make_product,
    make_product_kernel,
    moment_m_beta,
    moment_tail_bound,
    registry_specs,
    sinc,
    truncation_radius,
)
from .metrics import (
    ModularFunction,
    SampledField,
    check_phi_function,
    exp_phi,
    lp_norm,
    luxemburg_norm,
    modular,
    parse_phi,
    power_phi,
    sup_error,
)
from .sampling import (
    CellMeans,
    ExplicitNodes,
    SamplingScheme,
    UniformNodes,
    cell_bounds,
    evaluate_operator,
    evaluate_operator_separable,
    step_cell_means,
    uniform_scheme,
)
from .signals import TestSignal1D, raised_cosine, signal_cell_means, unit_step

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "__version__",
    # kernels
    "CompactInterval", "PolynomialDecay", "UnivariateKernel", "ProductKernel",
    "sinc", "make_fejer", "make_central_bspline", "jackson_norm_const",
    "make_jackson", "make_kernel", "make_product", "make_product_kernel",
    "registry_specs", "check_partition_of_unity", "moment_m_beta",
    "moment_tail_bound", "truncation_radius", "export_curve",
    # sampling
    "UniformNodes", "ExplicitNodes", "SamplingScheme", "uniform_scheme",
    "CellMeans", "cell_bounds", "step_cell_means", "evaluate_operator",
    "evaluate_operator_separable",
    # metrics
    "ModularFunction", "power_phi", "exp_phi", "parse_phi",
    "check_phi_function", "SampledField", "modular", "lp_norm",
    "luxemburg_norm", "sup_error",
    # signals / convergence
    "TestSignal1D", "raised_cosine", "unit_step", "signal_cell_means",
    "parse_metric", "run_sweep", "write_sweep_csv",
    # image pipeline
    "StepImage", "ReconstructionConfig", "load_image", "save_image",
    "round_half_away", "reconstruct", "otsu_threshold", "binarize",
    "phase_fractions", "write_phase_report", "downsample_mean",
    "nearest_upscale", "psnr",
]
