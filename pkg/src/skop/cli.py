"""Command-line interface: reconstruct, kernel-info, converge.

Exit status contract: 0 success (including --help), 2 usage/validation
error, 1 runtime failure (I/O, budget exhaustion).  Identical
invocations produce byte-identical output files.
"""
from __future__ import annotations

import argparse
import sys
import time

from .convergence import parse_metric, run_sweep, write_sweep_csv
from .image import ReconstructionConfig, load_image, reconstruct, save_image
from .kernels import (
    export_curve,
    make_kernel,
    make_product,
    moment_m_beta,
    truncation_radius,
)
from .sampling import uniform_scheme

__all__ = ["main", "main_entry"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skop",
        description="Sampling Kantorovich operators: image upscaling, "
                    "kernel validation, convergence sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("reconstruct",
                         help="upscale a PGM image with the operator S_w")
    rec.add_argument("--input", required=True, help="input PGM (P5 or P2)")
    rec.add_argument("--output", required=True, help="output PGM (P5)")
    rec.add_argument("--kernel", default="jackson:12:1",
                     help="kernel spec: fejer | bspline:k | jackson:k[:alpha]")
    rec.add_argument("--w", type=float, default=40.0, help="sampling rate w > 0")
    rec.add_argument("--scale", type=int, default=6, help="integer upscale factor")
    rec.add_argument("--truncation-tol", type=float, default=1e-8,
                     help="kernel tail tolerance")
    rec.add_argument("--literal-anchor", action="store_true",
                     help="anchor kernels at cell left edges instead of centers")
    rec.add_argument("--no-normalize", action="store_true",
                     help="disable boundary weight normalization")

    info = sub.add_parser("kernel-info",
                          help="validate a kernel and report its constants")
    info.add_argument("--kernel", required=True)
    info.add_argument("--beta", type=float, default=None,
                      help="also report the discrete moment m_beta")
    info.add_argument("--probes", type=int, default=100)
    info.add_argument("--csv", default=None,
                      help="write the kernel curve (x,value) to this path")
    info.add_argument("--csv-range", type=float, default=8.0,
                      help="half-width of the exported curve domain")

    conv = sub.add_parser("converge",
                          help="error of S_w vs w on a built-in test signal")
    conv.add_argument("--kernel", default="bspline:3")
    conv.add_argument("--test", required=True, choices=["smooth", "step"])
    conv.add_argument("--metric", default="sup",
                      help="sup | lp:p | modular:p")
    conv.add_argument("--w-list", default="5,10,20,40",
                      help="comma-separated rates")
    conv.add_argument("--csv", default=None, help="write w,metric,value rows")
    return parser


def _cmd_reconstruct(args) -> int:
    config = ReconstructionConfig(
        kernel_spec=args.kernel, w=args.w, scale=args.scale,
        truncation_tol=args.truncation_tol,
        centered=not args.literal_anchor,
        normalize=not args.no_normalize)
    image = load_image(args.input)
    start = time.perf_counter()
    result = reconstruct(image, config)
    elapsed = time.perf_counter() - start
    save_image(result, args.output)
    print(f"input:  {image.width}x{image.height}")
    print(f"output: {result.width}x{result.height} -> {args.output}")
    print(f"kernel {config.kernel_spec}, w={config.w:g}, scale={config.scale}, "
          f"{elapsed:.3f}s")
    return 0


def _cmd_kernel_info(args) -> int:
    from .kernels import check_partition_of_unity  # deferred: pulls in sampling

    kernel = make_kernel(args.kernel)
    product = make_product([kernel])
    deviation = check_partition_of_unity(product, uniform_scheme(1),
                                         probe_count=args.probes)
    m0 = moment_m_beta(kernel, 0.0, probe_count=args.probes)
    radius = truncation_radius(kernel, 1e-8)
    print(f"kernel: {kernel.name}")
    print(f"peak chi(0) = {float(kernel.evaluate(0.0)):.12g}")
    print(f"partition-of-unity deviation ({args.probes} probes): {deviation:.3e}")
    print(f"m_0 = {m0:.12g}")
    if args.beta is not None:
        mb = moment_m_beta(kernel, args.beta, probe_count=args.probes)
        print(f"m_{args.beta:g} = {mb:.12g}")
    print(f"truncation radius (tol 1e-8): {radius:.6g}")
    if args.csv:
        export_curve(kernel, args.csv, -args.csv_range, args.csv_range)
        print(f"curve -> {args.csv}")
    return 0


def _cmd_converge(args) -> int:
    parse_metric(args.metric)  # validate before computing
    w_items = [s for s in args.w_list.split(",") if s.strip()]
    if not w_items:
        raise ValueError("empty w-list")
    w_list = [float(s) for s in w_items]
    rows = run_sweep(args.test, args.kernel, args.metric, w_list)
    print("w,metric,value")
    for w, value in rows:
        print(f"{w:g},{args.metric},{value:.12g}")
    if args.csv:
        write_sweep_csv(rows, args.metric, args.csv)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 0 for --help, 2 for usage
        return int(exc.code or 0)
    try:
        if args.command == "reconstruct":
            return _cmd_reconstruct(args)
        if args.command == "kernel-info":
            return _cmd_kernel_info(args)
        return _cmd_converge(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())
