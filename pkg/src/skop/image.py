"""Image pipeline: PGM I/O, step-function model, upscaling, binarization.

An image is modeled as the compactly supported step function equal to
``pixels[r, c]`` on the unit square (c, c+1] x (r, r+1] of the (x, y)
plane and 0 outside; the first array index is y (row), the second is x
(column).  Reconstruction samples the operator S_w applied to that step
function on a finer pixel-center grid, which upscales the image by an
integer factor.

File format: PGM, maxval up to 255; both raw (P5) and ASCII (P2) are
read, P5 is written.  Gray levels are kept as float64 in [0, 255]
internally and quantized (round half away from zero, clamp) on save.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import make_product_kernel
from .sampling import evaluate_operator_separable, step_cell_means, uniform_scheme

__all__ = [
    "StepImage",
    "ReconstructionConfig",
    "load_image",
    "save_image",
    "round_half_away",
    "reconstruct",
    "otsu_threshold",
    "binarize",
    "phase_fractions",
    "write_phase_report",
    "downsample_mean",
    "nearest_upscale",
    "psnr",
]


@dataclass(frozen=True, eq=False)
class StepImage:
    """Gray-level matrix in [0, 255], immutable after construction."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.size == 0:
            raise ValueError("pixels must be a nonempty 2D matrix")
        if not np.all(np.isfinite(px)):
            raise ValueError("pixel values must be finite")
        if px.min() < 0.0 or px.max() > 255.0:
            raise ValueError("pixel values must lie in [0, 255]")
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class ReconstructionConfig:
    """Operator parameters for image upscaling.

    Defaults reproduce the reference processing setup: bivariate
    Jackson kernel with k = 12, rate w = 40, upscale factor 6.
    """

    kernel_spec: str = "jackson:12:1"
    w: float = 40.0
    scale: int = 6
    truncation_tol: float = 1e-8
    centered: bool = True
    normalize: bool = True

    def __post_init__(self):
        if not self.w > 0.0:
            raise ValueError("w must be positive")
        if not isinstance(self.scale, int) or self.scale < 1:
            raise ValueError("scale must be an integer >= 1")
        if not self.truncation_tol > 0.0:
            raise ValueError("truncation_tol must be positive")
        make_product_kernel(self.kernel_spec, 2)  # fail fast on bad specs


def _header_tokens(data: bytes, pos: int, count: int):
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n:
            c = data[pos : pos + 1]
            if c.isspace():
                pos += 1
            elif c == b"#":
                nl = data.find(b"\n", pos)
                pos = n if nl < 0 else nl + 1
            else:
                break
        start = pos
        while pos < n and not data[pos : pos + 1].isspace():
            pos += 1
        if pos == start:
            raise ValueError("malformed PGM header: truncated")
        tokens.append(data[start:pos])
    return tokens, pos


def load_image(path) -> StepImage:
    """Read a PGM file (raw P5 or ASCII P2) into a StepImage."""
    with open(path, "rb") as fh:
        data = fh.read()
    (magic,), pos = _header_tokens(data, 0, 1)
    if magic in (b"P3", b"P6"):
        raise ValueError("non-grayscale PPM input is not supported")
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"unsupported image format {magic!r}")
    fields, pos = _header_tokens(data, pos, 3)
    try:
        width, height, maxval = (int(t) for t in fields)
    except ValueError:
        raise ValueError("malformed PGM header: non-numeric size fields") from None
    if width < 1 or height < 1:
        raise ValueError("malformed PGM header: nonpositive dimensions")
    if not 1 <= maxval <= 255:
        raise ValueError(f"out-of-range maxval {maxval} (need 1..255)")
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) != count:
            raise ValueError("truncated P5 pixel data")
        px = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    else:
        tokens, _ = _header_tokens(data, pos, count)
        px = np.array([int(t) for t in tokens], dtype=np.float64)
    if px.max(initial=0.0) > maxval:
        raise ValueError("pixel value exceeds declared maxval")
    return StepImage(pixels=px.reshape(height, width))


def round_half_away(x):
    """Round to nearest integer, halves away from zero."""
    arr = np.asarray(x, dtype=np.float64)
    out = np.sign(arr) * np.floor(np.abs(arr) + 0.5)
    if out.ndim == 0:
        return float(out)
    return out


def save_image(image: StepImage, path) -> None:
    """Write as binary PGM (P5, maxval 255), quantizing gray levels."""
    q = np.clip(round_half_away(image.pixels), 0.0, 255.0).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(q.tobytes())


def reconstruct(image: StepImage, config: ReconstructionConfig = None) -> StepImage:
    """Upscale by sampling S_w applied to the step-function image.

    Output pixel (i, j) of the (scale*height) x (scale*width) result is
    the operator value at the fine pixel center ((i+0.5)/scale along y,
    (j+0.5)/scale along x), quantized to [0, 255].  Per-axis weight
    normalization (on by default) divides by the in-support kernel mass
    so that constants reproduce exactly up to the boundary even for
    kernels with unbounded support.
    """
    if config is None:
        config = ReconstructionConfig()
    kernel = make_product_kernel(config.kernel_spec, 2)
    scheme = uniform_scheme(2)
    means = step_cell_means(image, scheme, config.w)
    grid_y = (np.arange(image.height * config.scale) + 0.5) / config.scale
    grid_x = (np.arange(image.width * config.scale) + 0.5) / config.scale
    vals = evaluate_operator_separable(
        means, kernel, scheme, [grid_y, grid_x],
        truncation_tol=config.truncation_tol, centered=config.centered,
        normalize=config.normalize)
    return StepImage(pixels=np.clip(round_half_away(vals), 0.0, 255.0))


def otsu_threshold(image: StepImage) -> int:
    """Gray level t maximizing between-class variance of pixels > t.

    Ties break toward the smallest t; a constant image returns 255 so
    that thresholding yields all 0 (degenerate histogram convention).
    """
    px = image.pixels
    if px.min() == px.max():
        return 255
    levels = np.clip(round_half_away(px), 0.0, 255.0).astype(np.int64)
    hist = np.bincount(levels.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    probs = hist / total
    grays = np.arange(256, dtype=np.float64)
    mean_total = float(np.sum(probs * grays))
    w0 = np.cumsum(probs)            # weight of the class {level <= t}
    mu0 = np.cumsum(probs * grays)   # unnormalized class mean
    w1 = 1.0 - w0
    valid = (w0 > 0.0) & (w1 > 0.0)
    var = np.zeros(256)
    var[valid] = (mean_total * w0[valid] - mu0[valid]) ** 2 / (
        w0[valid] * w1[valid])
    return int(np.argmax(var))


def binarize(image: StepImage, threshold: float = None) -> StepImage:
    """Map to {0, 255}: pixels strictly above the threshold become 255.

    Without an explicit threshold, Otsu's histogram criterion is used
    (plumbing stand-in; constant images map to all 0).
    """
    t = otsu_threshold(image) if threshold is None else float(threshold)
    return StepImage(pixels=np.where(image.pixels > t, 255.0, 0.0))


def phase_fractions(binary: StepImage) -> tuple:
    """(white_fraction, black_fraction) of a binary image; sums to 1."""
    px = binary.pixels
    if not np.all((px == 0.0) | (px == 255.0)):
        raise ValueError("phase_fractions needs a binary image (values 0/255)")
    white = float(np.count_nonzero(px == 255.0)) / px.size
    return (white, 1.0 - white)


def write_phase_report(binary: StepImage, path) -> None:
    """CSV with header ``white_fraction,black_fraction`` and one data row."""
    white, black = phase_fractions(binary)
    with open(path, "w", newline="") as fh:
        fh.write("white_fraction,black_fraction\n")
        fh.write(f"{white:.12g},{black:.12g}\n")


def downsample_mean(image: StepImage, factor: int) -> StepImage:
    """Block-mean reduction; gray levels stay unquantized reals."""
    if not isinstance(factor, int) or factor < 1:
        raise ValueError("factor must be an integer >= 1")
    h, w = image.pixels.shape
    if h % factor or w % factor:
        raise ValueError(f"factor {factor} must divide the image dimensions")
    px = image.pixels.reshape(h // factor, factor, w // factor, factor)
    return StepImage(pixels=px.mean(axis=(1, 3)))


def nearest_upscale(image: StepImage, factor: int) -> StepImage:
    """Pixel-replication upscaling (the comparison baseline)."""
    if not isinstance(factor, int) or factor < 1:
        raise ValueError("factor must be an integer >= 1")
    px = np.repeat(np.repeat(image.pixels, factor, axis=0), factor, axis=1)
    return StepImage(pixels=px)


def psnr(image_a: StepImage, image_b: StepImage) -> float:
    """Peak signal-to-noise ratio in dB against peak 255 (inf if equal)."""
    if image_a.pixels.shape != image_b.pixels.shape:
        raise ValueError("psnr needs images of identical dimensions")
    mse = float(np.mean((image_a.pixels - image_b.pixels) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(255.0**2 / mse)
