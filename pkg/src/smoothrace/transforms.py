"""Image transformation suite: photometric and geometric perturbations plus
random-convolution texture randomization.

All functions take a 2D grayscale image (float array, values in [0, 1]) and
return a new array of the same shape and dtype with values in [0, 1].
Identity parameters (delta 0, factor 1, density 0, sigma 0, angle 0, shift 0,
scale 1) return a bit-exact copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ParameterError

PHOTOMETRIC_OPS = ("brightness", "contrast", "salt_pepper", "gaussian_blur")
GEOMETRIC_OPS = ("rotate", "shift", "scale")

# Source coordinates this close to an integer are snapped to it so that
# axis-aligned cases (integer shifts, 90-degree multiples) resample exactly.
_COORD_SNAP = 1e-6


@dataclass
class TransformParams:
    """Sampling ranges for the perturbation suite.

    Scalar fields are symmetric half-ranges (a value is drawn uniformly from
    [-x, +x]); pair fields are inclusive [lo, hi] ranges. Defaults are small
    on purpose: perturbed images must stay plausible neighbors of the input.
    """

    brightness_delta: float = 0.2
    contrast_factor: tuple[float, float] = (0.7, 1.3)
    salt_pepper_density: float = 0.02
    blur_sigma: tuple[float, float] = (0.5, 1.5)
    rotation_deg: float = 5.0
    shift_px: float = 3.0
    scale_factor: tuple[float, float] = (0.9, 1.1)
    randconv_kernels: tuple[int, ...] = (1, 3, 5, 7)

    def validate(self) -> "TransformParams":
        if self.brightness_delta < 0:
            raise ParameterError("brightness_delta must be >= 0")
        for name in ("contrast_factor", "blur_sigma", "scale_factor"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ParameterError(f"{name} range ({lo}, {hi}) is not ordered")
        if not 0.0 <= self.salt_pepper_density <= 1.0:
            raise ParameterError("salt_pepper_density must be in [0, 1]")
        if self.contrast_factor[0] < 0:
            raise ParameterError("contrast_factor must be non-negative")
        if self.blur_sigma[0] < 0:
            raise ParameterError("blur_sigma must be non-negative")
        if self.scale_factor[0] <= 0:
            raise ParameterError("scale_factor must be positive")
        if self.rotation_deg < 0 or self.shift_px < 0:
            raise ParameterError("rotation_deg and shift_px must be >= 0")
        if not self.randconv_kernels:
            raise ParameterError("randconv_kernels must not be empty")
        for k in self.randconv_kernels:
            if k < 1 or k % 2 == 0:
                raise ParameterError(f"randconv kernel size {k} must be odd and >= 1")
        return self


def brightness(img: np.ndarray, delta: float) -> np.ndarray:
    """Add `delta` to every pixel, clamped to [0, 1]."""
    if delta == 0.0:
        return img.copy()
    return np.clip(img + delta, 0.0, 1.0)


def contrast(img: np.ndarray, factor: float) -> np.ndarray:
    """Stretch pixel values about the image mean: mean + factor * (p - mean).

    factor = 1 is the identity, factor = 0 collapses to a constant image at
    the mean. Negative factors are rejected.
    """
    if factor < 0:
        raise ParameterError(f"contrast factor must be >= 0, got {factor}")
    if factor == 1.0:
        return img.copy()
    mean = float(img.mean(dtype=np.float64))
    out = mean + factor * (img.astype(np.float64) - mean)
    return np.clip(out, 0.0, 1.0).astype(img.dtype)


def salt_pepper(img: np.ndarray, density: float, rng: np.random.Generator) -> np.ndarray:
    """Replace each pixel independently by 0 or 1 (equal odds) with probability
    `density`."""
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"salt-pepper density must be in [0, 1], got {density}")
    if density == 0.0:
        return img.copy()
    hit = rng.random(img.shape) < density
    salt = rng.random(img.shape) < 0.5
    out = img.copy()
    out[hit & salt] = 1.0
    out[hit & ~salt] = 0.0
    return out


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel radius ceil(3*sigma), reflect padding."""
    if sigma < 0:
        raise ParameterError(f"blur sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return img.copy()
    kernel = _gaussian_kernel(sigma)
    radius = (len(kernel) - 1) // 2
    out = img.astype(np.float64)
    for axis in (0, 1):
        pad = [(0, 0), (0, 0)]
        pad[axis] = (radius, radius)
        padded = np.pad(out, pad, mode="reflect")
        windows = sliding_window_view(padded, len(kernel), axis=axis)
        out = windows @ kernel
    return np.clip(out, 0.0, 1.0).astype(img.dtype)


def _resample_bilinear(img: np.ndarray, src_y: np.ndarray, src_x: np.ndarray) -> np.ndarray:
    """Sample `img` at fractional source coordinates with bilinear weights.

    Coordinates are snapped to integers when within _COORD_SNAP (so exact
    geometric cases stay bit-exact) and clamped to the image bounds, which
    replicates the nearest border value for out-of-range samples.
    """
    h, w = img.shape
    sy = np.where(np.abs(src_y - np.round(src_y)) < _COORD_SNAP, np.round(src_y), src_y)
    sx = np.where(np.abs(src_x - np.round(src_x)) < _COORD_SNAP, np.round(src_x), src_x)
    sy = np.clip(sy, 0.0, h - 1.0)
    sx = np.clip(sx, 0.0, w - 1.0)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = sy - y0
    wx = sx - x0
    top = img[y0, x0] * (1.0 - wx) + img[y0, x1] * wx
    bot = img[y1, x0] * (1.0 - wx) + img[y1, x1] * wx
    return (top * (1.0 - wy) + bot * wy).astype(img.dtype)


def _centered_grid(shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray, float, float]:
    h, w = shape
    cy = (h - 1) / 2.0
    cx = (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    return yy - cy, xx - cx, cy, cx


def rotate(img: np.ndarray, angle_deg: float) -> np.ndarray:
    """Rotate about the image center (inverse map, bilinear)."""
    if angle_deg == 0.0:
        return img.copy()
    theta = math.radians(angle_deg)
    v, u, cy, cx = _centered_grid(img.shape)
    src_x = cx + math.cos(theta) * u - math.sin(theta) * v
    src_y = cy + math.sin(theta) * u + math.cos(theta) * v
    return _resample_bilinear(img, src_y, src_x)


def shift(img: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Shift by (dx, dy) pixels (columns right, rows down), border replicated."""
    if dx == 0.0 and dy == 0.0:
        return img.copy()
    h, w = img.shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    return _resample_bilinear(img, yy - dy, xx - dx)


def scale(img: np.ndarray, factor: float) -> np.ndarray:
    """Zoom about the image center by `factor` (> 1 zooms in)."""
    if factor <= 0:
        raise ParameterError(f"scale factor must be > 0, got {factor}")
    if factor == 1.0:
        return img.copy()
    v, u, cy, cx = _centered_grid(img.shape)
    return _resample_bilinear(img, cy + v / factor, cx + u / factor)


def rand_conv(
    img: np.ndarray,
    rng: np.random.Generator,
    kernel_sizes: tuple[int, ...] = (1, 3, 5, 7),
    weights: np.ndarray | None = None,
) -> np.ndarray:
    """Convolve with a freshly sampled random kernel, then rescale to [0, 1].

    The kernel size is drawn uniformly from `kernel_sizes` and its weights
    from a zero-mean Gaussian; weights are never reused across calls. Because
    the output is linearly rescaled to span [0, 1], edges and global shape
    survive while texture and polarity are randomized. `weights` overrides
    the sampled kernel (test hook).
    """
    if weights is None:
        for k in kernel_sizes:
            if k % 2 == 0 or k < 1:
                raise ParameterError(f"kernel sizes must be odd, got {k}")
        if not kernel_sizes:
            raise ParameterError("kernel_sizes must not be empty")
        k = int(rng.choice(np.asarray(kernel_sizes)))
        weights = rng.normal(0.0, 1.0 / k, size=(k, k))
    else:
        k = weights.shape[0]
        if weights.shape != (k, k) or k % 2 == 0:
            raise ParameterError("weight override must be a square odd-sized kernel")
    radius = k // 2
    padded = np.pad(img.astype(np.float64), radius, mode="reflect")
    windows = sliding_window_view(padded, (k, k))
    out = np.einsum("ijkl,kl->ij", windows, weights)
    lo, hi = out.min(), out.max()
    if hi - lo > 1e-12:
        out = (out - lo) / (hi - lo)
    else:
        out = np.clip(out, 0.0, 1.0)
    return out.astype(img.dtype)


def random_photometric(img: np.ndarray, params: TransformParams, rng: np.random.Generator) -> np.ndarray:
    """Apply one photometric transform chosen uniformly, parameters drawn from
    the configured ranges."""
    op = PHOTOMETRIC_OPS[rng.integers(len(PHOTOMETRIC_OPS))]
    if op == "brightness":
        return brightness(img, rng.uniform(-params.brightness_delta, params.brightness_delta))
    if op == "contrast":
        return contrast(img, rng.uniform(*params.contrast_factor))
    if op == "salt_pepper":
        return salt_pepper(img, params.salt_pepper_density, rng)
    return gaussian_blur(img, rng.uniform(*params.blur_sigma))


def random_geometric(img: np.ndarray, params: TransformParams, rng: np.random.Generator) -> np.ndarray:
    """Apply one geometric transform chosen uniformly, parameters drawn from
    the configured ranges."""
    op = GEOMETRIC_OPS[rng.integers(len(GEOMETRIC_OPS))]
    if op == "rotate":
        return rotate(img, rng.uniform(-params.rotation_deg, params.rotation_deg))
    if op == "shift":
        dx = rng.uniform(-params.shift_px, params.shift_px)
        dy = rng.uniform(-params.shift_px, params.shift_px)
        return shift(img, dx, dy)
    return scale(img, rng.uniform(*params.scale_factor))
