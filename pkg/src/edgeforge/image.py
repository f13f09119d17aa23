"""Image substrate: grayscale conversion, padded 2-D convolution, Gaussian smoothing.

Images are 2-D float64 arrays in row-major (height, width) layout with
intensities in [0, 255]. Processing keeps full float precision; quantization
to 8 bits happens only at IO boundaries (see `quantize_u8`).

All functions are pure: they never mutate their inputs and are deterministic,
so results are safe to share across threads.
"""

from __future__ import annotations

import math

import numpy as np

#: Supported border modes, mapped to the np.pad mode implementing them.
#: "reflect" mirrors about the array edge with the edge pixel included
#: (a b c -> b a | a b c | c b), so lookups are total for any pad width.
PADDING_MODES = {
    "replicate": "edge",
    "reflect": "symmetric",
    "zero": "constant",
}

# BT.601 luma coefficients for R, G, B.
_LUMA = (0.299, 0.587, 0.114)


def round_half_up(values):
    """Round to the nearest integer with halves going up (2.5 -> 3)."""
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


def quantize_u8(image: np.ndarray) -> np.ndarray:
    """Quantize a real-valued intensity field to uint8 (round half up, clamp)."""
    return np.clip(round_half_up(image), 0, 255).astype(np.uint8)


def as_image(array) -> np.ndarray:
    """Validate and return `array` as a 2-D float64 intensity field."""
    image = np.asarray(array, dtype=np.float64)
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {image.shape}")
    if image.shape[0] < 1 or image.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {image.shape}")
    return image


def to_grayscale(rgb) -> np.ndarray:
    """Convert a 3-channel (H, W, 3) raster to grayscale.

    Uses BT.601 luma (0.299 R + 0.587 G + 0.114 B) rounded half up, so a pure
    gray input (g, g, g) maps back to g exactly.
    """
    data = np.asarray(rgb, dtype=np.float64)
    if data.ndim != 3 or data.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) raster, got shape {data.shape}")
    if data.shape[0] < 1 or data.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {data.shape[:2]}")
    if data.min() < 0 or data.max() > 255:
        raise ValueError("channel values must lie in [0, 255]")
    luma = data[:, :, 0] * _LUMA[0] + data[:, :, 1] * _LUMA[1] + data[:, :, 2] * _LUMA[2]
    return round_half_up(luma)


def _pad(image: np.ndarray, pad_h: int, pad_w: int, padding: str) -> np.ndarray:
    try:
        mode = PADDING_MODES[padding]
    except KeyError:
        raise ValueError(
            f"unknown padding {padding!r}; expected one of {sorted(PADDING_MODES)}"
        ) from None
    if pad_h == 0 and pad_w == 0:
        return image
    return np.pad(image, ((pad_h, pad_h), (pad_w, pad_w)), mode=mode)


def convolve(image, kernel, padding: str = "replicate") -> np.ndarray:
    """Correlate `kernel` over `image`, returning a float64 field of equal shape.

    Semantics are cross-correlation (the kernel is not flipped): each output
    pixel is sum(kernel[dr, dc] * padded[r + dr, c + dc]) over kernel offsets
    centered at zero. Border pixels read through the padding mode, so the
    operation is total everywhere.

    Parameters
    ----------
    image : 2-D array
    kernel : 2-D array with odd sides (a `kernels.Kernel` works directly)
    padding : "replicate" (default), "reflect" or "zero"
    """
    image = as_image(image)
    coeffs = np.asarray(kernel, dtype=np.float64)
    if coeffs.ndim != 2:
        raise ValueError(f"kernel must be 2-D, got shape {coeffs.shape}")
    kh, kw = coeffs.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise ValueError(f"kernel sides must be odd, got {coeffs.shape}")

    padded = _pad(image, kh // 2, kw // 2, padding)
    windows = np.lib.stride_tricks.sliding_window_view(padded, (kh, kw))
    return np.tensordot(windows, coeffs, axes=([2, 3], [0, 1]))


def gaussian_kernel_1d(sigma: float, radius: int) -> np.ndarray:
    """Sampled 1-D Gaussian g(k) ~ exp(-k^2 / 2 sigma^2), k in [-radius, radius],
    normalized to sum to 1."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def gaussian_blur(image, sigma: float = 1.4, radius: int = 2,
                  padding: str = "replicate") -> np.ndarray:
    """Separable Gaussian smoothing; output is clamped to [0, 255].

    The default sigma=1.4 with radius=2 gives the usual 5x5 smoothing window.
    """
    image = as_image(image)
    g = gaussian_kernel_1d(sigma, radius)
    smoothed = convolve(image, g[np.newaxis, :], padding)
    smoothed = convolve(smoothed, g[:, np.newaxis], padding)
    return np.clip(smoothed, 0.0, 255.0)


def min_max_normalize(field: np.ndarray, upper: float = 255.0) -> np.ndarray:
    """Rescale a scalar field to [0, upper]; a constant field maps to all zeros."""
    field = np.asarray(field, dtype=np.float64)
    lo = field.min()
    hi = field.max()
    if not math.isfinite(lo) or not math.isfinite(hi):
        raise ValueError("field contains non-finite values")
    if hi == lo:
        return np.zeros_like(field)
    # Dividing by the range first keeps the endpoints exact: min -> 0, max -> upper.
    return (field - lo) / (hi - lo) * upper
