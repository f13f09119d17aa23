"""Five-stage edge detection with automatic threshold discovery.

The pipeline: Gaussian smoothing, gradient magnitude/orientation under a
chosen derivative kernel pair, Otsu threshold discovery, the double threshold
pair derived from it, non-maximum suppression, and hysteresis edge tracking.

Conventions fixed here (and relied on by the tests):

* Gradient magnitude is min-max rescaled to [0, 255] before anything reads
  it, so the absolute scale of the kernel coefficients is irrelevant to the
  final edge map. `gradient` additionally divides the kernel pair by the
  joint GCD of its entries up front, which makes the scale irrelevance exact
  at the bit level rather than merely up to rounding.
* Otsu runs by default on the 8-bit quantized magnitude field (the values the
  thresholds will gate); ``otsu_source="blurred-input"`` switches it to the
  quantized blurred grayscale instead.
* The low threshold is ``clamp(round((1 - f) * v))`` and the high threshold
  ``clamp(round((1 + f) * v))`` for Otsu value v and sigma fraction f
  (default 0.33), rounding half up. Low <= high always holds.
* Non-maximum suppression keeps ties (``>=`` against both neighbors along the
  quantized orientation), so flat ridges survive; border neighbors replicate
  the edge pixel.
* Hysteresis keeps every pixel >= high, plus pixels >= low that reach one
  through an 8-connected chain of pixels >= low.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field as dataclass_field
from math import floor, gcd
from typing import NamedTuple

import numpy as np

from .image import as_image, gaussian_blur, min_max_normalize, quantize_u8, to_grayscale
from .kernels import Kernel, registry_get

__all__ = [
    "NoContrastError",
    "GradientField",
    "OtsuResult",
    "HysteresisThresholds",
    "CannyConfig",
    "CannyResult",
    "magnitude",
    "quantize_orientation",
    "gradient",
    "otsu_threshold",
    "hysteresis_thresholds",
    "non_max_suppression",
    "hysteresis",
    "canny_pipeline",
]

#: An edge map is a 2-D boolean array (True = edge pixel).
EdgeMap = np.ndarray


class NoContrastError(ValueError):
    """Raised when threshold discovery sees fewer than two distinct values."""


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradient data: signed components, normalized magnitude,
    and orientation quantized to {0, 45, 90, 135} degrees.

    ``magnitude`` is min-max rescaled to [0, 255]; ``gx``/``gy`` are the raw
    convolution outputs of the (GCD-reduced) kernel pair.
    """

    gx: np.ndarray = dataclass_field(repr=False)
    gy: np.ndarray = dataclass_field(repr=False)
    magnitude: np.ndarray = dataclass_field(repr=False)
    orientation: np.ndarray = dataclass_field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitude.shape


class OtsuResult(NamedTuple):
    threshold: int
    between_class_variance: float


class HysteresisThresholds(NamedTuple):
    low: int
    high: int


@dataclass(frozen=True)
class CannyConfig:
    """Tunable pipeline parameters with their documented defaults."""

    gaussian_sigma: float = 1.4
    gaussian_radius: int = 2
    sigma_fraction: float = 0.33
    norm: str = "l2"
    otsu_source: str = "magnitude"
    padding: str = "replicate"

    def __post_init__(self):
        if not 0.0 < self.sigma_fraction < 1.0:
            raise ValueError(
                f"sigma_fraction must be in (0, 1), got {self.sigma_fraction}"
            )
        if self.norm not in ("l1", "l2"):
            raise ValueError(f"norm must be 'l1' or 'l2', got {self.norm!r}")
        if self.otsu_source not in ("magnitude", "blurred-input"):
            raise ValueError(
                "otsu_source must be 'magnitude' or 'blurred-input', "
                f"got {self.otsu_source!r}"
            )


@dataclass(frozen=True)
class CannyResult:
    """Edge map plus every intermediate stage, for diagnostics and tests."""

    edges: np.ndarray = dataclass_field(repr=False)
    otsu: OtsuResult = dataclass_field(repr=True)
    thresholds: HysteresisThresholds = dataclass_field(repr=True)
    field: GradientField = dataclass_field(repr=False)
    suppressed: np.ndarray = dataclass_field(repr=False)
    blurred: np.ndarray = dataclass_field(repr=False)
    timings: dict = dataclass_field(repr=False)

    @property
    def edge_pixels(self) -> int:
        return int(self.edges.sum())

    def diagnostics(self, include_timings: bool = False) -> dict:
        """JSON-ready run summary. Timings are opt-in so that written
        diagnostics stay byte-stable across identical runs."""
        payload = {
            "otsu": self.otsu.threshold,
            "low": self.thresholds.low,
            "high": self.thresholds.high,
            "edge_pixels": self.edge_pixels,
        }
        if include_timings:
            payload["timings"] = dict(self.timings)
        return payload


def magnitude(gx, gy, norm: str = "l2") -> np.ndarray:
    """Combine gradient components: sqrt(gx^2 + gy^2) for "l2",
    |gx| + |gy| for the faster "l1" approximation."""
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    if norm == "l2":
        return np.hypot(gx, gy)
    if norm == "l1":
        return np.abs(gx) + np.abs(gy)
    raise ValueError(f"norm must be 'l1' or 'l2', got {norm!r}")


def quantize_orientation(gx, gy) -> np.ndarray:
    """Quantize atan2(gy, gx) mod 180 degrees to the nearest of
    {0, 45, 90, 135}, with wraparound (170 degrees maps to 0)."""
    theta = np.degrees(np.arctan2(gy, gx)) % 180.0
    bins = np.floor_divide(theta + 22.5, 45.0).astype(np.int64) % 4
    return (bins * 45).astype(np.uint8)


def _joint_gcd_reduce(kx: np.ndarray, ky: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    entries = np.abs(np.concatenate([kx.ravel(), ky.ravel()])).tolist()
    common = gcd(*(int(v) for v in entries))
    if common == 0:
        raise ValueError("kernel pair is all zeros")
    return kx // common, ky // common


def gradient(image, gx_kernel: Kernel, gy_kernel: Kernel,
             norm: str = "l2", padding: str = "replicate") -> GradientField:
    """Gradient field of an image under an (x, y) derivative kernel pair.

    The pair is first divided by the joint GCD of all its entries; combined
    with min-max normalization of the magnitude this makes integer rescalings
    of a kernel pair produce bit-identical fields.
    """
    from .image import convolve

    if not (isinstance(gx_kernel, Kernel) and isinstance(gy_kernel, Kernel)):
        raise ValueError("gradient expects Kernel instances for both axes")
    if gx_kernel.axis != "x" or gy_kernel.axis != "y":
        raise ValueError(
            f"kernels do not form an (x, y) pair: axes are "
            f"({gx_kernel.axis!r}, {gy_kernel.axis!r})"
        )
    if gx_kernel.side != gy_kernel.side:
        raise ValueError(
            f"kernels do not form a matched pair: sides {gx_kernel.side} "
            f"and {gy_kernel.side}"
        )
    img = as_image(image)
    cx, cy = _joint_gcd_reduce(np.asarray(gx_kernel), np.asarray(gy_kernel))
    gx = convolve(img, cx, padding=padding)
    gy = convolve(img, cy, padding=padding)
    mag = min_max_normalize(magnitude(gx, gy, norm))
    return GradientField(
        gx=gx, gy=gy, magnitude=mag, orientation=quantize_orientation(gx, gy)
    )


def otsu_threshold(image_8bit) -> OtsuResult:
    """Histogram threshold maximizing the between-class variance.

    Returns the smallest t in [0, 254] maximizing w0*w1*(mu0 - mu1)^2 for the
    classes {values <= t} and {values > t}. The search runs in exact integer
    arithmetic — the maximizer of (s0*N - S*n0)^2 / (n0*n1), an N^2 multiple
    of the variance — so ties resolve identically to a brute-force scan.

    Raises NoContrastError when fewer than two distinct values are present.
    """
    values = np.asarray(image_8bit)
    if values.size == 0:
        raise ValueError("empty image")
    flat = values.ravel().astype(np.int64)
    if flat.min() < 0 or flat.max() > 255:
        raise ValueError("threshold discovery expects 8-bit values in [0, 255]")
    hist = np.bincount(flat, minlength=256).tolist()
    total = sum(hist)
    grand_sum = sum(i * h for i, h in enumerate(hist))
    if sum(1 for h in hist if h) < 2:
        raise NoContrastError(
            "image has no contrast: fewer than two distinct intensity values"
        )
    best_t = 0
    best_num, best_den = -1, 1   # numerator/denominator of the score
    n0 = 0
    s0 = 0
    for t in range(255):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            num, den = 0, 1
        else:
            num, den = (s0 * total - grand_sum * n0) ** 2, n0 * n1
        # Cross-multiplied comparison keeps the scan exact; strict improvement
        # only, so the smallest maximizing t wins.
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    variance = best_num / (best_den * total * total)
    return OtsuResult(threshold=best_t, between_class_variance=variance)


def _clamp_byte(value: float) -> int:
    return min(255, max(0, floor(value + 0.5)))


def hysteresis_thresholds(otsu, sigma_fraction: float = 0.33) -> HysteresisThresholds:
    """Double thresholds bracketing the Otsu value.

    low = clamp(round((1 - f) * v)), high = clamp(round((1 + f) * v)),
    rounding half up and clamping to [0, 255]. Low <= high for every v >= 0
    and f in (0, 1).
    """
    if not 0.0 < sigma_fraction < 1.0:
        raise ValueError(f"sigma_fraction must be in (0, 1), got {sigma_fraction}")
    value = otsu.threshold if isinstance(otsu, OtsuResult) else int(otsu)
    if not 0 <= value <= 255:
        raise ValueError(f"threshold value must be in [0, 255], got {value}")
    return HysteresisThresholds(
        low=_clamp_byte((1.0 - sigma_fraction) * value),
        high=_clamp_byte((1.0 + sigma_fraction) * value),
    )


#: Offsets to the two neighbors along each quantized orientation, as
#: (dr, dc) of one side; the other side is the negation. 0 degrees means the
#: gradient points along the row axis, so the neighbors are left/right.
_DIRECTION_STEPS = {0: (0, 1), 45: (1, 1), 90: (1, 0), 135: (1, -1)}


def non_max_suppression(field: GradientField) -> np.ndarray:
    """Thin the magnitude field to directional local maxima.

    A pixel survives iff its magnitude is >= both neighbors along its
    quantized orientation (ties kept, so plateaus survive); everything else
    drops to 0. Out-of-bounds neighbors replicate the border pixel.
    """
    mag = field.magnitude
    padded = np.pad(mag, 1, mode="edge")
    result = np.zeros_like(mag)
    for angle, (dr, dc) in _DIRECTION_STEPS.items():
        ahead = padded[1 + dr:padded.shape[0] - 1 + dr,
                       1 + dc:padded.shape[1] - 1 + dc]
        behind = padded[1 - dr:padded.shape[0] - 1 - dr,
                        1 - dc:padded.shape[1] - 1 - dc]
        keep = (field.orientation == angle) & (mag >= ahead) & (mag >= behind)
        result[keep] = mag[keep]
    return result


def hysteresis(suppressed, thresholds: HysteresisThresholds) -> EdgeMap:
    """Track edges from strong seeds through connected weak pixels.

    Pixels >= high are edges outright; pixels in [low, high) join only when
    an 8-connected chain of pixels >= low links them to one. Returns a
    boolean map.
    """
    values = as_image(suppressed)
    low, high = thresholds
    if not 0 <= low <= high <= 255:
        raise ValueError(f"need 0 <= low <= high <= 255, got {thresholds}")
    reachable = values >= low
    edges = values >= high
    height, width = values.shape
    queue = deque(map(tuple, np.argwhere(edges)))
    while queue:
        r, c = queue.popleft()
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                rr, cc = r + dr, c + dc
                if 0 <= rr < height and 0 <= cc < width and reachable[rr, cc] \
                        and not edges[rr, cc]:
                    edges[rr, cc] = True
                    queue.append((rr, cc))
    return edges


def canny_pipeline(image, operator: str = "proposed_a", size: int = 3,
                   kernel_pair: tuple[Kernel, Kernel] | None = None,
                   config: CannyConfig | None = None) -> CannyResult:
    """Run the full pipeline: blur, gradient, threshold discovery, NMS,
    hysteresis. Deterministic for fixed inputs and parameters.

    ``kernel_pair`` overrides the registry lookup of (operator, size) with an
    explicit (Gx, Gy) pair. A constant input (or any input whose magnitude
    field collapses to a single value) raises NoContrastError.
    """
    cfg = config if config is not None else CannyConfig()
    data = np.asarray(image, dtype=np.float64)
    timings: dict[str, float] = {}

    start = time.perf_counter()
    gray = to_grayscale(data) if data.ndim == 3 else as_image(data)
    timings["grayscale"] = time.perf_counter() - start

    start = time.perf_counter()
    blurred = gaussian_blur(gray, sigma=cfg.gaussian_sigma,
                            radius=cfg.gaussian_radius, padding=cfg.padding)
    timings["blur"] = time.perf_counter() - start

    start = time.perf_counter()
    kx, ky = kernel_pair if kernel_pair is not None else registry_get(operator, size)
    field = gradient(blurred, kx, ky, norm=cfg.norm, padding=cfg.padding)
    timings["gradient"] = time.perf_counter() - start

    start = time.perf_counter()
    otsu_input = blurred if cfg.otsu_source == "blurred-input" else field.magnitude
    otsu = otsu_threshold(quantize_u8(otsu_input))
    thresholds = hysteresis_thresholds(otsu, cfg.sigma_fraction)
    timings["otsu"] = time.perf_counter() - start

    start = time.perf_counter()
    suppressed = non_max_suppression(field)
    timings["nms"] = time.perf_counter() - start

    start = time.perf_counter()
    edges = hysteresis(suppressed, thresholds)
    timings["hysteresis"] = time.perf_counter() - start

    return CannyResult(edges=edges, otsu=otsu, thresholds=thresholds,
                       field=field, suppressed=suppressed, blurred=blurred,
                       timings=timings)
