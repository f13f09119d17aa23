"""edgeforge: gradient-operator edge detection with automatic thresholds.

The package splits into small layers:

* `edgeforge.image` — grayscale conversion, padding, convolution, blur,
  normalization primitives.
* `edgeforge.kernels` — the derivative-operator registry and the weighted
  plane-fit machinery that derives kernels from neighborhood weight schemes.
* `edgeforge.canny` — the five-stage detection pipeline (blur, gradient,
  threshold discovery, non-maximum suppression, hysteresis).
* `edgeforge.analysis` — connected-component statistics and operator
  comparison over image corpora.
* `edgeforge.cli` — the ``edgeforge`` command (gradient / canny / compare /
  kernels).
"""

from .analysis import (
    ComponentLabeling,
    DiffMaps,
    EdgeStats,
    compare_operators,
    diff_maps,
    edge_stats,
    label_components,
)
from .canny import (
    CannyConfig,
    CannyResult,
    GradientField,
    HysteresisThresholds,
    NoContrastError,
    OtsuResult,
    canny_pipeline,
    gradient,
    hysteresis,
    hysteresis_thresholds,
    non_max_suppression,
    otsu_threshold,
)
from .image import convolve, gaussian_blur, min_max_normalize, to_grayscale
from .kernels import (
    Kernel,
    PlaneFit,
    WeightMatrix,
    derive_kernel,
    inverse_distance_weights,
    list_kernels,
    plane_fit,
    radial_weights,
    registry_get,
    uniform_weights,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CannyConfig",
    "CannyResult",
    "ComponentLabeling",
    "DiffMaps",
    "EdgeStats",
    "GradientField",
    "HysteresisThresholds",
    "Kernel",
    "NoContrastError",
    "OtsuResult",
    "PlaneFit",
    "WeightMatrix",
    "canny_pipeline",
    "compare_operators",
    "convolve",
    "derive_kernel",
    "diff_maps",
    "edge_stats",
    "gaussian_blur",
    "gradient",
    "hysteresis",
    "hysteresis_thresholds",
    "inverse_distance_weights",
    "label_components",
    "list_kernels",
    "min_max_normalize",
    "non_max_suppression",
    "otsu_threshold",
    "plane_fit",
    "radial_weights",
    "registry_get",
    "to_grayscale",
    "uniform_weights",
]
