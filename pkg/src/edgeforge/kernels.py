"""First-derivative operator registry and the weighted plane-fit derivation.

The registry carries five operator families at sizes 3 and 5:

* ``sobel``, ``prewitt``, ``scharr`` — the classical kernels and their 5x5
  extensions;
* ``proposed_a`` — derived from inverse-squared-distance neighborhood weights
  (1 / d^2 off center);
* ``proposed_b`` — derived from radial weights that double along the two axes
  through the center.

The two distance-weighted families share their 3x3 kernel and differ only at
5x5, so the registry exposes nine distinct kernel pairs under ten
(name, size) addresses. For every pair Gy is the transpose of Gx.

A weight matrix turns into a derivative kernel through a weighted least-squares
plane fit: fitting alpha*r + beta*c + gamma to a neighborhood patch with
per-pixel weights w(r, c) gives closed-form estimates whose unnormalized
x-kernel coefficient at offset (r, c) is w(r, c)^2 * c (and w^2 * r for y).
`derive_kernel` reduces that to the minimal integer kernel. The registry entry
for proposed_a at 5x5 is a fixed table that this derivation does not
reproduce; `kernel_derivation_report` (and the ``edgeforge kernels --derive``
command) make the match/mismatch status explicit per operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple

import numpy as np

__all__ = [
    "Kernel",
    "WeightMatrix",
    "PlaneFit",
    "OPERATOR_NAMES",
    "KERNEL_SIZES",
    "registry_get",
    "list_kernels",
    "uniform_weights",
    "inverse_distance_weights",
    "radial_weights",
    "weights_for_operator",
    "derive_kernel",
    "plane_fit",
    "kernel_derivation_report",
]


@dataclass(frozen=True, eq=False)
class Kernel:
    """An odd-square integer derivative kernel for one axis.

    Invariants, checked at construction: side is odd and >= 3, coefficients
    sum to 0, and the kernel is antisymmetric about its center line (vertical
    for axis "x", horizontal for axis "y"), which forces the center column
    (resp. row) to be all zeros.
    """

    name: str
    axis: str
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=np.int64)
        if coeffs.ndim != 2 or coeffs.shape[0] != coeffs.shape[1]:
            raise ValueError(f"kernel must be square, got shape {coeffs.shape}")
        side = coeffs.shape[0]
        if side < 3 or side % 2 == 0:
            raise ValueError(f"kernel side must be odd and >= 3, got {side}")
        if self.axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if int(coeffs.sum()) != 0:
            raise ValueError(f"kernel coefficients must sum to 0 ({self.name})")
        mirrored = coeffs[:, ::-1] if self.axis == "x" else coeffs[::-1, :]
        if not np.array_equal(mirrored, -coeffs):
            raise ValueError(
                f"kernel {self.name!r} is not antisymmetric about its {self.axis} center line"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def side(self) -> int:
        return self.coefficients.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.coefficients
        return self.coefficients.astype(dtype)

    def as_dict(self) -> dict:
        """JSON-friendly description: name, size, axis, row-major coefficients."""
        return {
            "name": self.name,
            "size": self.side,
            "axis": self.axis,
            "coefficients": self.coefficients.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.as_dict(), **kwargs)


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Nonnegative neighborhood weights on a (2L+1)-sided window.

    Weights must have 4-fold symmetry (invariant under negating either offset)
    and be strictly positive off center. The center entry is a placeholder and
    is stored as 0; it never influences the derivative estimates because the
    center offsets are (0, 0).
    """

    radius: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.int64)
        side = 2 * self.radius + 1
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")
        if w.shape != (side, side):
            raise ValueError(f"weights must have shape {(side, side)}, got {w.shape}")
        w[self.radius, self.radius] = 0
        if w.min() < 0:
            raise ValueError("weights must be nonnegative")
        if (w == 0).sum() > 1:
            raise ValueError("all off-center weights must be > 0")
        if not (
            np.array_equal(w, w[::-1, :])
            and np.array_equal(w, w[:, ::-1])
        ):
            raise ValueError("weights must be symmetric under negating either offset")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.weights
        return self.weights.astype(dtype)

    @classmethod
    def from_array(cls, array) -> "WeightMatrix":
        arr = np.asarray(array)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 == 0:
            raise ValueError(f"weights must be odd-square, got shape {arr.shape}")
        return cls(radius=arr.shape[0] // 2, weights=arr)


class PlaneFit(NamedTuple):
    """Weighted least-squares plane through a patch: alpha*r + beta*c + gamma."""

    alpha: float  # derivative along rows
    beta: float   # derivative along columns
    gamma: float  # weighted local mean


# Gx tables, row-major, one per distinct kernel. Gy is always the transpose.
_GX = {
    ("sobel", 3): (
        (-1, 0, 1),
        (-2, 0, 2),
        (-1, 0, 1),
    ),
    ("prewitt", 3): (
        (-1, 0, 1),
        (-1, 0, 1),
        (-1, 0, 1),
    ),
    ("scharr", 3): (
        (-3, 0, 3),
        (-10, 0, 10),
        (-3, 0, 3),
    ),
    ("sobel", 5): (
        (-5, -4, 0, 4, 5),
        (-8, -10, 0, 10, 8),
        (-10, -20, 0, 20, 10),
        (-8, -10, 0, 10, 8),
        (-5, -4, 0, 4, 5),
    ),
    ("prewitt", 5): (
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
    ),
    ("scharr", 5): (
        (-1, -1, 0, 1, 1),
        (-2, -2, 0, 2, 2),
        (-3, -6, 0, 6, 3),
        (-2, -2, 0, 2, 2),
        (-1, -1, 0, 1, 1),
    ),
    ("proposed_a", 3): (
        (-1, 0, 1),
        (-4, 0, 4),
        (-1, 0, 1),
    ),
    ("proposed_a", 5): (
        (-25, -4, 0, 4, 25),
        (-64, -10, 0, 10, 64),
        (-100, -20, 0, 20, 100),
        (-64, -10, 0, 10, 64),
        (-25, -4, 0, 4, 25),
    ),
    ("proposed_b", 5): (
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
        (-8, -4, 0, 4, 8),
        (-2, -1, 0, 1, 2),
        (-2, -1, 0, 1, 2),
    ),
}

# proposed_b shares the 3x3 kernel of proposed_a; the families differ at 5x5.
_ALIASES = {("proposed_b", 3): ("proposed_a", 3)}

OPERATOR_NAMES = ("sobel", "prewitt", "scharr", "proposed_a", "proposed_b")
KERNEL_SIZES = (3, 5)


def registry_get(name: str, size: int) -> tuple[Kernel, Kernel]:
    """Look up the (Gx, Gy) pair for an operator name and size.

    Raises KeyError for unknown names or sizes.
    """
    key = _ALIASES.get((name, size), (name, size))
    if key not in _GX:
        raise KeyError(
            f"no kernel for operator {name!r} at size {size}; "
            f"operators: {', '.join(OPERATOR_NAMES)}; sizes: {KERNEL_SIZES}"
        )
    gx = np.array(_GX[key], dtype=np.int64)
    label = f"{name}_{size}x{size}"
    return (
        Kernel(name=label, axis="x", coefficients=gx),
        Kernel(name=label, axis="y", coefficients=gx.T),
    )


def list_kernels() -> list[dict]:
    """Describe the nine distinct kernel pairs in the registry.

    Each entry carries the canonical Gx/Gy pair plus any alias names that
    resolve to it (the shared 3x3 distance-weighted kernel).
    """
    alias_for = {}
    for alias, target in _ALIASES.items():
        alias_for.setdefault(target, []).append(f"{alias[0]}_{alias[1]}x{alias[1]}")
    entries = []
    for (name, size) in _GX:
        gx, gy = registry_get(name, size)
        entries.append(
            {
                "name": name,
                "size": size,
                "gx": gx.as_dict(),
                "gy": gy.as_dict(),
                "aliases": sorted(alias_for.get((name, size), [])),
            }
        )
    return entries


def uniform_weights(radius: int) -> WeightMatrix:
    """Unit weights: the plane fit degenerates to the unweighted fit (Prewitt)."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    side = 2 * radius + 1
    return WeightMatrix(radius=radius, weights=np.ones((side, side), dtype=np.int64))


def inverse_distance_weights(radius: int) -> WeightMatrix:
    """Weights proportional to 1 / d^2 off center (d = Euclidean offset length),
    scaled to the minimal all-integer matrix."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    side = 2 * radius + 1
    fracs = {}
    for r in range(-radius, radius + 1):
        for c in range(-radius, radius + 1):
            if (r, c) != (0, 0):
                fracs[(r, c)] = Fraction(1, r * r + c * c)
    scale = lcm(*(f.denominator for f in fracs.values()))
    ints = {offset: f * scale for offset, f in fracs.items()}
    common = gcd(*(int(v) for v in ints.values()))
    weights = np.zeros((side, side), dtype=np.int64)
    for (r, c), value in ints.items():
        weights[r + radius, c + radius] = int(value) // common
    return WeightMatrix(radius=radius, weights=weights)


def radial_weights(radius: int) -> WeightMatrix:
    """Radial weight scheme: weights double along the two axes through the
    center. Only radii 1 and 2 are defined."""
    if radius == 1:
        weights = [
            (1, 2, 1),
            (2, 0, 2),
            (1, 2, 1),
        ]
    elif radius == 2:
        weights = [
            (1, 1, 2, 1, 1),
            (1, 1, 2, 1, 1),
            (2, 2, 0, 2, 2),
            (1, 1, 2, 1, 1),
            (1, 1, 2, 1, 1),
        ]
    else:
        raise ValueError(f"radial weights are defined for radius 1 or 2, got {radius}")
    return WeightMatrix(radius=radius, weights=np.array(weights, dtype=np.int64))


#: Weight scheme behind each derivable operator family.
_WEIGHT_SCHEMES = {
    "proposed_a": inverse_distance_weights,
    "proposed_b": radial_weights,
    "prewitt": uniform_weights,
}


def weights_for_operator(name: str, size: int) -> WeightMatrix:
    """Return the weight scheme an operator family derives from.

    Raises KeyError for families without one (sobel, scharr).
    """
    if name not in _WEIGHT_SCHEMES:
        raise KeyError(f"operator {name!r} has no generating weight scheme")
    return _WEIGHT_SCHEMES[name](size // 2)


def _as_weight_matrix(weights) -> WeightMatrix:
    if isinstance(weights, WeightMatrix):
        return weights
    return WeightMatrix.from_array(weights)


def derive_kernel(weights, axis: str, name: str = "derived") -> Kernel:
    """Derive the minimal integer derivative kernel from a weight matrix.

    The unnormalized plane-fit coefficient at offset (r, c) is w^2 * c for the
    x axis and w^2 * r for the y axis; the result is divided by the GCD of its
    entries, so the output is the minimal integer form.
    """
    wm = _as_weight_matrix(weights)
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    L = wm.radius
    offsets = np.arange(-L, L + 1, dtype=np.int64)
    w2 = wm.weights.astype(np.int64) ** 2
    raw = w2 * (offsets[np.newaxis, :] if axis == "x" else offsets[:, np.newaxis])
    common = gcd(*(int(v) for v in np.abs(raw[raw != 0])))
    return Kernel(name=f"{name}_{2 * L + 1}x{2 * L + 1}", axis=axis,
                  coefficients=raw // common)


def plane_fit(patch, weights) -> PlaneFit:
    """Fit alpha*r + beta*c + gamma to a patch by weighted least squares.

    The 4-fold symmetry of the weights decouples the normal equations:
    alpha = sum(w^2 r I) / sum(w^2 r^2), beta likewise over columns, and
    gamma = sum(w^2 I) / sum(w^2). Offsets r, c run over [-L, L] with the
    patch center at (0, 0).
    """
    wm = _as_weight_matrix(weights)
    data = np.asarray(patch, dtype=np.float64)
    if data.shape != (wm.side, wm.side):
        raise ValueError(
            f"patch shape {data.shape} does not match weight side {wm.side}"
        )
    L = wm.radius
    offsets = np.arange(-L, L + 1, dtype=np.float64)
    rows = offsets[:, np.newaxis]
    cols = offsets[np.newaxis, :]
    w2 = wm.weights.astype(np.float64) ** 2
    denom_r = float((w2 * rows * rows).sum())
    denom_c = float((w2 * cols * cols).sum())
    denom_g = float(w2.sum())
    if denom_r == 0.0 or denom_c == 0.0 or denom_g == 0.0:
        raise ValueError("degenerate weights: plane fit is singular")
    alpha = float((w2 * rows * data).sum()) / denom_r
    beta = float((w2 * cols * data).sum()) / denom_c
    gamma = float((w2 * data).sum()) / denom_g
    return PlaneFit(alpha=alpha, beta=beta, gamma=gamma)


def kernel_derivation_report(name: str, size: int) -> dict:
    """Cross-check a registry entry against its weight-scheme derivation.

    Returns the registry pair plus, when the family has a weight scheme, the
    derived pair and a status of "match" or "mismatch". Families with no
    scheme report status "underivable".
    """
    gx, gy = registry_get(name, size)
    report = {"name": name, "size": size, "registry": {"gx": gx.as_dict(), "gy": gy.as_dict()}}
    try:
        wm = weights_for_operator(name, size)
    except KeyError:
        report["status"] = "underivable"
        return report
    derived_x = derive_kernel(wm, "x", name=f"{name}_derived")
    derived_y = derive_kernel(wm, "y", name=f"{name}_derived")
    report["weights"] = np.asarray(wm).tolist()
    report["derived"] = {"gx": derived_x.as_dict(), "gy": derived_y.as_dict()}
    matches = np.array_equal(np.asarray(derived_x), np.asarray(gx)) and np.array_equal(
        np.asarray(derived_y), np.asarray(gy)
    )
    report["status"] = "match" if matches else "mismatch"
    return report
