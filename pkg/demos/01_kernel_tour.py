"""
A tour of the derivative kernel registry
========================================

Walks every registered Gx/Gy pair, then rebuilds the derivable ones from
their neighborhood weight schemes to show where the integer tables come
from — and where the distance-weighted 5x5 table refuses to follow from
its own weights.
"""

import numpy as np

from edgeforge.kernels import (
    derive_kernel,
    inverse_distance_weights,
    kernel_derivation_report,
    list_kernels,
    plane_fit,
    uniform_weights,
)


def show(matrix, indent="    "):
    for row in np.asarray(matrix):
        print(indent + " ".join(f"{v:5d}" for v in row))


# ---- every pair in the registry -------------------------------------------
for entry in list_kernels():
    aliases = f"  (alias: {', '.join(entry['aliases'])})" if entry["aliases"] else ""
    print(f"{entry['name']} {entry['size']}x{entry['size']}{aliases}")
    print("  Gx:")
    show(entry["gx"]["coefficients"])
    print()

# ---- deriving kernels from weights ----------------------------------------
# A kernel is the closed form of a weighted plane fit: fit alpha*r + beta*c
# + gamma to each neighborhood, and the beta estimate *is* a convolution.
# Unit weights give Prewitt:
print("unit weights ->")
show(derive_kernel(uniform_weights(1), "x"))

# Inverse squared-distance weights give the distance-weighted 3x3 kernel:
print("1/d^2 weights ->")
show(derive_kernel(inverse_distance_weights(1), "x"))

# The same idea checked against the whole registry:
print()
for name, size in [("prewitt", 3), ("prewitt", 5), ("proposed_a", 3),
                   ("proposed_b", 5), ("proposed_a", 5), ("sobel", 3)]:
    report = kernel_derivation_report(name, size)
    print(f"{name} {size}x{size}: {report['status']}")
# proposed_a 5x5 reports "mismatch": its published table does not equal the
# kernel its own 1/d^2 weight table derives to. The registry keeps the
# published form; the derivation pins the discrepancy.

# ---- the plane fit itself -------------------------------------------------
# Fit a tilted plane through a noisy patch; alpha/beta recover the slopes.
rng = np.random.default_rng(3)
r, c = np.mgrid[-1:2, -1:2]
patch = 4.0 * r + 9.0 * c + 17.0 + rng.normal(0.0, 0.01, (3, 3))
fit = plane_fit(patch, inverse_distance_weights(1))
print(f"\nplane fit on a 4r + 9c + 17 patch: "
      f"alpha={fit.alpha:.3f} beta={fit.beta:.3f} gamma={fit.gamma:.3f}")
