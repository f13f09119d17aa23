import json
from math import gcd

import numpy as np
import pytest

from edgeforge.kernels import (
    KERNEL_SIZES,
    OPERATOR_NAMES,
    Kernel,
    WeightMatrix,
    derive_kernel,
    inverse_distance_weights,
    kernel_derivation_report,
    list_kernels,
    plane_fit,
    radial_weights,
    registry_get,
    uniform_weights,
    weights_for_operator,
)
from oracles import plane_fit_grid_search, weighted_fit_cost

ALL_ADDRESSES = [(name, size) for name in OPERATOR_NAMES for size in KERNEL_SIZES]


@pytest.mark.parametrize("name,size", ALL_ADDRESSES)
def test_registry_pair_invariants(name, size):
    gx, gy = registry_get(name, size)
    ax, ay = np.asarray(gx), np.asarray(gy)
    assert np.array_equal(ay, ax.T)
    assert ax.sum() == 0 and ay.sum() == 0
    assert np.array_equal(ax[:, ::-1], -ax)   # antisymmetry about the x center line
    assert np.array_equal(ay[::-1, :], -ay)
    assert ax.shape == (size, size)


def test_sobel_3x3_values():
    gx, _ = registry_get("sobel", 3)
    assert np.asarray(gx).tolist() == [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]


def test_scharr_5x5_antisymmetric_form():
    # Entry (1, 3) must be 2: with (1, 1) = -2 the antisymmetry invariant
    # forces it, and every other row of the table already obeys the pattern.
    gx, _ = registry_get("scharr", 5)
    matrix = np.asarray(gx)
    assert matrix[1, 3] == 2
    assert np.array_equal(matrix[:, ::-1], -matrix)


def test_shared_3x3_between_distance_weighted_families():
    a_gx, a_gy = registry_get("proposed_a", 3)
    b_gx, b_gy = registry_get("proposed_b", 3)
    assert np.array_equal(np.asarray(a_gx), np.asarray(b_gx))
    assert np.array_equal(np.asarray(a_gy), np.asarray(b_gy))


def test_distance_weighted_families_differ_at_5x5():
    a_gx, _ = registry_get("proposed_a", 5)
    b_gx, _ = registry_get("proposed_b", 5)
    assert not np.array_equal(np.asarray(a_gx), np.asarray(b_gx))


def test_registry_get_unknown():
    with pytest.raises(KeyError, match="sobel"):
        registry_get("roberts", 3)
    with pytest.raises(KeyError):
        registry_get("sobel", 7)


def test_list_kernels_has_nine_distinct_pairs():
    entries = list_kernels()
    assert len(entries) == 9
    keys = {(e["name"], e["size"]) for e in entries}
    assert len(keys) == 9
    aliased = [e for e in entries if e["aliases"]]
    assert len(aliased) == 1
    assert aliased[0]["name"] == "proposed_a" and aliased[0]["size"] == 3
    assert aliased[0]["aliases"] == ["proposed_b_3x3"]


def test_kernel_json_round_trip():
    gx, _ = registry_get("scharr", 3)
    payload = json.loads(gx.to_json())
    assert payload["axis"] == "x"
    assert payload["size"] == 3
    assert payload["coefficients"] == [[-3, 0, 3], [-10, 0, 10], [-3, 0, 3]]


class TestKernelValidation:
    def test_rejects_even_or_tiny_sides(self):
        with pytest.raises(ValueError):
            Kernel("k", "x", np.zeros((2, 2), dtype=np.int64))
        with pytest.raises(ValueError):
            Kernel("k", "x", np.zeros((1, 1), dtype=np.int64))
        with pytest.raises(ValueError):
            Kernel("k", "x", np.zeros((3, 5), dtype=np.int64))

    def test_rejects_bad_axis(self):
        with pytest.raises(ValueError):
            Kernel("k", "diag", np.array([[-1, 0, 1]] * 3))

    def test_rejects_nonzero_sum(self):
        with pytest.raises(ValueError, match="sum"):
            Kernel("k", "x", np.array([[0, 0, 1], [-1, 0, 2], [0, 0, 1]]))

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(ValueError, match="antisymmetric"):
            Kernel("k", "x", np.array([[-1, 0, 2], [-2, 0, 1], [-1, 1, 0]]))

    def test_coefficients_are_frozen(self):
        gx, _ = registry_get("sobel", 3)
        with pytest.raises(ValueError):
            gx.coefficients[0, 0] = 5


class TestWeightMatrices:
    def test_uniform(self):
        w = uniform_weights(1)
        expected = [[1, 1, 1], [1, 0, 1], [1, 1, 1]]
        assert np.asarray(w).tolist() == expected

    def test_inverse_distance_radius_1(self):
        w = inverse_distance_weights(1)
        assert np.asarray(w).tolist() == [[1, 2, 1], [2, 0, 2], [1, 2, 1]]

    def test_inverse_distance_radius_2(self):
        w = inverse_distance_weights(2)
        assert np.asarray(w).tolist() == [
            [5, 8, 10, 8, 5],
            [8, 20, 40, 20, 8],
            [10, 40, 0, 40, 10],
            [8, 20, 40, 20, 8],
            [5, 8, 10, 8, 5],
        ]

    def test_inverse_distance_ratio(self):
        # A diagonal neighbor sits at squared distance 2, an axis neighbor
        # at 1, so its weight is exactly half.
        w = np.asarray(inverse_distance_weights(1))
        assert 2 * w[0, 0] == w[0, 1]

    def test_inverse_distance_is_minimal_integer_form(self):
        for radius in (1, 2, 3):
            w = np.asarray(inverse_distance_weights(radius))
            nonzero = [int(v) for v in w.ravel() if v]
            assert gcd(*nonzero) == 1

    def test_radial_matrices(self):
        assert np.asarray(radial_weights(1)).tolist() == \
            [[1, 2, 1], [2, 0, 2], [1, 2, 1]]
        assert np.asarray(radial_weights(2)).tolist() == [
            [1, 1, 2, 1, 1],
            [1, 1, 2, 1, 1],
            [2, 2, 0, 2, 2],
            [1, 1, 2, 1, 1],
            [1, 1, 2, 1, 1],
        ]

    def test_radial_radius_1_equals_inverse_distance(self):
        assert np.array_equal(np.asarray(radial_weights(1)),
                              np.asarray(inverse_distance_weights(1)))

    def test_radial_unsupported_radius(self):
        with pytest.raises(ValueError):
            radial_weights(3)

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightMatrix(radius=1, weights=-np.ones((3, 3), dtype=np.int64))
        lopsided = np.array([[1, 2, 1], [2, 0, 2], [1, 2, 3]])
        with pytest.raises(ValueError, match="symmetric"):
            WeightMatrix(radius=1, weights=lopsided)
        holes = np.array([[1, 0, 1], [1, 0, 1], [1, 0, 1]])
        with pytest.raises(ValueError, match="> 0"):
            WeightMatrix(radius=1, weights=holes)
        with pytest.raises(ValueError):
            WeightMatrix.from_array(np.ones((4, 4)))

    def test_center_entry_is_placeholder(self):
        w = WeightMatrix(radius=1, weights=np.array(
            [[1, 2, 1], [2, 99, 2], [1, 2, 1]]))
        assert np.asarray(w)[1, 1] == 0


class TestDeriveKernel:
    def test_unit_weights_give_prewitt(self):
        gx = derive_kernel(uniform_weights(1), "x")
        assert np.asarray(gx).tolist() == [[-1, 0, 1]] * 3
        gx5 = derive_kernel(uniform_weights(2), "x")
        assert np.asarray(gx5).tolist() == [[-2, -1, 0, 1, 2]] * 5
        registry_gx5, _ = registry_get("prewitt", 5)
        assert np.array_equal(np.asarray(gx5), np.asarray(registry_gx5))

    def test_inverse_distance_gives_registered_3x3(self):
        gx = derive_kernel(inverse_distance_weights(1), "x")
        assert np.asarray(gx).tolist() == [[-1, 0, 1], [-4, 0, 4], [-1, 0, 1]]

    def test_radial_gives_registered_5x5(self):
        gx = derive_kernel(radial_weights(2), "x")
        registered, _ = registry_get("proposed_b", 5)
        assert np.array_equal(np.asarray(gx), np.asarray(registered))

    def test_y_axis_is_transpose_of_x(self):
        for weights in (uniform_weights(2), inverse_distance_weights(2),
                        radial_weights(2)):
            gx = derive_kernel(weights, "x")
            gy = derive_kernel(weights, "y")
            assert np.array_equal(np.asarray(gy), np.asarray(gx).T)

    def test_output_is_gcd_reduced(self):
        for weights in (inverse_distance_weights(1), inverse_distance_weights(2),
                        radial_weights(2), uniform_weights(3)):
            k = np.asarray(derive_kernel(weights, "x"))
            nonzero = [abs(int(v)) for v in k.ravel() if v]
            assert gcd(*nonzero) == 1

    def test_accepts_raw_arrays(self):
        gx = derive_kernel([[1, 2, 1], [2, 0, 2], [1, 2, 1]], "x")
        assert np.asarray(gx).tolist() == [[-1, 0, 1], [-4, 0, 4], [-1, 0, 1]]

    def test_rejects_bad_axis(self):
        with pytest.raises(ValueError):
            derive_kernel(uniform_weights(1), "z")


class TestDerivationReports:
    def test_match_statuses(self):
        assert kernel_derivation_report("prewitt", 3)["status"] == "match"
        assert kernel_derivation_report("prewitt", 5)["status"] == "match"
        assert kernel_derivation_report("proposed_a", 3)["status"] == "match"
        assert kernel_derivation_report("proposed_b", 3)["status"] == "match"
        assert kernel_derivation_report("proposed_b", 5)["status"] == "match"

    def test_registered_5x5_inverse_distance_table_is_not_derivable(self):
        # The published 5x5 table for this family does not come out of the
        # w^2 * c construction; the report keeps that visible instead of
        # glossing over it.
        report = kernel_derivation_report("proposed_a", 5)
        assert report["status"] == "mismatch"
        assert report["derived"]["gx"]["coefficients"] != \
            report["registry"]["gx"]["coefficients"]

    def test_smoothing_only_families_are_underivable(self):
        assert kernel_derivation_report("sobel", 3)["status"] == "underivable"
        assert kernel_derivation_report("scharr", 5)["status"] == "underivable"

    def test_weights_for_operator_unknown(self):
        with pytest.raises(KeyError):
            weights_for_operator("sobel", 3)


class TestPlaneFit:
    def test_exact_plane_recovered(self):
        patch = np.array([[3.0 * r + 5.0 * c + 7.0 for c in (-1, 0, 1)]
                          for r in (-1, 0, 1)])
        for weights in (uniform_weights(1), inverse_distance_weights(1)):
            fit = plane_fit(patch, weights)
            assert fit.alpha == pytest.approx(3.0, abs=1e-12)
            assert fit.beta == pytest.approx(5.0, abs=1e-12)
            assert fit.gamma == pytest.approx(7.0, abs=1e-12)

    def test_constant_patch(self):
        fit = plane_fit(np.full((3, 3), 9.0), uniform_weights(1))
        assert (fit.alpha, fit.beta, fit.gamma) == (0.0, 0.0, 9.0)

    def test_matches_grid_search_oracle(self):
        rng = np.random.default_rng(42)
        weights = inverse_distance_weights(1)
        for _ in range(3):
            patch = np.floor(rng.uniform(0, 256, (3, 3)))
            fit = plane_fit(patch, weights)
            oracle = plane_fit_grid_search(patch, weights)
            assert abs(fit.alpha - oracle[0]) < 5e-6
            assert abs(fit.beta - oracle[1]) < 5e-6
            assert abs(fit.gamma - oracle[2]) < 5e-6
            # and the closed form never costs more than the search minimum
            assert weighted_fit_cost(patch, weights, *fit) <= \
                weighted_fit_cost(patch, weights, *oracle) + 1e-9

    def test_beta_is_the_kernel_estimate(self):
        # The derived x kernel, times the patch, is the unnormalized beta:
        # beta = g * sum(kernel * I) / sum(w^2 c^2) with g the reduction
        # factor the derivation divided out.
        rng = np.random.default_rng(9)
        weights = inverse_distance_weights(2)
        patch = np.floor(rng.uniform(0, 256, (5, 5)))
        kernel = np.asarray(derive_kernel(weights, "x"), dtype=np.float64)
        w2 = np.asarray(weights, dtype=np.float64) ** 2
        cols = np.arange(-2, 3, dtype=np.float64)[np.newaxis, :]
        raw = w2 * cols
        reduction = gcd(*(int(abs(v)) for v in raw.ravel() if v))
        beta = reduction * (kernel * patch).sum() / (w2 * cols * cols).sum()
        assert plane_fit(patch, weights).beta == pytest.approx(beta, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            plane_fit(np.zeros((3, 3)), inverse_distance_weights(2))

    def test_degenerate_weights_rejected(self):
        with pytest.raises(ValueError):
            plane_fit(np.zeros((3, 3)), np.zeros((3, 3)))
