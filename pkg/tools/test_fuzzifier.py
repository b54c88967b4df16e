"""Tests for triangular partitions, membership and fuzzy vectors"""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tools.dataset import Instance
from tools.errors import PartitionError
from tools.fuzzifier import (
    FuzzyPartition,
    FuzzyVector,
    average_vector,
    build_partition,
    fit_partitions,
    fuzzify,
    fuzzify_dataset,
    membership,
    term_names,
)

finite_values = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def partitions_with(centers_per_feature):
    return tuple(FuzzyPartition(f, centers) for f, centers in enumerate(centers_per_feature))


class TestBuildPartition:
    def test_three_terms(self):
        assert build_partition([0, 1, 4, 2], 0, 3).centers == (0.0, 2.0, 4.0)

    def test_two_terms_are_endpoints(self):
        assert build_partition([3, 1, 5], 1, 2).centers == (1.0, 5.0)

    def test_constant_feature_is_widened(self):
        p = build_partition([3.0, 3.0, 3.0], 2, 2)
        assert p.centers == (3.0, 3.0 + 1e-6)

    def test_custom_epsilon(self):
        p = build_partition([1.0], 0, 3, epsilon=0.5)
        assert p.centers == (1.0, 1.5, 2.0)

    def test_empty_values(self):
        with pytest.raises(PartitionError, match="no values"):
            build_partition([], 0, 2)

    def test_k_below_two(self):
        with pytest.raises(PartitionError, match="k must be"):
            build_partition([1, 2], 0, 1)

    def test_fit_partitions_uses_training_range(self, iris):
        partitions = fit_partitions(iris, 2)
        assert [p.feature_index for p in partitions] == [0, 1, 2, 3]
        matrix = iris.feature_matrix()
        for p in partitions:
            assert p.centers == (matrix[:, p.feature_index].min(), matrix[:, p.feature_index].max())


class TestFuzzyPartition:
    def test_rejects_unsorted_centers(self):
        with pytest.raises(PartitionError, match="strictly increasing"):
            FuzzyPartition(0, (2.0, 1.0))

    def test_rejects_bad_feature(self):
        with pytest.raises(PartitionError):
            FuzzyPartition(4, (0.0, 1.0))

    def test_term_names(self):
        assert FuzzyPartition(0, (0, 1)).term_names == ("Low", "High")
        assert FuzzyPartition(0, (0, 1, 2)).term_names == ("Low", "Medium", "High")
        assert term_names(4) == ("T0", "T1", "T2", "T3")

    def test_to_dict(self):
        assert FuzzyPartition(2, (1.0, 6.9)).to_dict() == {
            "feature_index": 2,
            "feature": "petal_length",
            "centers": [1.0, 6.9],
        }


class TestMembership:
    def test_peak_at_center(self):
        p = FuzzyPartition(0, (0.0, 10.0, 20.0))
        assert membership(p, 10.0).tolist() == [0.0, 1.0, 0.0]

    def test_interpolates_between_centers(self):
        p = FuzzyPartition(0, (0.0, 10.0, 20.0))
        np.testing.assert_allclose(membership(p, 1.0), [0.9, 0.1, 0.0])

    def test_left_shoulder(self):
        assert membership(FuzzyPartition(0, (0.0, 10.0)), -5.0).tolist() == [1.0, 0.0]

    def test_right_shoulder(self):
        assert membership(FuzzyPartition(0, (0.0, 10.0)), 99.0).tolist() == [0.0, 1.0]

    def test_non_finite(self):
        with pytest.raises(PartitionError):
            membership(FuzzyPartition(0, (0.0, 1.0)), float("inf"))

    @settings(max_examples=300)
    @given(
        centers=st.lists(finite_values, min_size=2, max_size=5, unique=True).map(sorted),
        x=finite_values,
    )
    def test_partition_of_unity(self, centers, x):
        centers = tuple(centers)
        assume(all(b - a >= 1e-3 for a, b in zip(centers, centers[1:])))
        degrees = membership(FuzzyPartition(0, centers), x)
        assert abs(degrees.sum() - 1.0) <= 1e-9
        assert np.all(degrees >= 0) and np.all(degrees <= 1)
        assert np.count_nonzero(degrees) <= 2

    @pytest.mark.parametrize("centers", [(0.0, 10.0), (1.0, 2.5, 7.0), (4.3, 5.0, 5.8, 7.9)])
    def test_dense_sweep_is_continuous(self, centers):
        p = FuzzyPartition(0, centers)
        rng = np.random.default_rng(7)
        xs = np.sort(rng.uniform(centers[0] - 5, centers[-1] + 5, 10_000))
        min_gap = min(b - a for a, b in zip(centers, centers[1:]))

        previous_x, previous = xs[0], membership(p, xs[0])
        for x in xs[1:]:
            degrees = membership(p, x)
            assert abs(degrees.sum() - 1.0) <= 1e-9
            assert np.all((degrees >= 0) & (degrees <= 1))
            assert np.all(np.abs(degrees - previous) <= (x - previous_x) / min_gap + 1e-9)
            previous_x, previous = x, degrees


class TestFuzzify:
    def test_dimension_k3(self):
        partitions = partitions_with([(0, 5, 10)] * 4)
        v = fuzzify(Instance((1, 2, 3, 4), "a"), partitions)
        assert v.dimension == 12
        assert v.n_blocks == 4

    def test_dimension_k2(self, iris):
        partitions = fit_partitions(iris, 2)
        assert all(v.dimension == 8 for v in fuzzify_dataset(iris, partitions))

    def test_centers_give_one_hot_blocks(self):
        partitions = partitions_with([(0, 5, 10), (1, 2, 3), (0, 4, 8), (2, 3, 4)])
        v = fuzzify(Instance((5, 1, 8, 3), "a"), partitions)
        assert v.tolist() == [0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0]
        assert [v.term_of(f) for f in range(4)] == [1, 0, 2, 1]

    def test_block_order_follows_feature_index(self):
        partitions = partitions_with([(0, 10)] * 4)
        shuffled = tuple(reversed(partitions))
        inst = Instance((1, 2, 3, 4), "a")
        assert fuzzify(inst, shuffled) == fuzzify(inst, partitions)

    def test_missing_feature(self):
        partitions = partitions_with([(0, 10)] * 3)
        with pytest.raises(PartitionError, match="cover features"):
            fuzzify(Instance((1, 2, 3, 4), "a"), partitions)

    def test_mixed_k(self):
        partitions = partitions_with([(0, 10), (0, 10), (0, 5, 10), (0, 10)])
        with pytest.raises(PartitionError, match="share one k"):
            fuzzify(Instance((1, 2, 3, 4), "a"), partitions)


class TestFuzzyVector:
    def test_block_sums_validated(self):
        with pytest.raises(PartitionError, match="sum to 1"):
            FuzzyVector([0.5, 0.6], 2)

    def test_range_validated(self):
        with pytest.raises(PartitionError):
            FuzzyVector([1.5, -0.5], 2)

    def test_read_only(self):
        v = FuzzyVector([1.0, 0.0], 2)
        with pytest.raises(ValueError):
            v.degrees[0] = 0.5

    def test_tie_goes_to_lower_term(self):
        assert FuzzyVector([0.5, 0.5], 2).term_of(0) == 0


class TestAverageVector:
    def test_single_vector(self):
        v = FuzzyVector([0.3, 0.7, 1.0, 0.0], 2)
        assert average_vector([v]) == v

    def test_symmetric_pair(self):
        mean = average_vector([FuzzyVector([1.0, 0.0], 2), FuzzyVector([0.0, 1.0], 2)])
        assert mean.tolist() == [0.5, 0.5]

    def test_identical_vectors(self):
        v = FuzzyVector([0.25, 0.75, 0.0, 1.0], 2)
        assert average_vector([v] * 7) == v

    def test_empty(self):
        with pytest.raises(PartitionError, match="empty"):
            average_vector([])

    def test_mixed_dimensions(self):
        with pytest.raises(PartitionError, match="mixed layouts"):
            average_vector([FuzzyVector([1.0, 0.0], 2), FuzzyVector([1.0, 0.0, 0.0, 1.0], 2)])

    def test_blocks_still_sum_to_one(self, iris):
        vectors = fuzzify_dataset(iris, fit_partitions(iris, 3))
        mean = average_vector(vectors)
        np.testing.assert_allclose(mean.blocks().sum(axis=1), 1.0, atol=1e-9)
