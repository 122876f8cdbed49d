import math
from itertools import combinations, permutations

import numpy as np
import pytest

from aag.measures import (
    conditional_entropy,
    entropy,
    induce_partition,
    interaction_information,
    joint_entropy,
    multi_attribute_measure,
    mutual_information,
    normalized_measure,
    rokhlin_distance,
    symmetric_uncertainty,
    total_correlation,
)
from aag.table import DiscreteTable, table_from_rows

import oracles
from conftest import random_table, table_from_columns


class TestInducePartition:
    def test_binary_column_blocks(self, pair_table):
        part = induce_partition(pair_table, [0])
        assert part.blocks() == [[0, 2, 4, 5, 7, 8], [1, 3, 6, 9]]
        assert part.block_sizes.tolist() == [6, 4]

    def test_three_symbol_column_blocks(self, pair_table):
        part = induce_partition(pair_table, [1])
        # first-occurrence order: R, G, B
        assert part.blocks() == [[0, 2, 5, 8], [1, 3, 4, 9], [6, 7]]

    def test_distinct_column_gives_singletons(self, quad_table):
        part = induce_partition(quad_table, [0, 1, 2, 3])
        assert part.n_blocks == quad_table.n_rows
        assert all(s == 1 for s in part.block_sizes)

    def test_matches_brute_force_grouping(self):
        rng = np.random.default_rng(8)
        t = random_table(rng, n_rows=8, n_attrs=3)
        part = induce_partition(t, [0, 1, 2])
        assert part.blocks() == oracles.group_rows_by_tuple(t, (0, 1, 2))

    def test_rejects_empty_and_out_of_range(self, pair_table):
        with pytest.raises(ValueError):
            induce_partition(pair_table, [])
        with pytest.raises(ValueError):
            induce_partition(pair_table, [4])


class TestEntropy:
    def test_binary_partition(self, pair_table):
        assert entropy(induce_partition(pair_table, [0])) == pytest.approx(0.971, abs=1e-3)

    def test_three_block_partition(self, pair_table):
        assert entropy(induce_partition(pair_table, [1])) == pytest.approx(1.522, abs=1e-3)

    def test_constant_column_is_exactly_zero(self):
        t = table_from_rows([[0], [0], [0]])
        assert entropy(induce_partition(t, [0])) == 0.0

    def test_bounded_by_log_rows(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            t = random_table(rng, n_rows=int(rng.integers(2, 25)), n_attrs=2)
            h = joint_entropy(t, (0, 1))
            assert 0.0 <= h <= math.log2(t.n_rows) + 1e-12


class TestConditionalEntropy:
    def test_worked_pair_values(self, pair_table):
        assert conditional_entropy(pair_table, [0], [1]) == pytest.approx(0.525, abs=1e-3)
        assert conditional_entropy(pair_table, [1], [0]) == pytest.approx(1.076, abs=1e-3)

    def test_self_conditioning_is_zero(self, quad_table):
        for a in range(quad_table.n_attrs):
            assert conditional_entropy(quad_table, [a], [a]) == pytest.approx(0.0, abs=1e-12)

    def test_matches_double_sum_definition(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(5, 30)), n_attrs=3)
            got = conditional_entropy(t, [0], [1, 2])
            want = oracles.conditional_entropy_of(t, (0,), (1, 2))
            assert got == pytest.approx(want, abs=1e-9)

    def test_conditioning_never_increases_entropy(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(5, 30)), n_attrs=3)
            assert conditional_entropy(t, [0], [1]) <= joint_entropy(t, (0,)) + 1e-9
            assert conditional_entropy(t, [0], [1, 2]) <= conditional_entropy(t, [0], [1]) + 1e-9

    def test_chain_rule(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(5, 30)), n_attrs=4)
            h_joint = joint_entropy(t, (0, 1, 2, 3))
            h_chain = joint_entropy(t, (0, 1)) + conditional_entropy(t, [2, 3], [0, 1])
            assert h_joint == pytest.approx(h_chain, abs=1e-9)


class TestRokhlinDistance:
    def test_worked_pair_value(self, pair_table):
        assert rokhlin_distance(pair_table, [0], [1]) == pytest.approx(1.60, abs=1e-2)

    def test_zero_on_self(self, quad_table):
        for a in range(quad_table.n_attrs):
            assert rokhlin_distance(quad_table, [a], [a]) == 0.0

    def test_zero_iff_same_partition(self, seven_attr_table):
        # attributes 5 and 6 induce identical partitions
        assert rokhlin_distance(seven_attr_table, [5], [6]) == pytest.approx(0.0, abs=1e-12)
        assert rokhlin_distance(seven_attr_table, [4], [5]) > 0.01

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(5, 25)), n_attrs=3)
            d01 = rokhlin_distance(t, [0], [1])
            d10 = rokhlin_distance(t, [1], [0])
            assert d01 == pytest.approx(d10, abs=1e-12)
            d02 = rokhlin_distance(t, [0], [2])
            d12 = rokhlin_distance(t, [1], [2])
            assert d01 <= d02 + d12 + 1e-9


class TestInteractionInformation:
    def test_worked_triple_value(self, quad_table):
        assert interaction_information(quad_table, [0, 1, 2]) == pytest.approx(0.446, abs=1e-3)

    def test_pairs_are_zero(self, quad_table):
        assert interaction_information(quad_table, [0, 1]) == 0.0

    def test_symmetric_in_all_attributes(self, quad_table):
        values = {
            round(interaction_information(quad_table, list(p)), 12)
            for p in permutations([0, 1, 3])
        }
        assert len(values) == 1

    def test_matches_contingency_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            t = random_table(rng, n_rows=12, n_attrs=3)
            got = interaction_information(t, [0, 1, 2])
            assert got == pytest.approx(oracles.interaction_information_of(t, (0, 1, 2)), abs=1e-9)

    def test_rejects_unsupported_arity(self, quad_table):
        with pytest.raises(ValueError):
            interaction_information(quad_table, [0])
        with pytest.raises(ValueError):
            interaction_information(quad_table, [0, 1, 2, 3])


class TestMultiAttributeMeasure:
    def test_most_informative_triple(self, quad_table):
        assert multi_attribute_measure(quad_table, [0, 1, 2]) == pytest.approx(1.722, abs=1e-3)
        assert multi_attribute_measure(quad_table, [0, 1, 3]) == pytest.approx(1.469, abs=1e-3)

    def test_remaining_triples_match_oracle(self, quad_table):
        # frozen from the contingency-table oracle
        assert multi_attribute_measure(quad_table, [0, 2, 3]) == pytest.approx(
            2.2199730940219755, abs=1e-9
        )
        assert multi_attribute_measure(quad_table, [1, 2, 3]) == pytest.approx(
            1.4729055953200563, abs=1e-9
        )
        for trip in combinations(range(4), 3):
            got = multi_attribute_measure(quad_table, trip)
            assert got == pytest.approx(oracles.multi_attribute_of(quad_table, trip), abs=1e-9)

    def test_argmin_triple_is_the_correlated_one(self, quad_table):
        scored = {
            trip: multi_attribute_measure(quad_table, trip) for trip in combinations(range(4), 3)
        }
        assert min(scored, key=scored.get) == (0, 1, 3)

    def test_pair_reduces_to_rokhlin(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            t = random_table(rng, n_rows=int(rng.integers(5, 25)), n_attrs=2)
            assert multi_attribute_measure(t, [0, 1]) == rokhlin_distance(t, [0], [1])

    def test_identical_patterns_measure_zero(self):
        col = [0, 1, 2, 0, 1, 2]
        t = table_from_columns(col, col)
        assert multi_attribute_measure(t, [0, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_capped_set_takes_minimum_subset(self, quad_table):
        want = min(
            oracles.multi_attribute_of(quad_table, trip) for trip in combinations(range(4), 3)
        )
        assert multi_attribute_measure(quad_table, [0, 1, 2, 3], cap=3) == pytest.approx(
            want, abs=1e-12
        )

    def test_adding_an_attribute_can_raise_the_measure(self, quad_table):
        # a nested superset is not always closer: the all-distinct counter
        # contributes its own conditional entropy
        pair = multi_attribute_measure(quad_table, [0, 1])
        triple = multi_attribute_measure(quad_table, [0, 1, 2])
        assert pair < triple

    def test_rejects_single_attribute_and_bad_cap(self, quad_table):
        with pytest.raises(ValueError):
            multi_attribute_measure(quad_table, [0])
        with pytest.raises(ValueError):
            multi_attribute_measure(quad_table, [0, 1], cap=4)


class TestNormalizedMeasure:
    def test_worked_values(self, seven_attr_table):
        assert normalized_measure(seven_attr_table, [5], [6]) == pytest.approx(0.0, abs=1e-12)
        assert normalized_measure(seven_attr_table, [5, 6], [0]) == pytest.approx(0.292, abs=5e-3)
        assert normalized_measure(seven_attr_table, [0], [2]) == pytest.approx(0.708, abs=5e-3)
        assert normalized_measure(seven_attr_table, [0, 5, 6], [2]) == pytest.approx(
            0.051, abs=5e-3
        )

    def test_capped_union_scans_subsets_touching_both_sides(self, seven_attr_table):
        got = normalized_measure(seven_attr_table, [0, 2, 5, 6], [3])
        want = oracles.normalized_measure_of(seven_attr_table, (0, 2, 5, 6), (3,))
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(0.1718732549730363, abs=1e-9)

    def test_symmetric(self, seven_attr_table):
        for a, b in [((0,), (2,)), ((0, 5, 6), (2,)), ((0, 2, 5, 6), (3,))]:
            assert normalized_measure(seven_attr_table, a, b) == normalized_measure(
                seven_attr_table, b, a
            )

    def test_single_attribute_pairs_stay_in_unit_interval(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(4, 25)), n_attrs=2)
            value = normalized_measure(t, [0], [1])
            assert -1e-12 <= value <= 1.0 + 1e-12

    def test_degenerate_union_scores_zero(self):
        t = table_from_rows([[0, 0], [0, 0], [0, 0]])
        assert normalized_measure(t, [0], [1]) == 0.0


class TestTotalCorrelation:
    def test_worked_values(self, quad_table):
        assert total_correlation(quad_table, [0, 1, 3]) == pytest.approx(1.093, abs=1e-3)
        assert total_correlation(quad_table, [0, 1, 2]) == pytest.approx(2.493, abs=1e-3)

    def test_single_attribute_is_zero(self, quad_table):
        for a in range(quad_table.n_attrs):
            assert total_correlation(quad_table, [a]) == 0.0

    def test_non_negative_and_non_decreasing(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            t = random_table(rng, n_rows=int(rng.integers(5, 30)), n_attrs=4)
            tc3 = total_correlation(t, [0, 1, 2])
            tc4 = total_correlation(t, [0, 1, 2, 3])
            assert tc3 >= 0.0
            assert tc4 >= tc3 - 1e-9

    def test_matches_oracle(self, quad_table):
        for trip in combinations(range(4), 3):
            assert total_correlation(quad_table, trip) == pytest.approx(
                oracles.total_correlation_of(quad_table, trip), abs=1e-9
            )


class TestSymmetricUncertainty:
    def test_self_is_one(self, quad_table):
        for a in range(quad_table.n_attrs):
            assert symmetric_uncertainty(quad_table, a, a) == pytest.approx(1.0, abs=1e-12)

    def test_independent_attributes_give_zero(self):
        t = table_from_rows([[0, 0], [0, 1], [1, 0], [1, 1]])
        assert symmetric_uncertainty(t, 0, 1) == pytest.approx(0.0, abs=1e-12)

    def test_both_constant_gives_zero(self):
        t = table_from_rows([[0, 0], [0, 0]])
        assert symmetric_uncertainty(t, 0, 1) == 0.0

    def test_matches_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            t = random_table(rng, n_rows=10, n_attrs=2)
            assert symmetric_uncertainty(t, 0, 1) == pytest.approx(
                oracles.symmetric_uncertainty_of(t, 0, 1), abs=1e-9
            )


class TestInvariances:
    def test_row_permutation_leaves_measures_unchanged(self):
        rng = np.random.default_rng(12)
        t = random_table(rng, n_rows=20, n_attrs=3)
        shuffled = t.take_rows(rng.permutation(20))
        assert joint_entropy(shuffled, (0, 1, 2)) == pytest.approx(
            joint_entropy(t, (0, 1, 2)), abs=1e-12
        )
        assert rokhlin_distance(shuffled, [0], [1]) == pytest.approx(
            rokhlin_distance(t, [0], [1]), abs=1e-12
        )
        assert multi_attribute_measure(shuffled, [0, 1, 2]) == pytest.approx(
            multi_attribute_measure(t, [0, 1, 2]), abs=1e-12
        )

    def test_code_relabeling_leaves_measures_unchanged(self):
        rng = np.random.default_rng(13)
        t = random_table(rng, n_rows=20, n_attrs=2)
        relabeled = []
        for j in range(2):
            arity = t.arities[j]
            perm = rng.permutation(arity)
            relabeled.append(perm[t.codes[:, j]])
        t2 = DiscreteTable(np.column_stack(relabeled))
        assert rokhlin_distance(t2, [0], [1]) == pytest.approx(
            rokhlin_distance(t, [0], [1]), abs=1e-12
        )
        assert mutual_information(t2, (0,), (1,)) == pytest.approx(
            mutual_information(t, (0,), (1,)), abs=1e-12
        )

    def test_memoized_entropy_matches_fresh_table(self):
        rng = np.random.default_rng(14)
        t = random_table(rng, n_rows=25, n_attrs=4)
        first = joint_entropy(t, (0, 2, 3))
        again = joint_entropy(t, (0, 2, 3))
        fresh = joint_entropy(DiscreteTable(t.codes.copy()), (0, 2, 3))
        assert first == again == fresh

    def test_concurrent_measure_calls_agree(self):
        from concurrent.futures import ThreadPoolExecutor

        rng = np.random.default_rng(15)
        t = random_table(rng, n_rows=40, n_attrs=5)
        queries = [tuple(sorted(rng.choice(5, size=int(rng.integers(1, 4)), replace=False)))
                   for _ in range(60)]
        want = {q: joint_entropy(DiscreteTable(t.codes.copy()), q) for q in set(queries)}
        # hammer the shared memo from several threads; duplicate computation
        # of a key is fine, the values must all come out identical
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda q: (q, joint_entropy(t, q)), queries * 5))
        for q, h in results:
            assert h == want[q]
