import numpy as np
import pytest

from demoselect import (
    DemoSet,
    LandscapeParams,
    OneShotMatrix,
    OneShotMatrixEvaluator,
    SubsetTable,
    SubsetTableEvaluator,
    SyntheticEvaluator,
    aggregate_heldout_score,
    brute_force_best,
    canonicalize,
    load_one_shot_matrix,
    load_subset_table,
    save_one_shot_matrix,
    save_subset_table,
    subset_count,
    tabulated_evaluate,
)
from demoselect.core import enumerate_subsets
from demoselect.errors import (
    CardinalityUnsupported,
    EmptyDemoSet,
    EmptyQuerySet,
    MissingEntry,
    OverlapError,
    ParseError,
    PoolTooLarge,
)


def table_from(entries):
    return SubsetTableEvaluator(
        SubsetTable({(canonicalize(s).members, q): v for s, q, v in entries})
    )


class TestAggregate:
    def test_single_query(self):
        ev = table_from([([1], 9, 0.7)])
        assert aggregate_heldout_score(ev, DemoSet((1,)), [9]).value == 0.7

    def test_mean_of_two(self):
        ev = table_from([([1], 8, 0.2), ([1], 9, 0.4)])
        u = aggregate_heldout_score(ev, DemoSet((1,)), [8, 9])
        assert u.value == pytest.approx(0.3, abs=1e-15)

    def test_modular_landscape_recomputed_from_base(self):
        ev = SyntheticEvaluator(LandscapeParams(n_demos=4, n_queries=4, seed=0))
        A = ev.base_matrix
        u = aggregate_heldout_score(ev, DemoSet((0, 1)), [6, 7])
        expected = ((A[0, 6] + A[1, 6]) + (A[0, 7] + A[1, 7])) / 2
        assert u.value == expected

    def test_exact_call_count(self):
        ev = SyntheticEvaluator(LandscapeParams(n_demos=4, n_queries=6, seed=0))
        aggregate_heldout_score(ev, DemoSet((0, 1)), [4, 5, 6])
        assert ev.call_count == 3

    def test_empty_query_set(self):
        ev = table_from([([1], 9, 0.7)])
        with pytest.raises(EmptyQuerySet):
            aggregate_heldout_score(ev, DemoSet((1,)), [])

    def test_overlap_error(self):
        ev = table_from([([1], 9, 0.7)])
        with pytest.raises(OverlapError):
            aggregate_heldout_score(ev, DemoSet((1,)), [1, 9])

    def test_empty_demo_set_rejected(self):
        ev = table_from([([1], 9, 0.7)])
        with pytest.raises(EmptyDemoSet):
            aggregate_heldout_score(ev, DemoSet(()), [9])


class TestBruteForce:
    def test_hand_enumerated_best(self):
        ev = table_from(
            [([1], 9, 0.3), ([2], 9, 0.5), ([1, 2], 9, 0.4)]
        )
        best_set, best_u = brute_force_best(ev, [1, 2], [9])
        assert best_set == DemoSet((2,))
        assert best_u.value == 0.5

    def test_tie_breaks_to_enumeration_order(self):
        ev = table_from(
            [([1], 9, 0.5), ([2], 9, 0.5), ([1, 2], 9, 0.1)]
        )
        best_set, _ = brute_force_best(ev, [1, 2], [9])
        assert best_set == DemoSet((1,))

    def test_modular_positive_returns_full_set(self):
        # Every base entry is positive, so the sum over all six is optimal;
        # confirmed against explicit enumeration of aggregate sums from A.
        ev = SyntheticEvaluator(LandscapeParams(n_demos=6, n_queries=10, seed=1))
        queries = list(range(6, 16))
        best_set, best_u = brute_force_best(ev, list(range(6)), queries)
        assert best_set == DemoSet(tuple(range(6)))
        A = ev.base_matrix
        expected_best = None
        for subset in enumerate_subsets(range(6)):
            total = 0.0
            for q in queries:
                col = 0.0
                for i in subset:
                    col += A[i, q]
                total += col
            mean = total / len(queries)
            if expected_best is None or mean > expected_best:
                expected_best = mean
        assert best_u.value == pytest.approx(expected_best, abs=1e-12)

    def test_best_dominates_every_subset(self):
        ev = SyntheticEvaluator(
            LandscapeParams(n_demos=5, n_queries=6, seed=3, interaction_scale=0.7)
        )
        queries = list(range(5, 11))
        _, best_u = brute_force_best(ev, list(range(5)), queries)
        for subset in enumerate_subsets(range(5)):
            probe = SyntheticEvaluator(
                LandscapeParams(n_demos=5, n_queries=6, seed=3, interaction_scale=0.7)
            )
            assert aggregate_heldout_score(probe, subset, queries).value <= best_u.value

    def test_call_count_is_subsets_times_queries(self):
        ev = SyntheticEvaluator(LandscapeParams(n_demos=4, n_queries=6, seed=0))
        queries = [4, 5, 6]
        brute_force_best(ev, list(range(4)), queries)
        assert ev.call_count == subset_count(4) * len(queries)

    def test_pool_too_large(self):
        ev = table_from([([1], 9, 0.3)])
        with pytest.raises(PoolTooLarge):
            brute_force_best(ev, list(range(25)), [100])

    def test_candidate_query_overlap(self):
        ev = table_from([([1], 9, 0.3)])
        with pytest.raises(OverlapError):
            brute_force_best(ev, [1, 2], [2])


class TestOneShotMatrix:
    def make(self):
        return OneShotMatrix(
            demo_ids=(4, 7),
            query_ids=(9, 12),
            values=np.array([[0.37, 0.4], [0.1, 0.2]]),
        )

    def test_lookup(self):
        ev = OneShotMatrixEvaluator(self.make())
        assert ev.evaluate(DemoSet((4,)), 9).value == 0.37

    def test_cardinality_unsupported(self):
        ev = OneShotMatrixEvaluator(self.make())
        with pytest.raises(CardinalityUnsupported):
            ev.evaluate(DemoSet((4, 7)), 9)

    def test_missing_ids(self):
        ev = OneShotMatrixEvaluator(self.make())
        with pytest.raises(MissingEntry):
            ev.evaluate(DemoSet((5,)), 9)
        with pytest.raises(MissingEntry):
            ev.evaluate(DemoSet((4,)), 10)

    def test_round_trip(self, tmp_path):
        matrix = self.make()
        path = tmp_path / "m.csv"
        save_one_shot_matrix(matrix, path)
        loaded = load_one_shot_matrix(path)
        assert loaded.demo_ids == matrix.demo_ids
        assert loaded.query_ids == matrix.query_ids
        assert loaded.values.tobytes() == matrix.values.tobytes()

    def test_parse_errors(self, tmp_path):
        bad_header = tmp_path / "a.csv"
        bad_header.write_text("demo,9,12\n4,0.1,0.2\n")
        with pytest.raises(ParseError):
            load_one_shot_matrix(bad_header)
        ragged = tmp_path / "b.csv"
        ragged.write_text("demo\\query,9,12\n4,0.1\n")
        with pytest.raises(ParseError):
            load_one_shot_matrix(ragged)
        not_number = tmp_path / "c.csv"
        not_number.write_text("demo\\query,9\n4,zebra\n")
        with pytest.raises(ParseError):
            load_one_shot_matrix(not_number)
        non_finite = tmp_path / "d.csv"
        non_finite.write_text("demo\\query,9\n4,nan\n")
        with pytest.raises(ParseError):
            load_one_shot_matrix(non_finite)


class TestSubsetTable:
    def test_missing_entry_never_a_default(self):
        ev = table_from([([1, 3], 7, 0.5)])
        with pytest.raises(MissingEntry):
            ev.evaluate(DemoSet((1, 3)), 8)
        with pytest.raises(MissingEntry):
            ev.evaluate(DemoSet((1,)), 7)

    def test_round_trip(self, tmp_path):
        rows = [
            (DemoSet((1,)), 7, 0.25),
            (DemoSet((1, 3)), 7, 0.5),
        ]
        path = tmp_path / "t.jsonl"
        save_subset_table(rows, path)
        table = load_subset_table(path)
        assert table.value(DemoSet((1, 3)), 7) == 0.5
        assert table.member_ids == (1, 3)

    def test_parse_errors(self, tmp_path):
        descending = tmp_path / "a.jsonl"
        descending.write_text('{"set": [3, 1], "query": 7, "utility": 0.5}\n')
        with pytest.raises(ParseError):
            load_subset_table(descending)
        duplicate = tmp_path / "b.jsonl"
        duplicate.write_text(
            '{"set": [1], "query": 7, "utility": 0.5}\n'
            '{"set": [1], "query": 7, "utility": 0.6}\n'
        )
        with pytest.raises(ParseError):
            load_subset_table(duplicate)
        missing_field = tmp_path / "c.jsonl"
        missing_field.write_text('{"set": [1], "utility": 0.5}\n')
        with pytest.raises(ParseError):
            load_subset_table(missing_field)


class TestTabulatedEvaluate:
    def test_dispatches_on_backend_type(self):
        matrix = OneShotMatrix((4,), (9,), np.array([[0.37]]))
        assert tabulated_evaluate(matrix, DemoSet((4,)), 9).value == 0.37
        table = SubsetTable({((1, 3), 7): 0.5})
        assert tabulated_evaluate(table, DemoSet((1, 3)), 7).value == 0.5

    def test_rejects_other_types(self):
        with pytest.raises(TypeError):
            tabulated_evaluate({}, DemoSet((1,)), 7)


class TestPurity:
    def test_replay_is_bit_identical(self):
        evaluators = {
            "synthetic": SyntheticEvaluator(
                LandscapeParams(
                    n_demos=5, n_queries=6, seed=11,
                    interaction_scale=0.5, noise_scale=0.1,
                )
            ),
            "table": table_from(
                [([0, 1], 5, 0.123456789), ([0], 5, 0.5), ([1], 6, -2.5)]
            ),
        }
        probes = {
            "synthetic": [(DemoSet((0, 2)), 6), (DemoSet((1,)), 9), (DemoSet((0, 1, 4)), 5)],
            "table": [(DemoSet((0, 1)), 5), (DemoSet((0,)), 5), (DemoSet((1,)), 6)],
        }
        for name, ev in evaluators.items():
            first = [ev.evaluate(d, q).value for d, q in probes[name]]
            second = [ev.evaluate(d, q).value for d, q in probes[name]]
            assert first == second
