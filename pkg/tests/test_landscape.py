import numpy as np
import pytest

from demoselect import DemoSet, LandscapeParams, PlantedSpec, SyntheticEvaluator, synth_evaluate
from demoselect.core import enumerate_subsets
from demoselect.errors import ConfigError, IndexOutOfRange
from demoselect.landscape import BASE_HI, BASE_LO, planted_column_count


def modular_params(seed=0, n_demos=6, n_queries=8):
    return LandscapeParams(n_demos=n_demos, n_queries=n_queries, seed=seed)


class TestGeneration:
    def test_base_matrix_range(self):
        ev = SyntheticEvaluator(modular_params())
        A = ev.base_matrix
        assert A.shape == (6, 14)  # one column per global id
        assert np.all(A >= BASE_LO) and np.all(A <= BASE_HI)

    def test_interaction_matrix_symmetric_zero_diag(self):
        ev = SyntheticEvaluator(modular_params())
        B = ev.interaction_matrix
        assert np.array_equal(B, B.T)
        assert np.all(np.diag(B) == 0.0)
        assert np.all(np.abs(B) <= 1.0)

    def test_same_seed_same_landscape(self):
        a = SyntheticEvaluator(modular_params(seed=3))
        b = SyntheticEvaluator(modular_params(seed=3))
        assert a.base_matrix.tobytes() == b.base_matrix.tobytes()

    def test_planted_rewrites_expected_columns(self):
        params = LandscapeParams(
            n_demos=6, n_queries=10, seed=1,
            planted=PlantedSpec(demo_index=2, gamma=0.3, high_value=0.9),
        )
        ev = SyntheticEvaluator(params)
        # ceil(0.3 * 10) = 3 planted columns
        assert len(ev.planted_query_ids) == 3
        for q in ev.planted_query_ids:
            assert q >= 6  # planting only touches the query block
            assert ev.base_matrix[2, q] == 0.9

    def test_planted_count_epsilon_safe(self):
        assert planted_column_count(0.3, 200) == 60
        assert planted_column_count(0.1, 10) == 1
        assert planted_column_count(1.0, 7) == 7
        assert planted_column_count(0.01, 10) == 1


class TestValidation:
    def test_rejects_bad_aggregator(self):
        with pytest.raises(ConfigError):
            LandscapeParams(n_demos=2, n_queries=2, seed=0, aggregator="max")

    def test_rejects_low_high_value(self):
        with pytest.raises(ConfigError):
            LandscapeParams(
                n_demos=2, n_queries=2, seed=0,
                planted=PlantedSpec(demo_index=0, gamma=0.5, high_value=0.5),
            )

    def test_rejects_planted_index_out_of_range(self):
        with pytest.raises(ConfigError):
            LandscapeParams(
                n_demos=2, n_queries=2, seed=0,
                planted=PlantedSpec(demo_index=5, gamma=0.5, high_value=0.9),
            )

    def test_index_out_of_range_at_evaluate(self):
        ev = SyntheticEvaluator(modular_params())
        with pytest.raises(IndexOutOfRange):
            ev.evaluate(DemoSet((0,)), 99)  # query beyond the id range
        with pytest.raises(IndexOutOfRange):
            ev.evaluate(DemoSet((7,)), 6)  # query id used as demo

    def test_pool_members_are_valid_queries(self):
        # loocv and the split protocol score pool members as queries
        ev = SyntheticEvaluator(modular_params())
        assert ev.evaluate(DemoSet((0,)), 3).value == ev.base_matrix[0, 3]


class TestScoring:
    def test_singleton_equals_base_entry(self):
        ev = SyntheticEvaluator(modular_params())
        for i in range(6):
            for q in range(6, 14):
                assert ev.evaluate(DemoSet((i,)), q).value == ev.base_matrix[i, q]

    def test_modular_pair_is_sum(self):
        ev = SyntheticEvaluator(modular_params())
        A = ev.base_matrix
        v = ev.evaluate(DemoSet((0, 1)), 7).value
        assert v == A[0, 7] + A[1, 7]

    def test_exactly_modular_over_all_subsets(self):
        # Set evaluation must equal the sum of singleton evaluations for
        # every subset at n = 6 when lam = sigma = 0 and AGG = sum.
        ev = SyntheticEvaluator(modular_params())
        singles = {
            i: [ev.evaluate(DemoSet((i,)), q).value for q in range(6, 14)]
            for i in range(6)
        }
        for subset in enumerate_subsets(range(6)):
            for jq, q in enumerate(range(6, 14)):
                expected = 0.0
                for i in subset:
                    expected += singles[i][jq]
                assert ev.evaluate(subset, q).value == expected

    def test_mean_aggregator(self):
        params = LandscapeParams(n_demos=4, n_queries=4, seed=2, aggregator="mean")
        ev = SyntheticEvaluator(params)
        A = ev.base_matrix
        v = ev.evaluate(DemoSet((0, 2)), 5).value
        assert v == (A[0, 5] + A[2, 5]) / 2

    def test_pairwise_term_from_interaction_matrix(self):
        params = LandscapeParams(
            n_demos=4, n_queries=4, seed=2, interaction_scale=0.5
        )
        ev = SyntheticEvaluator(params)
        A, B = ev.base_matrix, ev.interaction_matrix
        demos = DemoSet((0, 1, 3))
        got = ev.evaluate(demos, 4).value
        base = A[0, 4] + A[1, 4] + A[3, 4]
        pair_mean = (B[0, 1] + B[0, 3] + B[1, 3]) / 3
        assert got == pytest.approx(base + 0.5 * pair_mean, abs=1e-15)

    def test_pairwise_term_zero_for_singletons(self):
        with_pairs = LandscapeParams(n_demos=4, n_queries=4, seed=2, interaction_scale=9.0)
        without = LandscapeParams(n_demos=4, n_queries=4, seed=2)
        a = SyntheticEvaluator(with_pairs).evaluate(DemoSet((1,)), 5).value
        b = SyntheticEvaluator(without).evaluate(DemoSet((1,)), 5).value
        assert a == b

    def test_noise_deterministic_and_bounded(self):
        params = LandscapeParams(n_demos=4, n_queries=4, seed=2, noise_scale=0.25)
        ev = SyntheticEvaluator(params)
        quiet = SyntheticEvaluator(LandscapeParams(n_demos=4, n_queries=4, seed=2))
        demos = DemoSet((0, 2))
        noisy1 = ev.evaluate(demos, 6).value
        noisy2 = ev.evaluate(demos, 6).value
        assert noisy1 == noisy2
        assert abs(noisy1 - quiet.evaluate(demos, 6).value) <= 0.25

    def test_planted_columns_won_by_planted_demo(self):
        params = LandscapeParams(
            n_demos=6, n_queries=50, seed=9,
            planted=PlantedSpec(demo_index=4, gamma=0.3, high_value=0.9),
        )
        ev = SyntheticEvaluator(params)
        A = ev.base_matrix
        for q in ev.planted_query_ids:
            col = A[:, q]
            assert int(np.argmax(col)) == 4
            assert col[4] == 0.9

    def test_evaluate_many_matches_singles(self):
        params = LandscapeParams(
            n_demos=5, n_queries=6, seed=4, interaction_scale=0.3, noise_scale=0.2
        )
        ev = SyntheticEvaluator(params)
        demos = DemoSet((0, 2, 4))
        queries = list(range(5, 11))
        batch = ev.evaluate_values(demos, queries)
        for q, v in zip(queries, batch):
            assert ev.evaluate(demos, q).value == float(v)

    def test_call_counter(self):
        ev = SyntheticEvaluator(modular_params())
        ev.evaluate(DemoSet((0,)), 6)
        ev.evaluate_values(DemoSet((0,)), [6, 7, 8])
        assert ev.call_count == 4

    def test_synth_evaluate_convenience(self):
        params = modular_params()
        ev = SyntheticEvaluator(params)
        assert synth_evaluate(params, DemoSet((1, 2)), 9).value == ev.evaluate(
            DemoSet((1, 2)), 9
        ).value
